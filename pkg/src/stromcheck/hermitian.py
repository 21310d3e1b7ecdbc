"""Invariant hermitian structures: Kahler form, Lee form, special-metric classification.

All data are left-invariant, so functions such as log ||Omega|| are constants
and the conformal law for the Lee form is only exercised for constant
rescalings (d phi = 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cxstruct import AlmostComplexStructure, dc, j_action, pq_project
from .exterior import RESIDUAL_TOL, Form, MetricTensor, hodge_star, lambda_contract, wedge, wedge_power
from .liealg import LieAlgebraModel, ce_differential


class CompatibilityError(ValueError):
    """The metric is not J-invariant."""


class ConventionError(RuntimeError):
    """Two formulas for the same quantity disagree; an internal sign convention is broken."""


class HermitianData:
    """Invariant hermitian structure (J, g) on a Lie algebra, optionally with Omega.

    Parameters
    ----------
    alg : LieAlgebraModel
    J : AlmostComplexStructure
    g : MetricTensor
    Omega : Form, optional
        Degree-n form of type (n, 0).
    """

    def __init__(self, alg: LieAlgebraModel, J: AlmostComplexStructure, g: MetricTensor,
                 Omega: Form | None = None):
        if not (alg.dim == J.dim == g.dim):
            raise ValueError(f"dimension mismatch: algebra {alg.dim}, J {J.dim}, metric {g.dim}")
        gm = g.matrix
        compat = np.abs(J.matrix.T @ gm @ J.matrix - gm).max()
        if compat > 1e-12 * max(1.0, np.abs(gm).max()):
            raise CompatibilityError(f"g(J., J.) != g (max deviation {compat:.3g})")
        self.alg = alg
        self.J = J
        self.g = g
        self.n = J.n
        self.Omega = None
        if Omega is not None:
            if Omega.dim != alg.dim or Omega.degrees != {self.n}:
                raise ValueError(f"Omega must be a nonzero form of degree {self.n}")
            off = (Omega - pq_project(J, Omega, self.n, 0)).norm()
            if off > 1e-10:
                raise ValueError(f"Omega is not of type ({self.n},0) (off-type part {off:.3g})")
            self.Omega = Omega
        self._omega = None

    def with_metric(self, g: MetricTensor) -> "HermitianData":
        return HermitianData(self.alg, self.J, g, self.Omega)

    def scaled(self, factor: float) -> "HermitianData":
        return self.with_metric(MetricTensor(factor * self.g.matrix))

    @property
    def omega(self) -> Form:
        if self._omega is None:
            self._omega = kahler_form(self)
        return self._omega

    def d(self, a: Form) -> Form:
        return ce_differential(self.alg, a)

    def codifferential(self, a: Form) -> Form:
        """d* = -*d* (valid in every degree on even-dimensional spaces)."""
        return -hodge_star(self.g, self.d(hodge_star(self.g, a)))

    def holomorphic_volume_residual(self) -> float:
        """|d Omega| (zero for a genuine holomorphic volume form)."""
        if self.Omega is None:
            raise ValueError("no Omega supplied")
        return self.d(self.Omega).norm()


def kahler_form(h: HermitianData) -> Form:
    """omega(V, W) = g(JV, W)."""
    mat = h.J.matrix.T @ h.g.matrix
    return Form.from_tensor(mat).real


def lee_form(h: HermitianData, tol: float = 1e-10) -> Form:
    """Lee form Lambda_omega(d omega), cross-checked against J d* omega."""
    omega = h.omega
    theta = lambda_contract(omega, h.d(omega))
    alt = j_action(h.J, h.codifferential(omega))
    gap = (theta - alt).norm()
    scale = max(1.0, theta.norm())
    if gap > tol * scale:
        raise ConventionError(f"Lambda d omega and J d* omega differ by {gap:.3g}")
    return theta.real


@dataclass(frozen=True)
class Classification:
    """Residual norms and flags for the Kahler / balanced / Gauduchon conditions."""

    d_omega: float
    d_omega_n1: float
    ddc_omega_n1: float
    kahler: bool
    balanced: bool
    gauduchon: bool
    tolerance: float

    def as_dict(self) -> dict:
        return {
            "residuals": {"d_omega": self.d_omega, "d_omega_n_minus_1": self.d_omega_n1,
                          "ddc_omega_n_minus_1": self.ddc_omega_n1},
            "kahler": self.kahler,
            "balanced": self.balanced,
            "gauduchon": self.gauduchon,
        }


def classify(h: HermitianData, tol: float = RESIDUAL_TOL) -> Classification:
    omega = h.omega
    pw = wedge_power(omega, h.n - 1)
    r_k = h.d(omega).norm()
    r_b = h.d(pw).norm()
    r_g = h.d(dc(h.alg, h.J, pw)).norm()
    kahler = r_k < tol
    balanced = kahler or r_b < tol
    gauduchon = balanced or r_g < tol
    return Classification(r_k, r_b, r_g, kahler, balanced, gauduchon, tol)


def omega_norm(h: HermitianData) -> float:
    """||Omega||_omega from ||Omega||^2 omega^n/n! = (-1)^{n(n-1)/2} i^n Omega ^ conj(Omega)."""
    if h.Omega is None:
        raise ValueError("omega_norm needs Omega")
    n = h.n
    top = tuple(range(1, h.alg.dim + 1))
    vol = wedge_power(h.omega, n)[top] / math.factorial(n)
    rhs = (-1) ** (n * (n - 1) // 2) * 1j ** n * wedge(h.Omega, h.Omega.conj())[top]
    ratio = rhs / vol
    if abs(ratio.imag) > 1e-10 * max(1.0, abs(ratio)) or ratio.real <= 0:
        raise ValueError(f"Omega ^ conj(Omega) is not a positive multiple of the volume form (ratio {ratio:.6g})")
    return math.sqrt(ratio.real)


def dilatino_residual(h: HermitianData) -> tuple[float, float]:
    """(|d* omega - d^c log ||Omega|||, |d(||Omega|| omega^{n-1})|).

    ||Omega|| is constant on invariant data, so its d^c-logarithm vanishes.
    """
    norm = omega_norm(h)
    first = h.codifferential(h.omega).norm()
    second = h.d(norm * wedge_power(h.omega, h.n - 1)).norm()
    return first, second


def conformally_balanced_residual(h: HermitianData) -> float:
    return dilatino_residual(h)[1]
