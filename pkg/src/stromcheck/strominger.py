"""Residuals of the Strominger system on invariant data.

The system couples a hermitian metric omega on (X, Omega), a unitary
connection A on a bundle E and a unitary connection nabla on (TM, J, g):

    Lambda F_A = 0,  F_A^{0,2} = 0
    Lambda R   = 0,  R^{0,2} = 0
    d(||Omega|| omega^{n-1}) = 0
    dd^c omega - alpha (tr R ^ R - tr F_A ^ F_A) = 0

``tr`` on the tangent bundle is the complex trace of (TM, J), see
:meth:`stromcheck.gauge.Pairing.tangent`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cxstruct import dc
from .exterior import RESIDUAL_TOL, Form
from .gauge import Connection, Pairing, c_square, curvature, direct_sum, hym_residual
from .hermitian import HermitianData, classify, dilatino_residual

SOLVE = "solve"


@dataclass
class StromingerModel:
    """The tuple (h, nabla, A, c, alpha).

    ``pairingc`` is the alpha-free signed trace on tangent + bundle blocks;
    the Bianchi identity uses ``alpha * pairingc``. The default is
    tr_T - tr_E.
    """

    h: HermitianData
    nablaT: Connection
    A: Connection
    pairingc: Pairing | None = None
    alpha: float | str = SOLVE
    strict_hym_nabla: bool = True
    name: str = ""

    def __post_init__(self):
        m = self.h.alg.dim
        if self.nablaT.dim != m or self.nablaT.rank != m:
            raise ValueError(f"nabla must be a rank-{m} connection over the {m}-dimensional algebra")
        if self.A.dim != m:
            raise ValueError("A is defined over a different number of directions")
        if self.h.Omega is None:
            raise ValueError("the Strominger system needs a holomorphic volume form Omega")
        if self.pairingc is None:
            self.pairingc = Pairing.tangent(m) + Pairing.trace(self.A.rank, -1.0)
        if self.pairingc.rank != m + self.A.rank:
            raise ValueError(f"pairing rank {self.pairingc.rank} != {m} + {self.A.rank}")
        if not (self.alpha == SOLVE or isinstance(self.alpha, (int, float))):
            raise ValueError(f"alpha must be a number or {SOLVE!r}")

    @property
    def theta(self) -> Connection:
        """The product connection nabla x A."""
        return direct_sum(self.nablaT, self.A)

    def ddc_omega(self) -> Form:
        h = self.h
        return h.d(dc(h.alg, h.J, h.omega))

    def pontryagin_difference(self) -> Form:
        """P = c(F_theta ^ F_theta) for the alpha-free pairing (tr R^R - tr F^F by default)."""
        return c_square(self.pairingc, curvature(self.h.alg, self.theta))


def bianchi_residual(m: StromingerModel, alpha: float) -> Form:
    """dd^c omega - alpha P."""
    return (m.ddc_omega() - alpha * m.pontryagin_difference()).real


def bianchi_residual_split(m: StromingerModel, alpha: float) -> Form:
    """Same residual assembled block by block from the separate curvatures."""
    alg = m.h.alg
    dim = alg.dim
    blocks = m.pairingc.blocks
    # first blocks cover the tangent rank, the rest the bundle
    tangent, bundle, pos = [], [], 0
    for s, w in blocks:
        (tangent if pos < dim else bundle).append((s, w))
        pos += s
    rt = c_square(Pairing(tuple(tangent)), curvature(alg, m.nablaT))
    fa = c_square(Pairing(tuple(bundle)), curvature(alg, m.A)) if bundle else Form.zero(dim)
    return (m.ddc_omega() - alpha * (rt + fa)).real


@dataclass(frozen=True)
class AlphaOutcome:
    """Result of :func:`solve_alpha`.

    status is one of ``exact``, ``least_squares``, ``no_alpha`` (P = 0 but
    dd^c omega != 0) or ``degenerate`` (both vanish, any alpha works; alpha
    is reported as 0).
    """

    alpha: float | None
    residual: float
    status: str

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "residual": self.residual, "status": self.status}


def solve_alpha(m: StromingerModel, tol: float = RESIDUAL_TOL) -> AlphaOutcome:
    d = m.ddc_omega().vector(4).real
    p = m.pontryagin_difference().vector(4).real
    pn = np.abs(p).max(initial=0.0)
    dn = np.abs(d).max(initial=0.0)
    if pn < tol:
        if dn < tol:
            return AlphaOutcome(0.0, float(dn), "degenerate")
        return AlphaOutcome(None, float(dn), "no_alpha")
    alpha = float(p @ d / (p @ p))
    residual = bianchi_residual(m, alpha).norm()
    return AlphaOutcome(alpha, residual, "exact" if residual < tol else "least_squares")


@dataclass
class SystemReport:
    """Residuals and per-equation flags of :func:`check_system`."""

    residuals: dict
    alpha_used: float | None
    alpha_outcome: AlphaOutcome | None
    flags: dict
    informational: dict
    classification: dict
    tolerance: float
    strict_hym_nabla: bool
    name: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "residuals": self.residuals,
            "alpha_used": self.alpha_used,
            "alpha_outcome": None if self.alpha_outcome is None else self.alpha_outcome.as_dict(),
            "flags": self.flags,
            "informational": self.informational,
            "classification": self.classification,
            "tolerance": self.tolerance,
            "strict_hym_nabla": self.strict_hym_nabla,
            "passed": self.passed,
            **self.extra,
        }


def check_system(m: StromingerModel, tol: float = RESIDUAL_TOL) -> SystemReport:
    h, alg = m.h, m.h.alg
    hym_a = hym_residual(h, curvature(alg, m.A), 0.0)
    hym_n = hym_residual(h, curvature(alg, m.nablaT), 0.0)
    conf = dilatino_residual(h)[1]
    d_omega_hol = h.holomorphic_volume_residual()

    outcome = None
    if m.alpha == SOLVE:
        outcome = solve_alpha(m, tol)
        alpha = outcome.alpha
    else:
        alpha = float(m.alpha)
    bianchi = bianchi_residual(m, alpha).norm() if alpha is not None else m.ddc_omega().norm()

    flags = {
        "hym_A": max(hym_a) < tol,
        "conformally_balanced": conf < tol,
        "bianchi": bianchi < tol,
        "holomorphic_volume": d_omega_hol < tol,
    }
    informational = {
        "unitarity_nabla": m.nablaT.with_fiber_metric(h.g.matrix).unitarity_residual(),
        "unitarity_A": m.A.unitarity_residual(),
    }
    hym_nabla_ok = max(hym_n) < tol
    if m.strict_hym_nabla:
        flags["hym_nabla"] = hym_nabla_ok
    else:
        informational["hym_nabla_passes"] = hym_nabla_ok
    residuals = {
        "hym_A": list(hym_a),
        "hym_nabla": list(hym_n),
        "conformally_balanced": conf,
        "bianchi": bianchi,
        "holomorphic_volume": d_omega_hol,
    }
    return SystemReport(residuals, alpha, outcome, flags, informational,
                        classify(h, tol).as_dict(), tol, m.strict_hym_nabla, m.name)


def lambda_value(deg: float, r: int, vol: float, n: int) -> float:
    """lambda = 2 pi deg / ((n-1)! r vol)."""
    if r <= 0 or vol <= 0 or n <= 0:
        raise ValueError("r, vol and n must be positive")
    return 2 * math.pi * deg / (math.factorial(n - 1) * r * vol)
