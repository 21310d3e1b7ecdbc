"""Almost complex structures, bidegree splitting and the operators del, delbar, d^c."""

from __future__ import annotations

import numpy as np
from scipy.linalg import null_space

from .exterior import Form, basis, exterior_power, substitute
from .liealg import JACOBI_TOL, LieAlgebraModel, ce_differential

INTEGRABILITY_TOL = JACOBI_TOL


class IntegrabilityError(ValueError):
    """Raised when an operation needs d = del + delbar but J is not integrable."""


class AlmostComplexStructure:
    """Endomorphism J of the real basis with J^2 = -1.

    ``matrix[:, j]`` holds the coefficients of J e_j. A complex 1-form is of
    type (1,0) when alpha(J v) = i alpha(v).
    """

    def __init__(self, matrix):
        mat = np.array(matrix, dtype=float)
        m = mat.shape[0]
        if mat.shape != (m, m) or m % 2:
            raise ValueError("J must be a square matrix of even size")
        sq = np.abs(mat @ mat + np.eye(m)).max()
        if sq > 1e-12 * max(1.0, np.abs(mat).max() ** 2):
            raise ValueError(f"J^2 + Id has max entry {sq:.3g}")
        mat.setflags(write=False)
        self.matrix = mat
        self.dim = m
        self.n = m // 2
        self._frame = None
        self._proj: dict[tuple[int, int], np.ndarray] = {}
        self._ops: dict = {}

    @classmethod
    def standard(cls, dim: int) -> "AlmostComplexStructure":
        """J e_{2j-1} = e_{2j}, so theta_j = e^{2j-1} + i e^{2j} is of type (1,0)."""
        mat = np.zeros((dim, dim))
        for j in range(0, dim, 2):
            mat[j + 1, j] = 1.0
            mat[j, j + 1] = -1.0
        return cls(mat)

    def conjugated(self, p) -> "AlmostComplexStructure":
        """Transport by the basis change P: J' = P J P^{-1}."""
        p = np.asarray(p, dtype=float)
        return AlmostComplexStructure(p @ self.matrix @ np.linalg.inv(p))

    def frame(self) -> tuple[np.ndarray, np.ndarray]:
        """Rows of ``theta`` are a (1,0) coframe followed by its conjugate.

        Returns ``(theta, inverse)`` with e^i = sum_a inverse[i, a] phi^a.
        """
        if self._frame is None:
            ns = null_space(self.matrix.T - 1j * np.eye(self.dim))
            if ns.shape[1] != self.n:
                raise ValueError("could not split the complexified coframe")
            hol = ns.T
            theta = np.vstack([hol, hol.conj()])
            self._frame = (theta, np.linalg.inv(theta))
        return self._frame

    def projector(self, k: int, p: int) -> np.ndarray:
        """Dense projector onto type (p, k-p) inside degree-k forms."""
        key = (k, p)
        if key not in self._proj:
            theta, inv = self.frame()
            to_phi = exterior_power(inv, k).T
            to_e = exterior_power(theta, k).T
            keep = np.array([sum(1 for a in idx if a <= self.n) == p for idx in basis(self.dim, k)],
                            dtype=float)
            mat = to_e @ (keep[:, None] * to_phi)
            mat.setflags(write=False)
            self._proj[key] = mat
        return self._proj[key]

    def __repr__(self) -> str:
        return f"AlmostComplexStructure(dim={self.dim})"


def pq_project(J: AlmostComplexStructure, a: Form, p: int, q: int) -> Form:
    """Component of type (p, q) of the degree-(p+q) form ``a``."""
    k = p + q
    if a.degrees - {k}:
        raise ValueError(f"p + q = {k} does not match the degree(s) {sorted(a.degrees)} of the form")
    if p < 0 or q < 0 or p > J.n or q > J.n:
        return Form.zero(a.dim)
    return Form.from_vector(a.dim, k, J.projector(k, p) @ a.vector(k))


def bidegree_parts(J: AlmostComplexStructure, a: Form) -> dict[tuple[int, int], Form]:
    out = {}
    for k in sorted(a.degrees):
        part = a.part(k)
        for p in range(k + 1):
            piece = pq_project(J, part, p, k - p)
            if piece.norm() > 0:
                out[(p, k - p)] = out.get((p, k - p), Form.zero(a.dim)) + piece
    return out


def j_action(J: AlmostComplexStructure, a: Form) -> Form:
    """Endomorphism alpha -> (-1)^k alpha(J., ..., J.); acts as i^{q-p} on type (p, q)."""
    # alpha(J., ...) substitutes e^i -> e^i o J = sum_j J[i, j] e^j
    out = Form.zero(a.dim)
    for k in sorted(a.degrees):
        out = out + (-1) ** k * substitute(J.matrix, a.part(k))
    return out


def j_inverse_action(J: AlmostComplexStructure, a: Form) -> Form:
    out = Form.zero(a.dim)
    for k in sorted(a.degrees):
        out = out + (-1) ** k * substitute(-J.matrix, a.part(k))
    return out


def nijenhuis_tensor(alg: LieAlgebraModel, J: AlmostComplexStructure) -> np.ndarray:
    """N[:, i, j] = N(e_i, e_j) = [Je_i, Je_j] - [e_i, e_j] - J[Je_i, e_j] - J[e_i, Je_j]."""
    c = alg.structure
    j = J.matrix
    br = c  # br[:, i, j] = [e_i, e_j]
    jj = np.einsum("kab,ai,bj->kij", c, j, j)
    j1 = np.einsum("kab,ai->kib", c, j)
    j2 = np.einsum("kab,bj->kaj", c, j)
    return jj - br - np.einsum("lk,kij->lij", j, j1 + j2)


def nijenhuis(alg: LieAlgebraModel, J: AlmostComplexStructure) -> float:
    """Max-norm of the Nijenhuis tensor over basis pairs."""
    return float(np.abs(nijenhuis_tensor(alg, J)).max(initial=0.0))


def d_leakage(alg: LieAlgebraModel, J: AlmostComplexStructure) -> float:
    """Max-norm of the (0,2) part of d on (1,0)-forms.

    Vanishes exactly when d maps Omega^{p,q} into Omega^{p+1,q} + Omega^{p,q+1}.
    """
    leak = J.projector(2, 0) @ alg.d_matrix(1) @ J.projector(1, 1)
    return float(np.abs(leak).max(initial=0.0))


def is_integrable(alg: LieAlgebraModel, J: AlmostComplexStructure, tol: float = INTEGRABILITY_TOL) -> bool:
    return nijenhuis(alg, J) < tol


class _Operators:
    """Cached dense del / delbar matrices for one (algebra, J) pair."""

    def __init__(self, alg: LieAlgebraModel, J: AlmostComplexStructure):
        self.alg = alg
        self.J = J
        self._del: dict[int, np.ndarray] = {}
        self._delbar: dict[int, np.ndarray] = {}

    @classmethod
    def get(cls, alg, J) -> "_Operators":
        # cached on J; the stored reference to alg keeps id(alg) from being reused
        ops = J._ops.get(id(alg))
        if ops is None:
            res = nijenhuis(alg, J)
            if res >= INTEGRABILITY_TOL:
                raise IntegrabilityError(
                    f"J is not integrable (Nijenhuis residual {res:.3g}); "
                    "the splitting d = del + delbar is not available")
            ops = cls(alg, J)
            J._ops[id(alg)] = ops
        return ops

    def _build(self, k: int) -> None:
        J, d = self.J, self.alg.d_matrix(k)
        dl = np.zeros((d.shape[0], d.shape[1]), dtype=complex)
        dbl = np.zeros_like(dl)
        for p in range(k + 1):
            src = J.projector(k, p)
            dl += J.projector(k + 1, p + 1) @ d @ src
            dbl += J.projector(k + 1, p) @ d @ src
        self._del[k] = dl
        self._delbar[k] = dbl

    def matrices(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        if k not in self._del:
            self._build(k)
        return self._del[k], self._delbar[k]


def _apply(alg, J, a: Form, which: str) -> Form:
    ops = _Operators.get(alg, J)
    out = Form.zero(a.dim)
    for k in sorted(a.degrees):
        if k >= a.dim:
            continue
        dl, dbl = ops.matrices(k)
        vec = a.vector(k)
        if which == "del":
            res = dl @ vec
        elif which == "delbar":
            res = dbl @ vec
        else:
            res = 1j * (dbl - dl) @ vec
        out = out + Form.from_vector(a.dim, k + 1, res)
    return out


def del_(alg: LieAlgebraModel, J: AlmostComplexStructure, a: Form) -> Form:
    """The (1,0) part of d (requires integrable J)."""
    return _apply(alg, J, a, "del")


def delbar(alg: LieAlgebraModel, J: AlmostComplexStructure, a: Form) -> Form:
    """The (0,1) part of d (requires integrable J)."""
    return _apply(alg, J, a, "delbar")


def dc(alg: LieAlgebraModel, J: AlmostComplexStructure, a: Form) -> Form:
    """d^c = i(delbar - del), applied uniformly in every degree."""
    return _apply(alg, J, a, "dc")


def dc_conjugation(alg: LieAlgebraModel, J: AlmostComplexStructure, a: Form) -> Form:
    """J d J^{-1} with J acting on forms as in :func:`j_action`; equals d^c."""
    return j_action(J, ce_differential(alg, j_inverse_action(J, a)))
