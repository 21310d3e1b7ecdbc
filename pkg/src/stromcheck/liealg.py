"""Real Lie algebras given by structure constants and their Chevalley-Eilenberg complex.

Basis conventions: [e_i, e_j] = sum_k c^k_{ij} e_k and, for invariant 1-forms,
d alpha(X, Y) = -alpha([X, Y]). Hence de^k = -sum_{i<j} c^k_{ij} e^i ^ e^j,
which lets coframe relations be written exactly as they appear in the
literature (for instance d theta_2 = theta_1 ^ theta_3).

Invariance is taken with respect to left translations; on the level of the
Lie algebra the choice of side only relabels the structure constants, so
right-invariant coframes are entered the same way.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .exterior import Form, basis, basis_index, wedge

JACOBI_TOL = 1e-10


class JacobiError(ValueError):
    """Structure constants fail the Jacobi identity."""


class LieAlgebraModel:
    """Finite-dimensional real Lie algebra.

    Parameters
    ----------
    structure : array_like, shape (m, m, m)
        ``structure[k, i, j]`` is c^k_{ij} (0-based array positions).
    check : bool
        Raise :class:`JacobiError` when the Jacobi residual exceeds
        :data:`JACOBI_TOL`.
    """

    def __init__(self, structure, name: str = "", check: bool = True):
        c = np.array(structure, dtype=float)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise ValueError("structure constants must have shape (m, m, m)")
        if np.abs(c + c.transpose(0, 2, 1)).max(initial=0.0) > 1e-14:
            raise ValueError("structure constants are not antisymmetric in the lower indices")
        c.setflags(write=False)
        self.structure = c
        self.dim = c.shape[0]
        self.name = name
        self._dmats: dict[int, np.ndarray] = {}
        if check:
            res = check_jacobi(self)
            if res > JACOBI_TOL:
                raise JacobiError(f"check_jacobi residual {res:.3g} exceeds {JACOBI_TOL:g}")

    # constructors -----------------------------------------------------------

    @classmethod
    def abelian(cls, dim: int, name: str = "abelian") -> "LieAlgebraModel":
        return cls(np.zeros((dim, dim, dim)), name=name)

    @classmethod
    def from_brackets(cls, dim: int, brackets: Iterable[Sequence], name: str = "",
                      check: bool = True) -> "LieAlgebraModel":
        """Build from ``(i, j, k, value)`` meaning [e_i, e_j] += value e_k, 1-based."""
        c = np.zeros((dim, dim, dim))
        for i, j, k, value in brackets:
            c[k - 1, i - 1, j - 1] += value
            c[k - 1, j - 1, i - 1] -= value
        return cls(c, name=name, check=check)

    @classmethod
    def from_differentials(cls, diffs: Sequence[Form], name: str = "",
                           check: bool = True) -> "LieAlgebraModel":
        """Build from real 2-forms ``diffs[k] = d e^{k+1}``."""
        dim = len(diffs)
        c = np.zeros((dim, dim, dim))
        for k, form in enumerate(diffs):
            if form.dim != dim or (form.degrees and form.degrees != {2}):
                raise ValueError(f"d e^{k + 1} must be a 2-form over {dim} generators")
            if np.abs(form.imag.vector(2)).max(initial=0.0) > 1e-12:
                raise ValueError(f"d e^{k + 1} has an imaginary part")
            t = form.tensor(2).real
            c[k] = -t
        return cls(c, name=name, check=check)

    @classmethod
    def from_complex_coframe(cls, diffs: Sequence[Form], name: str = "",
                             check: bool = True) -> "LieAlgebraModel":
        """Build from complex relations ``diffs[j] = d theta_{j+1}``.

        theta_j = e^{2j-1} + i e^{2j}; the real and imaginary parts of each
        relation become de^{2j-1} and de^{2j}.
        """
        real = []
        for form in diffs:
            real.append(form.real)
            real.append(form.imag)
        return cls.from_differentials(real, name=name, check=check)

    # algebra ----------------------------------------------------------------

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("kij,i,j->k", self.structure, x, y)

    def ad(self, x) -> np.ndarray:
        """Matrix of ad_x acting on coefficient column vectors."""
        return np.einsum("kij,i->kj", self.structure, x)

    def d_matrix(self, k: int) -> np.ndarray:
        """Matrix of the Chevalley-Eilenberg differential from degree k to k+1."""
        if k not in self._dmats:
            m = self.dim
            out = np.zeros((len(basis(m, k + 1)), len(basis(m, k))))
            if 0 < k < m:
                ones = [_d_generator(self, i) for i in range(1, m + 1)]
                target = basis_index(m, k + 1)
                for col, idx in enumerate(basis(m, k)):
                    acc = Form.zero(m)
                    for r, i in enumerate(idx):
                        left = Form.e(m, *idx[:r])
                        right = Form.e(m, *idx[r + 1:])
                        acc = acc + (-1) ** r * wedge(wedge(left, ones[i - 1]), right)
                    for key, val in acc.items():
                        out[target[key], col] = val.real
            out.setflags(write=False)
            self._dmats[k] = out
        return self._dmats[k]

    def __repr__(self) -> str:
        return f"LieAlgebraModel(dim={self.dim}, name={self.name!r})"


def _d_generator(alg: LieAlgebraModel, k: int) -> Form:
    c = alg.structure[k - 1]
    return Form(alg.dim, {(i, j): -c[i - 1, j - 1] for i, j in basis(alg.dim, 2)})


def ce_differential(alg: LieAlgebraModel, a: Form) -> Form:
    """Chevalley-Eilenberg differential of an invariant form."""
    if a.dim != alg.dim:
        raise ValueError(f"form dim {a.dim} vs algebra dim {alg.dim}")
    out = Form.zero(a.dim)
    for k in sorted(a.degrees):
        if k == 0 or k == a.dim:
            continue
        out = out + Form.from_vector(a.dim, k + 1, alg.d_matrix(k) @ a.vector(k))
    return out


def check_jacobi(alg: LieAlgebraModel) -> float:
    """Max-norm of the cyclic sums [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]."""
    c = alg.structure
    # [[e_i, e_j], e_k]^l = c^a_{ij} c^l_{ak}
    t = np.einsum("aij,lak->ijkl", c, c)
    cyc = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
    return float(np.abs(cyc).max(initial=0.0))


def d_squared_residual(alg: LieAlgebraModel) -> float:
    """Max-norm of d(d e^k) over the basis 1-forms."""
    m = alg.dim
    if m < 3:
        return 0.0
    return float(np.abs(alg.d_matrix(2) @ alg.d_matrix(1)).max(initial=0.0))


def is_unimodular(alg: LieAlgebraModel, tol: float = JACOBI_TOL) -> tuple[bool, np.ndarray]:
    """Return whether every ad_{e_i} is traceless, with the trace vector."""
    traces = np.einsum("kik->i", alg.structure)
    return bool(np.abs(traces).max(initial=0.0) < tol), traces

