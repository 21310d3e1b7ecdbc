"""Invariant connections, curvature, Hermite-Yang-Mills residuals and Chern-Simons forms.

A connection on a trivial rank-r bundle over the Lie algebra is stored by its
values on the basis, ``coeffs[i] = A(e_i)``. For tangent connections
(r = 2n) this is nabla_{e_i} e_j = sum_k coeffs[i, k, j] e_k. Curvature is

    R(X, Y) = [A(X), A(Y)] - A([X, Y]),

the invariant form of R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y].

Pairings are weighted traces over diagonal blocks. The sign of the
Chern-Simons transgression here is dCS = +c(F ^ F); a pairing with the
opposite overall sign reproduces the dCS = -tr F ^ F convention used in
some physics references, so that choice lives entirely in the weights.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .cxstruct import AlmostComplexStructure, IntegrabilityError, dc, nijenhuis, INTEGRABILITY_TOL
from .exterior import Form, basis, wedge_table
from .hermitian import HermitianData
from .liealg import LieAlgebraModel


class Connection:
    """Invariant connection 1-form A with ``coeffs[i] = A(e_i)`` (r x r each)."""

    def __init__(self, coeffs, tangent: bool = False, fiber_metric=None, name: str = ""):
        arr = np.array(coeffs)
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise ValueError("connection coefficients must have shape (m, r, r)")
        if not np.iscomplexobj(arr):
            arr = arr.astype(float)
        arr.setflags(write=False)
        self.coeffs = arr
        self.dim = arr.shape[0]
        self.rank = arr.shape[1]
        self.tangent = bool(tangent)
        if tangent and self.rank != self.dim:
            raise ValueError("a tangent connection must have rank equal to the algebra dimension")
        h = np.eye(self.rank) if fiber_metric is None else np.array(fiber_metric)
        self.fiber_metric = h
        self.name = name

    @classmethod
    def flat(cls, dim: int, rank: int, name: str = "flat") -> "Connection":
        return cls(np.zeros((dim, rank, rank)), tangent=False, name=name)

    def __call__(self, x) -> np.ndarray:
        return np.einsum("i,iab->ab", np.asarray(x), self.coeffs)

    def vector_form(self) -> np.ndarray:
        """Matrix-valued 1-form on the dense degree-1 basis, shape (m, r, r)."""
        return np.asarray(self.coeffs, dtype=complex)

    def unitarity_residual(self) -> float:
        """max_i |A_i^H h + h A_i| for the fiber metric h."""
        h = self.fiber_metric
        return float(max((np.abs(a.conj().T @ h + h @ a).max() for a in self.coeffs), default=0.0))

    def with_fiber_metric(self, h) -> "Connection":
        return Connection(self.coeffs, self.tangent, h, self.name)

    def __repr__(self) -> str:
        return f"Connection(dim={self.dim}, rank={self.rank}, tangent={self.tangent}, name={self.name!r})"


def direct_sum(*conns: Connection) -> Connection:
    """Block-diagonal connection on the direct sum of the bundles."""
    dim = conns[0].dim
    r = sum(c.rank for c in conns)
    dtype = complex if any(np.iscomplexobj(c.coeffs) for c in conns) else float
    out = np.zeros((dim, r, r), dtype=dtype)
    h = np.zeros((r, r), dtype=complex)
    pos = 0
    for c in conns:
        out[:, pos:pos + c.rank, pos:pos + c.rank] = c.coeffs
        h[pos:pos + c.rank, pos:pos + c.rank] = c.fiber_metric
        pos += c.rank
    return Connection(out, tangent=False, fiber_metric=h, name="+".join(c.name for c in conns))


class CurvatureForm:
    """Matrix-valued invariant 2-form, stored as values[i, j] = F(e_i, e_j)."""

    def __init__(self, values):
        vals = np.array(values)
        vals.setflags(write=False)
        self.values = vals
        self.dim = vals.shape[0]
        self.rank = vals.shape[2]

    def __call__(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijab->ab", np.asarray(x), np.asarray(y), self.values)

    def vector_form(self) -> np.ndarray:
        """Dense matrix-valued 2-form, shape (C(m,2), r, r)."""
        idx = basis(self.dim, 2)
        return np.array([self.values[i - 1, j - 1] for i, j in idx], dtype=complex).reshape(
            len(idx), self.rank, self.rank)

    def component(self, a: int, b: int) -> Form:
        """The scalar 2-form F^a_b (0-based matrix position)."""
        return Form.from_tensor(self.values[:, :, a, b])

    def norm(self) -> float:
        return float(np.abs(self.values).max(initial=0.0))

    def skew_residual(self, g) -> float:
        """max |F^T g + g F| over basis pairs (metric connections give 0)."""
        g = np.asarray(g)
        return float(np.abs(np.einsum("ijba,bc->ijac", self.values, g)
                            + np.einsum("ab,ijbc->ijac", g, self.values)).max(initial=0.0))


@dataclass(frozen=True)
class Pairing:
    """Symmetric bilinear form c(a, b) = sum_blocks weight * tr(a_block b_block).

    ``blocks`` lists ``(size, weight)`` along the diagonal. For a real tangent
    connection the complex trace on (TM, J) of a J-linear endomorphism is half
    its real trace; :meth:`tangent` encodes that.
    """

    blocks: tuple[tuple[int, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple((int(s), float(w)) for s, w in self.blocks))
        if any(s <= 0 for s, _ in self.blocks):
            raise ValueError("block sizes must be positive")

    @classmethod
    def trace(cls, rank: int, weight: float = 1.0) -> "Pairing":
        return cls(((rank, weight),))

    @classmethod
    def tangent(cls, dim: int, weight: float = 1.0) -> "Pairing":
        """weight * (complex trace on (TM, J)) realised as weight/2 * real trace."""
        return cls(((dim, 0.5 * weight),))

    @property
    def rank(self) -> int:
        return sum(s for s, _ in self.blocks)

    def scaled(self, factor: float) -> "Pairing":
        return Pairing(tuple((s, factor * w) for s, w in self.blocks))

    def __add__(self, other: "Pairing") -> "Pairing":
        """Pairing on the direct sum (block concatenation)."""
        return Pairing(self.blocks + other.blocks)

    def weight_vector(self) -> np.ndarray:
        return np.concatenate([np.full(s, w) for s, w in self.blocks])

    def __call__(self, a, b) -> complex:
        a = np.asarray(a)
        b = np.asarray(b)
        if a.shape[-1] != self.rank:
            raise ValueError(f"pairing of rank {self.rank} applied to {a.shape[-1]}x{a.shape[-1]} matrices")
        out = 0j
        pos = 0
        for s, w in self.blocks:
            sl = slice(pos, pos + s)
            out += w * np.trace(a[sl, sl] @ b[sl, sl])
            pos += s
        return out

    def is_nondegenerate(self) -> bool:
        return all(w != 0 for _, w in self.blocks)


def _block_mask(c: Pairing) -> np.ndarray:
    r = c.rank
    mask = np.zeros((r, r))
    pos = 0
    for s, w in c.blocks:
        mask[pos:pos + s, pos:pos + s] = w
        pos += s
    return mask


def pair_forms(c: Pairing, a: np.ndarray, p: int, b: np.ndarray, q: int, dim: int) -> Form:
    """c(a ^ b) for dense matrix-valued forms of degrees p and q."""
    # block trace of x y = sum_{a,b} x[a,b] y[b,a] weighted when a, b share a block
    mask = _block_mask(c)
    s = wedge_table(dim, p, q)
    vals = np.einsum("IJK,Iab,Jba,ab->K", s, a, b, mask)
    return Form.from_vector(dim, p + q, vals)


def matrix_wedge(a: np.ndarray, p: int, b: np.ndarray, q: int, dim: int) -> np.ndarray:
    """Matrix product combined with the wedge product of dense matrix-valued forms."""
    s = wedge_table(dim, p, q)
    return np.einsum("IJK,Iab,Jbc->Kac", s, a, b)


# ---------------------------------------------------------------------------
# constructors


def levi_civita(h: HermitianData) -> Connection:
    """Koszul formula for invariant fields.

    2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y).
    """
    c = h.alg.structure
    g = h.g.matrix
    gc = np.einsum("lk,kij->lij", g, c)  # gc[l, i, j] = g([e_i, e_j], e_l)
    # low[i, j, l] = g(nabla_{e_i} e_j, e_l)
    low = 0.5 * (np.einsum("lij->ijl", gc) - np.einsum("ijl->ijl", gc) + np.einsum("jli->ijl", gc))
    coeffs = np.einsum("kl,ijl->ikj", h.g.inverse, low)
    return Connection(coeffs, tangent=True, fiber_metric=g, name="levi_civita")


def _require_integrable(h: HermitianData) -> None:
    res = nijenhuis(h.alg, h.J)
    if res >= INTEGRABILITY_TOL:
        raise IntegrabilityError(f"J is not integrable (Nijenhuis residual {res:.3g})")


def bismut(h: HermitianData) -> Connection:
    """nabla^B = nabla^g - 1/2 g^{-1} d^c omega, i.e.

    g(nabla^B_X Y, Z) = g(nabla^g_X Y, Z) - 1/2 d^c omega(X, Y, Z).
    """
    _require_integrable(h)
    t = dc(h.alg, h.J, h.omega).tensor(3)
    if np.abs(t.imag).max(initial=0.0) > 1e-10:
        raise RuntimeError("d^c omega is not real")
    lc = levi_civita(h).coeffs
    coeffs = lc - 0.5 * np.einsum("kl,ijl->ikj", h.g.inverse, t.real)
    return Connection(coeffs, tangent=True, fiber_metric=h.g.matrix, name="bismut")


def chern(h: HermitianData) -> Connection:
    """Hermitian connection whose torsion has no (1,1) part.

    For integrable J this is the connection whose (0,1) part on the invariant
    (1,0) frame is delbar. Solved as a linear system for the coefficients.
    """
    _require_integrable(h)
    m = h.alg.dim
    g, j, c = h.g.matrix, h.J.matrix, h.alg.structure
    nvar = m ** 3  # x[i, k, l] = coeffs[i][k, l]
    rows, rhs = [], []

    basis_vars = np.eye(nvar).reshape(m, m, m, nvar)  # basis_vars[i, k, l] selects coeffs[i][k, l]
    # metric: A_i^T g + g A_i = 0
    for i in range(m):
        a = basis_vars[i]
        # (A^T g)[a, b] = sum_k A[k, a] g[k, b]
        at_g = np.einsum("kav,kb->abv", a, g)
        g_a = np.einsum("ak,kbv->abv", g, a)
        for row in (at_g + g_a).reshape(m * m, nvar):
            rows.append(row)
            rhs.append(0.0)
    # complex linear: [A_i, J] = 0
    for i in range(m):
        a = basis_vars[i]
        comm = np.einsum("akv,kb->abv", a, j) - np.einsum("ak,kbv->abv", j, a)
        for row in comm.reshape(m * m, nvar):
            rows.append(row)
            rhs.append(0.0)
    # torsion T(X,Y) = A(X)Y - A(Y)X - [X,Y]; require T(JX,JY) + T(X,Y) = 0
    # T(e_p, e_q)^k = coeffs[p][k, q] - coeffs[q][k, p] - c[k, p, q]
    tor = basis_vars.transpose(1, 0, 2, 3) - basis_vars.transpose(1, 2, 0, 3)  # [k, p, q, v]
    tor_j = np.einsum("kabv,ap,bq->kpqv", tor, j, j)
    const = -c - np.einsum("kab,ap,bq->kpq", c, j, j)
    lhs = (tor + tor_j).reshape(m ** 3, nvar)
    rows.extend(lhs)
    rhs.extend((-const).reshape(m ** 3))
    mat = np.array(rows)
    sol, *_ = np.linalg.lstsq(mat, np.array(rhs), rcond=None)
    resid = np.abs(mat @ sol - np.array(rhs)).max()
    if resid > 1e-9:
        raise RuntimeError(f"Chern connection system inconsistent (residual {resid:.3g})")
    coeffs = sol.reshape(m, m, m)
    coeffs[np.abs(coeffs) < 1e-14] = 0.0
    return Connection(coeffs, tangent=True, fiber_metric=g, name="chern")


# ---------------------------------------------------------------------------
# curvature and residuals


def curvature(alg: LieAlgebraModel, C: Connection) -> CurvatureForm:
    a = C.coeffs
    if a.shape[0] != alg.dim:
        raise ValueError(f"connection over {a.shape[0]} directions on a {alg.dim}-dimensional algebra")
    vals = (np.einsum("iab,jbc->ijac", a, a) - np.einsum("jab,ibc->ijac", a, a)
            - np.einsum("kij,kab->ijab", alg.structure, a))
    return CurvatureForm(vals)


def torsion(alg: LieAlgebraModel, C: Connection) -> np.ndarray:
    """T[k, i, j] = (nabla_{e_i} e_j - nabla_{e_j} e_i - [e_i, e_j])^k for tangent connections."""
    a = C.coeffs
    return np.einsum("ikj->kij", a) - np.einsum("jki->kij", a) - alg.structure


def metric_residual(C: Connection, g) -> float:
    g = np.asarray(g)
    return float(max(np.abs(a.T @ g + g @ a).max() for a in C.coeffs))


def j_residual(C: Connection, J: AlmostComplexStructure) -> float:
    return float(max(np.abs(a @ J.matrix - J.matrix @ a).max() for a in C.coeffs))


def lambda_curvature(h: HermitianData, F: CurvatureForm) -> np.ndarray:
    """Lambda_omega F as an r x r matrix."""
    w = -np.linalg.inv(h.omega.tensor(2).real)
    return 0.5 * np.einsum("ij,ijab->ab", w, F.values)


def f02_part(h: HermitianData, F: CurvatureForm) -> np.ndarray:
    """(0,2) components of every matrix entry, shape (C(m,2), r, r)."""
    proj = h.J.projector(2, 0)
    return np.einsum("KI,Iab->Kab", proj, F.vector_form())


def hym_residual(h: HermitianData, F: CurvatureForm, lam: float = 0.0) -> tuple[float, float]:
    """(|i Lambda_omega F - lambda Id|, |F^{0,2}|) as sup-norms."""
    lf = lambda_curvature(h, F)
    first = np.abs(1j * lf - lam * np.eye(F.rank)).max()
    second = np.abs(f02_part(h, F)).max(initial=0.0)
    return float(first), float(second)


def c_square(c: Pairing, F: CurvatureForm) -> Form:
    """c(F ^ F)."""
    fv = F.vector_form()
    return pair_forms(c, fv, 2, fv, 2, F.dim)


def chern_simons(alg: LieAlgebraModel, c: Pairing, C: Connection) -> Form:
    """CS(theta) = -1/6 c(theta ^ [theta, theta]) + c(F_theta ^ theta)."""
    m = alg.dim
    th = C.vector_form()
    tt = matrix_wedge(th, 1, th, 1, m)
    bracket = tt + tt  # [theta, theta] = theta^theta - (-1) theta^theta
    fv = curvature(alg, C).vector_form()
    return -pair_forms(c, th, 1, bracket, 2, m) / 6.0 + pair_forms(c, fv, 2, th, 1, m)


def moment_pairing(h: HermitianData, F: CurvatureForm, zeta, lam: float = 0.0,
                   volume: float = 1.0, fiber_metric=None) -> float:
    """<mu, zeta> = -tr(zeta (Lambda_omega F + i lambda Id)) * volume.

    ``zeta`` must be skew-hermitian for the fiber metric.
    """
    zeta = np.asarray(zeta)
    hmat = np.eye(F.rank) if fiber_metric is None else np.asarray(fiber_metric)
    if np.abs(zeta.conj().T @ hmat + hmat @ zeta).max() > 1e-10:
        raise ValueError("zeta is not skew-hermitian")
    val = -np.trace(zeta @ (lambda_curvature(h, F) + 1j * lam * np.eye(F.rank))) * volume
    return float(val.real)


def covariant_exterior(alg: LieAlgebraModel, C: Connection, F: CurvatureForm) -> np.ndarray:
    """d_A F = dF + [A ^ F] as a dense matrix-valued 3-form (Bianchi: zero)."""
    m = alg.dim
    fv = F.vector_form()
    d2 = alg.d_matrix(2)
    df = np.einsum("KI,Iab->Kab", d2, fv)
    th = C.vector_form()
    return df + matrix_wedge(th, 1, fv, 2, m) - matrix_wedge(fv, 2, th, 1, m)


def trace_form(c: Pairing, a: np.ndarray, k: int, dim: int) -> Form:
    """Apply the block trace of ``c`` entrywise to a dense matrix-valued k-form."""
    mask = _block_mask(c)
    diag = np.einsum("Kaa,aa->K", a, mask)
    return Form.from_vector(dim, k, diag)


def random_skew_hermitian(rng: np.random.Generator, r: int) -> np.ndarray:
    x = rng.normal(size=(r, r)) + 1j * rng.normal(size=(r, r))
    return x - x.conj().T
