"""Reduced heterotic Courant algebroid on invariant sections.

Sections are triples (X, s, xi) in g + k + g*, where s is the vertical part
theta(X^) with values in r x r matrices. With the connection A fixed, the
Dorfman bracket used here is

    [e1, e2] = ( [X1, X2],
                 -[s1, s2] + [A(X1), s2] - [A(X2), s1] - F_A(X1, X2),
                 i_{X1} d xi2 - i_{X2} d xi1 + i_{X2} i_{X1} H
                 + 2 c(d_A s1, s2) + 2 c(i_{X1} F_A, s2) - 2 c(i_{X2} F_A, s1) )

with d_A s = [A(.), s]. Vertical parts live in the block-diagonal algebra
k = gl(s_1) + ... + gl(s_b) fixed by the pairing blocks, on which the
pairing is ad-invariant; A must take values there too. The sign in front
of F_A(X1, X2) is the one that makes the pairing ad-invariant (see
:func:`invariance_residual`); with it the Leibniz identity holds for all
invariant triples exactly when dH = c(F_A ^ F_A).

Everything is bilinear, so the bracket is tabulated once as a structure
tensor over a basis of sections and the triple sweep is a pair of einsums.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exterior import Form
from .gauge import Connection, Pairing, _block_mask, c_square, curvature
from .liealg import LieAlgebraModel, ce_differential


@dataclass(frozen=True)
class CourantSection:
    """Invariant section X + s + xi."""

    X: np.ndarray
    s: np.ndarray
    xi: np.ndarray

    @classmethod
    def make(cls, X=None, s=None, xi=None, dim: int | None = None, rank: int | None = None) -> "CourantSection":
        if dim is None:
            dim = len(X) if X is not None else len(xi)
        if rank is None:
            rank = np.asarray(s).shape[0]
        X = np.zeros(dim) if X is None else np.asarray(X)
        s = np.zeros((rank, rank)) if s is None else np.asarray(s)
        if isinstance(xi, Form):
            xi = xi.vector(1)
        xi = np.zeros(dim) if xi is None else np.asarray(xi)
        return cls(X, s, xi)

    @classmethod
    def zero(cls, dim: int, rank: int) -> "CourantSection":
        return cls.make(dim=dim, rank=rank)

    @property
    def dim(self) -> int:
        return len(self.X)

    @property
    def rank(self) -> int:
        return self.s.shape[0]

    def flat(self) -> np.ndarray:
        return np.concatenate([self.X, self.s.ravel(), self.xi]).astype(complex)

    @classmethod
    def from_flat(cls, v, dim: int, rank: int) -> "CourantSection":
        v = np.asarray(v)
        return cls(v[:dim], v[dim:dim + rank * rank].reshape(rank, rank), v[dim + rank * rank:])

    def norm(self) -> float:
        return float(np.abs(self.flat()).max(initial=0.0))


@dataclass
class CourantData:
    """Bracket data (alg, H, A, c) for the reduced algebroid."""

    alg: LieAlgebraModel
    H: Form
    A: Connection
    pairingc: Pairing
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        m = self.alg.dim
        if self.H.dim != m or (self.H.degrees and self.H.degrees != {3}):
            raise ValueError(f"H must be a 3-form over {m} generators")
        if np.abs(self.H.imag.vector(3)).max(initial=0.0) > 1e-12:
            raise ValueError("H must be real")
        if self.A.dim != m:
            raise ValueError("connection and algebra dimensions differ")
        if self.pairingc.rank != self.A.rank:
            raise ValueError(f"pairing of rank {self.pairingc.rank} for a rank-{self.A.rank} connection")
        if np.abs(np.asarray(self.A.coeffs)[:, ~self.fiber_pattern]).max(initial=0.0) > 0:
            raise ValueError("A has entries outside the diagonal blocks of the pairing")

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def rank(self) -> int:
        return self.A.rank

    @property
    def size(self) -> int:
        return 2 * self.dim + self.rank ** 2

    @property
    def fiber_pattern(self) -> np.ndarray:
        """Boolean r x r mask of the block-diagonal fiber algebra k."""
        return block_pattern(self.pairingc)

    def admissible(self) -> np.ndarray:
        """Flat indices of the basis sections whose vertical part lies in k."""
        m, r = self.dim, self.rank
        fiber = m + np.flatnonzero(self.fiber_pattern.ravel())
        return np.concatenate([np.arange(m), fiber, np.arange(m + r * r, self.size)])

    def curvature_values(self) -> np.ndarray:
        if "F" not in self._cache:
            self._cache["F"] = np.asarray(curvature(self.alg, self.A).values, dtype=complex)
        return self._cache["F"]

    def bianchi_residual(self) -> float:
        """|dH - c(F_A ^ F_A)|."""
        return (ce_differential(self.alg, self.H) - c_square(self.pairingc, curvature(self.alg, self.A))).norm()

    def _check(self, e: CourantSection) -> None:
        if e.dim != self.dim or e.rank != self.rank or len(e.xi) != self.dim:
            raise ValueError(f"section shapes ({e.dim}, {e.rank}) do not match data ({self.dim}, {self.rank})")
        if np.abs(e.s[~self.fiber_pattern]).max(initial=0.0) > 0:
            raise ValueError("vertical part has entries outside the diagonal blocks of the pairing")


def block_pattern(c: Pairing) -> np.ndarray:
    r = c.rank
    out = np.zeros((r, r), dtype=bool)
    pos = 0
    for s, _ in c.blocks:
        out[pos:pos + s, pos:pos + s] = True
        pos += s
    return out


def _c(c: Pairing, a, b):
    """Block trace pairing broadcast over leading axes of ``a``."""
    out = 0
    pos = 0
    for s, w in c.blocks:
        sl = slice(pos, pos + s)
        out = out + w * np.einsum("...ab,...ba->...", a[..., sl, sl], b[..., sl, sl])
        pos += s
    return out


def pairing(d: CourantData, e1: CourantSection, e2: CourantSection) -> complex:
    """<e1, e2> = 1/2 (xi2(X1) + xi1(X2)) + c(s1, s2)."""
    d._check(e1)
    d._check(e2)
    val = 0.5 * (e2.xi @ e1.X + e1.xi @ e2.X) + d.pairingc(e1.s, e2.s)
    return complex(val) if np.iscomplexobj(val) else float(val)


def dorfman(d: CourantData, e1: CourantSection, e2: CourantSection) -> CourantSection:
    d._check(e1)
    d._check(e2)
    alg, c = d.alg, d.pairingc
    m = d.dim
    A = np.asarray(d.A.coeffs, dtype=complex)
    F = d.curvature_values()
    X1, X2 = np.asarray(e1.X, dtype=complex), np.asarray(e2.X, dtype=complex)
    s1, s2 = np.asarray(e1.s, dtype=complex), np.asarray(e2.s, dtype=complex)

    vec = np.einsum("kij,i,j->k", alg.structure, X1, X2)

    ax1 = np.einsum("i,iab->ab", X1, A)
    ax2 = np.einsum("i,iab->ab", X2, A)
    fx = np.einsum("i,j,ijab->ab", X1, X2, F)
    vert = -(s1 @ s2 - s2 @ s1) + (ax1 @ s2 - s2 @ ax1) - (ax2 @ s1 - s1 @ ax2) - fx

    # 1-form part as the vector of values on e_1..e_m
    dxi1 = _d1(alg, e1.xi)
    dxi2 = _d1(alg, e2.xi)
    h = d.H.tensor(3) if d.H.degrees else np.zeros((m, m, m))
    one = (np.einsum("i,ij->j", X1, dxi2) - np.einsum("i,ij->j", X2, dxi1)
           + np.einsum("i,j,ijk->k", X1, X2, h))
    das1 = np.einsum("yab,bc->yac", A, s1) - np.einsum("ab,ybc->yac", s1, A)  # (d_A s1)(e_y)
    one = one + 2 * _c(c, das1, np.broadcast_to(s2, das1.shape))
    f1 = np.einsum("i,iyab->yab", X1, F)
    f2 = np.einsum("i,iyab->yab", X2, F)
    one = one + 2 * _c(c, f1, np.broadcast_to(s2, f1.shape)) - 2 * _c(c, f2, np.broadcast_to(s1, f2.shape))
    return CourantSection(vec, vert, one)


def _d1(alg: LieAlgebraModel, xi) -> np.ndarray:
    """d xi as an antisymmetric matrix: d xi(e_i, e_j) = -xi([e_i, e_j])."""
    return -np.einsum("k,kij->ij", np.asarray(xi, dtype=complex), alg.structure)


def bracket_tensor(d: CourantData) -> np.ndarray:
    """B[a, b, :] = flat([f_a, f_b]) over the basis f of g + gl(r) + g*.

    Each block is the bilinear term of :func:`dorfman` written on basis
    elements (E_pq for the fiber); ``dorfman`` itself serves as the oracle.
    """
    if "B" not in d._cache:
        m, r, n = d.dim, d.rank, d.size
        c = d.alg.structure
        A = np.asarray(d.A.coeffs, dtype=complex)
        F = d.curvature_values()
        mask = _block_mask(d.pairingc)
        E = np.eye(r * r).reshape(r * r, r, r)
        xs, ss, fs = slice(0, m), slice(m, m + r * r), slice(m + r * r, n)
        B = np.zeros((n, n, n), dtype=complex)
        # vector part
        B[xs, xs, xs] = np.einsum("kij->ijk", c)
        # vertical part
        ee = np.einsum("pab,qbc->pqac", E, E)
        B[ss, ss, ss] = -(ee - ee.transpose(1, 0, 2, 3)).reshape(r * r, r * r, r * r)
        ae = np.einsum("iab,qbc->iqac", A, E) - np.einsum("qab,ibc->iqac", E, A)  # [A_i, E_q]
        B[xs, ss, ss] = ae.reshape(m, r * r, r * r)
        B[ss, xs, ss] = -ae.transpose(1, 0, 2, 3).reshape(r * r, m, r * r)
        B[xs, xs, ss] = -F.reshape(m, m, r * r)
        # 1-form part
        B[xs, fs, fs] = -np.einsum("kiy->iky", c)
        B[fs, xs, fs] = np.einsum("kjy->kjy", c)
        h = d.H.tensor(3) if d.H.degrees else np.zeros((m, m, m))
        B[xs, xs, fs] += h
        # c(M, E_uv) = mask[u, v] M[v, u]
        ape = np.einsum("yab,pbc->pyac", A, E) - np.einsum("pab,ybc->pyac", E, A)  # [A_y, E_p]
        B[ss, ss, fs] = 2 * np.einsum("pyvu,uv->puvy", ape, mask).reshape(r * r, r * r, m)
        fiy = 2 * np.einsum("iyvu,uv->iuvy", F, mask).reshape(m, r * r, m)
        B[xs, ss, fs] += fiy
        B[ss, xs, fs] -= fiy.transpose(1, 0, 2)
        d._cache["B"] = B
    return d._cache["B"]


def bracket_tensor_reference(d: CourantData) -> np.ndarray:
    """Slow tabulation by calling :func:`dorfman` on every admissible basis pair.

    Rows and columns outside :meth:`CourantData.admissible` are left at zero.
    """
    m, r, n = d.dim, d.rank, d.size
    eye = np.eye(n)
    B = np.zeros((n, n, n), dtype=complex)
    idx = d.admissible()
    for a in idx:
        ea = CourantSection.from_flat(eye[a], m, r)
        for b in idx:
            B[a, b] = dorfman(d, ea, CourantSection.from_flat(eye[b], m, r)).flat()
    return B


def pairing_matrix(d: CourantData) -> np.ndarray:
    m, r = d.dim, d.rank
    n = d.size
    G = np.zeros((n, n), dtype=complex)
    G[:m, m + r * r:] = 0.5 * np.eye(m)
    G[m + r * r:, :m] = 0.5 * np.eye(m)
    eye = np.eye(r * r).reshape(r * r, r, r)
    G[m:m + r * r, m:m + r * r] = _c(d.pairingc, eye[:, None], eye[None, :])
    return G


def leibniz_residual(d: CourantData, e1: CourantSection, e2: CourantSection, e3: CourantSection) -> float:
    """|[e1,[e2,e3]] - [[e1,e2],e3] - [e2,[e1,e3]]|."""
    lhs = dorfman(d, e1, dorfman(d, e2, e3))
    rhs1 = dorfman(d, dorfman(d, e1, e2), e3)
    rhs2 = dorfman(d, e2, dorfman(d, e1, e3))
    return float(np.abs(lhs.flat() - rhs1.flat() - rhs2.flat()).max(initial=0.0))


def _admissible_bracket(d: CourantData) -> np.ndarray:
    idx = d.admissible()
    return bracket_tensor(d)[np.ix_(idx, idx, idx)]


def leibniz_tensor(d: CourantData) -> np.ndarray:
    """L[a, b, c] = Leibniz defect of the basis triple (f_a, f_b, f_c).

    Indices run over :meth:`CourantData.admissible`.
    """
    B = _admissible_bracket(d)
    inner = np.tensordot(B, B, axes=([2], [1])).transpose(2, 0, 1, 3)  # [f_a, [f_b, f_c]]
    outer1 = np.tensordot(B, B, axes=([2], [0]))  # [[f_a, f_b], f_c]
    outer2 = np.tensordot(B, B, axes=([2], [1])).transpose(0, 2, 1, 3)  # [f_b, [f_a, f_c]]
    return inner - outer1 - outer2


def max_leibniz_residual(d: CourantData) -> float:
    """Max Leibniz defect over all basis triples."""
    return float(np.abs(leibniz_tensor(d)).max(initial=0.0))


def invariance_residual(d: CourantData) -> float:
    """Max over basis triples of |<[a,b],c> + <b,[a,c]>| (the anchor kills constants)."""
    idx = d.admissible()
    B, G = _admissible_bracket(d), pairing_matrix(d)[np.ix_(idx, idx)]
    t = np.einsum("abx,xc->abc", B, G)
    return float(np.abs(t + t.transpose(0, 2, 1)).max(initial=0.0))


def self_bracket_residual(d: CourantData, e: CourantSection) -> float:
    """|[e, e]|; on invariant sections [e, e] = D<e, e> = 0."""
    return dorfman(d, e, e).norm()


def random_section(rng: np.random.Generator, dim: int, rank: int, complex_fiber: bool = False,
                   pairingc: Pairing | None = None) -> CourantSection:
    """Random invariant section; with ``pairingc`` the vertical part is block diagonal."""
    s = rng.normal(size=(rank, rank))
    if complex_fiber:
        s = s + 1j * rng.normal(size=(rank, rank))
    if pairingc is not None:
        s = np.where(block_pattern(pairingc), s, 0)
    return CourantSection(rng.normal(size=dim), s, rng.normal(size=dim))
