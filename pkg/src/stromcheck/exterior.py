"""Complexified exterior algebra over a fixed real basis e^1, ..., e^m.

Forms are stored sparsely as ``{index tuple: complex coefficient}`` with
1-based, strictly increasing index tuples, so ``(1, 2)`` is e^1 ^ e^2.
Evaluation follows the determinant convention,
(e^1 ^ e^2)(e_1, e_2) = 1.

Linear operators that act degree by degree (Hodge star, substitutions,
the Chevalley-Eilenberg differential, bidegree projections) are realised
as dense matrices on the lexicographically ordered basis of each degree;
see :func:`basis` and :meth:`Form.vector`.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

#: Coefficients below this magnitude are dropped on construction.
ZERO_TOL = 1e-12
#: Default absolute tolerance for residual pass/fail decisions.
RESIDUAL_TOL = 1e-9


class DimensionError(ValueError):
    """Operands live over bases of different dimension."""


def sort_sign(seq: Iterable[int]) -> tuple[tuple[int, ...], int]:
    """Sort ``seq`` and return it with the parity of the sorting permutation.

    The sign is 0 when ``seq`` has a repeated entry. Every sign in the
    package goes through this routine.
    """
    items = list(seq)
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and items[j - 1] == items[j]:
            return tuple(items), 0
    return tuple(items), sign


@lru_cache(maxsize=None)
def basis(dim: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Lexicographically ordered degree-``k`` basis index tuples."""
    return tuple(itertools.combinations(range(1, dim + 1), k))


@lru_cache(maxsize=None)
def basis_index(dim: int, k: int) -> dict[tuple[int, ...], int]:
    return {idx: pos for pos, idx in enumerate(basis(dim, k))}


@lru_cache(maxsize=None)
def wedge_table(dim: int, p: int, q: int) -> np.ndarray:
    """Sign tensor S with e^I ^ e^J = S[I, J, K] e^K on dense bases."""
    out = np.zeros((len(basis(dim, p)), len(basis(dim, q)), len(basis(dim, p + q))))
    target = basis_index(dim, p + q)
    for a, left in enumerate(basis(dim, p)):
        for b, right in enumerate(basis(dim, q)):
            key, sign = sort_sign(left + right)
            if sign:
                out[a, b, target[key]] = sign
    out.setflags(write=False)
    return out


class Form:
    """Element of the complexified exterior algebra over ``dim`` generators.

    Parameters
    ----------
    dim : int
        Number of basis 1-forms (the real dimension 2n).
    terms : mapping, optional
        ``{index tuple: coefficient}``. Index tuples need not be sorted;
        they are brought to canonical order with the matching sign.
    """

    __slots__ = ("dim", "_terms")

    def __init__(self, dim: int, terms: Mapping[tuple[int, ...], complex] | None = None):
        self.dim = int(dim)
        acc: dict[tuple[int, ...], complex] = {}
        for idx, coeff in (terms or {}).items():
            if any(i < 1 or i > self.dim for i in idx):
                raise IndexError(f"index {idx} outside 1..{self.dim}")
            key, sign = sort_sign(idx)
            if sign:
                acc[key] = acc.get(key, 0j) + sign * complex(coeff)
        self._terms = {k: v for k, v in sorted(acc.items()) if abs(v) >= ZERO_TOL}

    # construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "Form":
        return cls(dim)

    @classmethod
    def scalar(cls, dim: int, value: complex) -> "Form":
        return cls(dim, {(): value})

    @classmethod
    def e(cls, dim: int, *idx: int, coeff: complex = 1.0) -> "Form":
        """Basis monomial ``coeff * e^{idx[0]} ^ e^{idx[1]} ^ ...``."""
        return cls(dim, {tuple(idx): coeff})

    @classmethod
    def one_form(cls, coeffs: Iterable[complex]) -> "Form":
        coeffs = list(coeffs)
        return cls(len(coeffs), {(i + 1,): c for i, c in enumerate(coeffs)})

    @classmethod
    def from_vector(cls, dim: int, k: int, vec: np.ndarray) -> "Form":
        return cls(dim, dict(zip(basis(dim, k), np.asarray(vec, dtype=complex))))

    @classmethod
    def from_tensor(cls, tensor: np.ndarray) -> "Form":
        """Form whose values on basis vectors are given by an alternating array."""
        tensor = np.asarray(tensor)
        k = tensor.ndim
        dim = tensor.shape[0] if k else 0
        return cls(dim, {idx: tensor[tuple(i - 1 for i in idx)] for idx in basis(dim, k)})

    # access ---------------------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, ...], complex]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __getitem__(self, idx: tuple[int, ...]) -> complex:
        key, sign = sort_sign(idx)
        return sign * self._terms.get(key, 0j)

    @property
    def degrees(self) -> set[int]:
        return {len(k) for k in self._terms}

    @property
    def degree(self) -> int:
        """Degree of a homogeneous form; the zero form reports 0."""
        degs = self.degrees
        if len(degs) > 1:
            raise ValueError(f"form is not homogeneous (degrees {sorted(degs)})")
        return degs.pop() if degs else 0

    def part(self, k: int) -> "Form":
        return Form(self.dim, {i: c for i, c in self._terms.items() if len(i) == k})

    def vector(self, k: int) -> np.ndarray:
        """Dense coefficient vector of the degree-``k`` part."""
        pos = basis_index(self.dim, k)
        out = np.zeros(len(pos), dtype=complex)
        for idx, c in self._terms.items():
            if len(idx) == k:
                out[pos[idx]] = c
        return out

    def tensor(self, k: int | None = None) -> np.ndarray:
        """Alternating array T with T[i1, ..., ik] = form(e_i1, ..., e_ik)."""
        if k is None:
            k = self.degree
        out = np.zeros((self.dim,) * k, dtype=complex)
        for idx, c in self._terms.items():
            if len(idx) != k:
                continue
            for perm in itertools.permutations(range(k)):
                _, sign = sort_sign(perm)
                out[tuple(idx[p] - 1 for p in perm)] = sign * c
        return out

    def norm(self) -> float:
        """Sup-norm over basis coefficients."""
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def is_zero(self, tol: float = RESIDUAL_TOL) -> bool:
        return self.norm() < tol

    def allclose(self, other: "Form", tol: float = RESIDUAL_TOL) -> bool:
        return (self - other).norm() < tol

    def conj(self) -> "Form":
        return Form(self.dim, {i: c.conjugate() for i, c in self._terms.items()})

    @property
    def real(self) -> "Form":
        return Form(self.dim, {i: c.real for i, c in self._terms.items()})

    @property
    def imag(self) -> "Form":
        return Form(self.dim, {i: c.imag for i, c in self._terms.items()})

    def scalar_value(self) -> complex:
        return self._terms.get((), 0j)

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "Form") -> None:
        if not isinstance(other, Form):
            raise TypeError(f"expected Form, got {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        acc = dict(self._terms)
        for i, c in other._terms.items():
            acc[i] = acc.get(i, 0j) + c
        return Form(self.dim, acc)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __neg__(self) -> "Form":
        return Form(self.dim, {i: -c for i, c in self._terms.items()})

    def __mul__(self, scalar: complex) -> "Form":
        if isinstance(scalar, Form):
            return wedge(self, scalar)
        return Form(self.dim, {i: scalar * c for i, c in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "Form":
        return self * (1.0 / scalar)

    def __xor__(self, other: "Form") -> "Form":
        return wedge(self, other)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Form) and self.dim == other.dim and self._terms == other._terms

    def __hash__(self):
        return hash((self.dim, tuple(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return f"Form({self.dim}, 0)"
        parts = []
        for idx, c in self._terms.items():
            name = "e^" + "".join(map(str, idx)) if idx else "1"
            parts.append(f"({c:.6g}){name}")
        return f"Form({self.dim}, " + " + ".join(parts) + ")"


# ---------------------------------------------------------------------------
# products and contractions


def wedge(a: Form, b: Form) -> Form:
    """Exterior product."""
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    acc: dict[tuple[int, ...], complex] = {}
    for i, x in a.items():
        for j, y in b.items():
            key, sign = sort_sign(i + j)
            if sign:
                acc[key] = acc.get(key, 0j) + sign * x * y
    return Form(a.dim, acc)


def wedge_power(a: Form, k: int) -> Form:
    out = Form.scalar(a.dim, 1.0)
    for _ in range(k):
        out = wedge(out, a)
    return out


def interior(v, a: Form) -> Form:
    """Contraction ``iota_v a`` = a(v, ...), a degree -1 anti-derivation.

    ``v`` holds the vector's coefficients on e_1, ..., e_m.
    """
    v = np.asarray(v)
    if v.shape != (a.dim,):
        raise DimensionError(f"vector of length {v.shape} against dim {a.dim}")
    if a.degrees and min(a.degrees) == 0 and a.part(0).norm() > 0:
        raise ValueError("interior product of a form with a degree-0 component")
    acc: dict[tuple[int, ...], complex] = {}
    for idx, c in a.items():
        for r, i in enumerate(idx):
            if v[i - 1] == 0:
                continue
            key = idx[:r] + idx[r + 1:]
            acc[key] = acc.get(key, 0j) + (-1) ** r * v[i - 1] * c
    return Form(a.dim, acc)


def evaluate(a: Form, *vectors) -> complex:
    """Value of the homogeneous form ``a`` on the given vectors."""
    out = a
    for v in vectors:
        out = interior(v, out)
    return out.scalar_value()


def exterior_power(mat: np.ndarray, k: int) -> np.ndarray:
    """Matrix of k x k minors, ``out[I, J] = det(mat[I, J])``.

    If each e^i is substituted by sum_j mat[i, j] e^j, a degree-k coefficient
    vector ``c`` becomes ``exterior_power(mat, k).T @ c``.
    """
    mat = np.asarray(mat)
    dim = mat.shape[0]
    rows = [np.array(idx) - 1 for idx in basis(dim, k)]
    if k == 0:
        return np.ones((1, 1), dtype=mat.dtype)
    out = np.empty((len(rows), len(rows)), dtype=np.result_type(mat, float))
    for a, ri in enumerate(rows):
        sub = mat[ri]
        for b, cj in enumerate(rows):
            out[a, b] = np.linalg.det(sub[:, cj])
    return out


def substitute(mat: np.ndarray, a: Form) -> Form:
    """Algebra map induced by e^i -> sum_j mat[i, j] e^j."""
    out = Form.zero(a.dim)
    for k in sorted(a.degrees):
        out = out + Form.from_vector(a.dim, k, exterior_power(mat, k).T @ a.vector(k))
    return out


# ---------------------------------------------------------------------------
# metric operations


class MetricTensor:
    """Symmetric positive-definite metric g_ij on the real basis e_1, ..., e_m."""

    __slots__ = ("dim", "matrix", "_inverse", "_star")

    def __init__(self, matrix):
        mat = np.array(matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("metric must be a square matrix")
        mat = 0.5 * (mat + mat.T)
        eig = np.linalg.eigvalsh(mat)
        if eig.min() <= 0:
            raise ValueError(f"metric is not positive definite (min eigenvalue {eig.min():.3g})")
        mat.setflags(write=False)
        self.dim = mat.shape[0]
        self.matrix = mat
        self._inverse = np.linalg.inv(mat)
        self._star: dict[int, np.ndarray] = {}

    @classmethod
    def identity(cls, dim: int, scale: float = 1.0) -> "MetricTensor":
        return cls(scale * np.eye(dim))

    @property
    def inverse(self) -> np.ndarray:
        return self._inverse

    @property
    def volume_factor(self) -> float:
        return math.sqrt(np.linalg.det(self.matrix))

    def volume_form(self) -> Form:
        return Form.e(self.dim, *range(1, self.dim + 1), coeff=self.volume_factor)

    def inner_matrix(self, k: int) -> np.ndarray:
        """Gram matrix <e^I, e^J>_g = det(g^{-1}[I, J]) on degree-k forms."""
        return exterior_power(self._inverse, k)

    def inner(self, a: Form, b: Form) -> complex:
        """Complex-bilinear pointwise inner product summed over degrees."""
        return sum(a.vector(k) @ self.inner_matrix(k) @ b.vector(k) for k in a.degrees & b.degrees)

    def star_matrix(self, k: int) -> np.ndarray:
        if k not in self._star:
            m = self.dim
            target = basis_index(m, m - k)
            full = tuple(range(1, m + 1))
            comp = np.zeros((len(basis(m, m - k)), len(basis(m, k))))
            for pos, idx in enumerate(basis(m, k)):
                rest = tuple(i for i in full if i not in idx)
                _, sign = sort_sign(idx + rest)
                comp[target[rest], pos] = sign
            mat = self.volume_factor * comp @ self.inner_matrix(k)
            mat.setflags(write=False)
            self._star[k] = mat
        return self._star[k]


def hodge_star(g: MetricTensor, a: Form) -> Form:
    """Riemannian Hodge star for the orientation e^1 ^ ... ^ e^m.

    Characterised by a ^ *b = <a, b>_g vol_g on forms of equal degree.
    For a hermitian pair, *omega = omega^{n-1}/(n-1)! holds when omega^n is a
    positive multiple of e^1 ^ ... ^ e^m, and with a minus sign otherwise.
    """
    if g.dim != a.dim:
        raise DimensionError(f"metric dim {g.dim} vs form dim {a.dim}")
    out = Form.zero(a.dim)
    for k in sorted(a.degrees):
        out = out + Form.from_vector(a.dim, a.dim - k, g.star_matrix(k) @ a.vector(k))
    return out


def lambda_contract(omega: Form, a: Form) -> Form:
    """Contraction with the bivector dual to ``omega``.

    Lambda(psi) = sum_{i<j} W^{ij} psi(e_i, e_j, ...) with W = -(omega matrix)^{-1},
    which normalises Lambda(omega) = n. With omega = e^12 + e^34 + e^56 this
    gives Lambda(e^1234) = e^12 + e^34, i.e. no extra constant on 4-forms.
    Parts of degree < 2 contract to zero.
    """
    w = -np.linalg.inv(omega.tensor(2))
    dim = a.dim
    out = Form.zero(dim)
    eye = np.eye(dim)
    for k in sorted(a.degrees):
        if k < 2:
            continue
        part = a.part(k)
        for i, j in basis(dim, 2):
            coeff = w[i - 1, j - 1]
            if abs(coeff) < ZERO_TOL:
                continue
            out = out + coeff * interior(eye[j - 1], interior(eye[i - 1], part))
    return out
