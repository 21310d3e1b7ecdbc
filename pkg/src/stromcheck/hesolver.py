"""Line-bundle Hermite-Einstein equation on the flat unit 2-torus.

For a line bundle the Hermite-Einstein condition reduces to a linear
equation for the conformal factor f of the fiber metric,

    i Lambda delbar del f = lambda - i Lambda F_h,

and with 2 i Lambda delbar del = Delta (Delta = d*d, positive spectrum)
this is the Poisson problem Delta f = 2 * source. It is solvable iff the
source integrates to zero, and then unique up to an additive constant,
which is the homothety freedom of the hermitian metric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_N = 64
MEAN_TOL = 1e-10


class ObstructionError(ValueError):
    """The source has nonzero integral, so lambda and the degree are incompatible."""


@dataclass(frozen=True)
class GridField:
    """Samples values[i, j] = f(i/N, j/N) on the unit flat torus."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("GridField needs an N x N array")
        if not np.all(np.isfinite(v)):
            raise ValueError("GridField values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @classmethod
    def from_function(cls, func, N: int = DEFAULT_N) -> "GridField":
        x, y = grid(N)
        return cls(np.broadcast_to(func(x, y), (N, N)))

    @classmethod
    def from_modes(cls, modes, N: int = DEFAULT_N, constant: float = 0.0) -> "GridField":
        """Sum of ``amp * cos(2 pi (kx x + ky y) + phase)`` over (kx, ky, amp[, phase])."""
        x, y = grid(N)
        out = np.full((N, N), float(constant))
        for mode in modes:
            kx, ky, amp = mode[:3]
            phase = mode[3] if len(mode) > 3 else 0.0
            out += amp * np.cos(2 * np.pi * (kx * x + ky * y) + phase)
        return cls(out)

    def mean(self) -> float:
        return float(self.values.mean())

    def __add__(self, other: "GridField") -> "GridField":
        return GridField(self.values + other.values)

    def __mul__(self, a: float) -> "GridField":
        return GridField(a * self.values)

    __rmul__ = __mul__


def grid(N: int) -> tuple[np.ndarray, np.ndarray]:
    pts = np.arange(N) / N
    return np.meshgrid(pts, pts, indexing="ij")


def _symbol(N: int) -> np.ndarray:
    k = 2 * np.pi * np.fft.fftfreq(N, d=1.0 / N)
    kx, ky = np.meshgrid(k, k, indexing="ij")
    return kx ** 2 + ky ** 2


def laplacian(f: GridField) -> GridField:
    """Spectral Delta = -(d_xx + d_yy)."""
    return GridField(np.fft.ifft2(_symbol(f.N) * np.fft.fft2(f.values)).real)


def degree_check(source: GridField) -> float:
    """Mean of the samples (the normalized integral of the source)."""
    return source.mean()


def solve_he(source: GridField, tol: float = MEAN_TOL) -> tuple[GridField, float]:
    """Zero-mean f with Delta f = 2 * source, and the sup-norm residual."""
    mean = degree_check(source)
    if abs(mean) >= tol:
        raise ObstructionError(
            f"integral of lambda - i Lambda F_h over the torus is {mean:.6g}, not 0; "
            "no hermitian metric solves the Hermite-Einstein equation for this lambda")
    sym = _symbol(source.N)
    sym[0, 0] = 1.0
    coef = 2 * np.fft.fft2(source.values) / sym
    coef[0, 0] = 0.0
    f = GridField(np.fft.ifft2(coef).real)
    residual = float(np.abs(laplacian(f).values - 2 * source.values).max())
    return f, residual
