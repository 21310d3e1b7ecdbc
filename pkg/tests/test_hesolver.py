import numpy as np
import pytest
from hypothesis import given

from helpers import rng_from, seeds
from stromcheck.hesolver import (MEAN_TOL, GridField, ObstructionError, degree_check, grid, laplacian, solve_he)


def band_limited(rng, N=32, kmax=4, mean=0.0):
    modes = []
    for _ in range(int(rng.integers(1, 6))):
        kx, ky = (int(k) for k in rng.integers(-kmax, kmax + 1, size=2))
        if kx == ky == 0:
            continue
        modes.append([kx, ky, float(rng.normal()), float(rng.uniform(0, 2 * np.pi))])
    return GridField.from_modes(modes, N, constant=mean)


def test_zero_source():
    f, residual = solve_he(GridField(np.zeros((16, 16))))
    assert np.abs(f.values).max() == 0 and residual == 0


def test_cosine_source():
    src = GridField.from_function(lambda x, y: np.cos(2 * np.pi * x), 64)
    f, residual = solve_he(src)
    x, _ = grid(64)
    exact = 2 * np.cos(2 * np.pi * x) / (4 * np.pi ** 2)
    assert np.abs(f.values - exact).max() < 1e-8
    assert residual < 1e-12


def test_constant_source_is_obstructed():
    with pytest.raises(ObstructionError, match="integral"):
        solve_he(GridField(np.full((64, 64), 0.3)))


def test_degree_check_examples():
    assert degree_check(GridField(np.zeros((8, 8)))) == 0
    cos = GridField.from_function(lambda x, y: np.cos(2 * np.pi * x), 64)
    assert abs(degree_check(cos)) < 1e-15
    assert abs(degree_check(GridField(np.full((8, 8), 0.3))) - 0.3) < 1e-15


def test_laplacian_sign_convention():
    # Delta = -(d_xx + d_yy) has eigenvalue 4 pi^2 (kx^2 + ky^2) on Fourier modes
    src = GridField.from_modes([[1, 2, 1.0, 0.3]], 32)
    assert np.allclose(laplacian(src).values, 4 * np.pi ** 2 * 5 * src.values, atol=1e-9)


def test_grid_field_validation():
    with pytest.raises(ValueError):
        GridField(np.zeros((4, 5)))
    with pytest.raises(ValueError):
        GridField(np.full((4, 4), np.nan))


@given(seeds)
def test_solvable_iff_zero_mean(seed):
    rng = rng_from(seed)
    mean = 0.0 if rng.random() < 0.5 else float(rng.choice([-1, 1]) * rng.uniform(1e-6, 1))
    src = band_limited(rng, mean=mean)
    if abs(src.mean()) < MEAN_TOL:
        f, residual = solve_he(src)
        assert residual < 1e-9
        assert abs(f.mean()) < 1e-12
    else:
        with pytest.raises(ObstructionError):
            solve_he(src)


@given(seeds)
def test_unique_up_to_constant(seed):
    rng = rng_from(seed)
    src = band_limited(rng)
    f, _ = solve_he(src)
    # any other solution differs by a harmonic, i.e. constant, function
    g = GridField(f.values + float(rng.normal()))
    assert np.abs(laplacian(g).values - 2 * src.values).max() < 1e-9
    diff = g.values - f.values
    assert np.ptp(diff) < 1e-10
    f2, _ = solve_he(src)
    assert np.abs(f2.values - f.values).max() < 1e-10


@given(seeds)
def test_linearity(seed):
    rng = rng_from(seed)
    s1, s2 = band_limited(rng), band_limited(rng)
    a, b = rng.normal(size=2)
    combined, _ = solve_he(a * s1 + b * s2)
    f1, _ = solve_he(s1)
    f2, _ = solve_he(s2)
    assert np.abs(combined.values - (a * f1.values + b * f2.values)).max() < 1e-9
