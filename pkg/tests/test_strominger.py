import math

import numpy as np
import pytest
from hypothesis import given

from helpers import close, holomorphic_volume, rng_from, seeds
from stromcheck import courant, models
from stromcheck.cxstruct import dc
from stromcheck.exterior import Form
from stromcheck.gauge import Connection, Pairing, bismut, chern, direct_sum, random_skew_hermitian
from stromcheck.hermitian import HermitianData
from stromcheck.strominger import (SOLVE, StromingerModel, bianchi_residual, bianchi_residual_split, check_system,
                                   lambda_value, solve_alpha)

V = Form.e(6, 1, 2, 3, 4) + Form.e(6, 1, 2, 5, 6) + Form.e(6, 3, 4, 5, 6)


def sl2c_model(t, alpha=SOLVE, rank=1):
    h = models.sl2c(t)
    return StromingerModel(h, bismut(h), Connection.flat(6, rank), alpha=alpha, name="sl2c")


def torus_model(alpha=SOLVE):
    h = models.torus(6)
    return StromingerModel(h, Connection.flat(6, 6), Connection.flat(6, 2), alpha=alpha)


def standard_embedding(h, conn):
    return StromingerModel(h, conn, conn.with_fiber_metric(h.g.matrix),
                           Pairing.tangent(6) + Pairing.tangent(6, -1.0))


# ---------------------------------------------------------------------------
# Bianchi residual


def test_sl2c_solution_bianchi():
    assert bianchi_residual(sl2c_model(2.0), 1.0).norm() < 1e-12


def test_abelian_bianchi_any_alpha():
    for alpha in (0.0, 0.3, 7.0):
        assert bianchi_residual(torus_model(), alpha).norm() == 0


def test_sl2c_t1_alpha1():
    # dd^c omega = 4V and alpha (tr R^R - tr F^F) = 16V give -12V with these conventions
    assert close(bianchi_residual(sl2c_model(1.0), 1.0), -12 * V, 1e-12)


@given(seeds)
def test_bianchi_linear_in_alpha(seed):
    rng = rng_from(seed)
    m = sl2c_model(float(rng.uniform(0.5, 3)))
    a, b = rng.normal(size=2)
    lhs = bianchi_residual(m, a + b) + m.ddc_omega().real
    rhs = bianchi_residual(m, a) + bianchi_residual(m, b)
    assert close(lhs, rhs, 1e-10)


@given(seeds)
def test_split_and_combined_formulations_agree(seed):
    rng = rng_from(seed)
    h = models.sl2c(float(rng.uniform(0.5, 3)))
    r = int(rng.integers(1, 4))
    A = Connection(np.array([random_skew_hermitian(rng, r) for _ in range(6)]))
    c = Pairing.tangent(6, float(rng.uniform(0.1, 2))) + Pairing.trace(r, -float(rng.uniform(0.1, 2)))
    m = StromingerModel(h, bismut(h), A, c)
    alpha = float(rng.normal())
    assert close(bianchi_residual(m, alpha), bianchi_residual_split(m, alpha), 1e-10)


@given(seeds)
def test_standard_embedding_bianchi_is_ddc_omega(seed):
    rng = rng_from(seed)
    h = models.random_integrable_model(rng)
    if h.alg.dim != 6:
        return
    h = HermitianData(h.alg, h.J, h.g, holomorphic_volume(h.J))
    conn = [bismut, chern][int(rng.integers(2))](h)
    m = standard_embedding(h, conn)
    for alpha in rng.normal(scale=10, size=3):
        assert (bianchi_residual(m, alpha) - m.ddc_omega().real).norm() < 1e-12 * max(1.0, abs(alpha))


# ---------------------------------------------------------------------------
# solve_alpha


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0, 3.0])
def test_solve_alpha_sl2c(t):
    out = solve_alpha(sl2c_model(t))
    assert out.status == "exact"
    assert abs(out.alpha - t ** 2 / 4) < 1e-12
    assert out.residual < 1e-12


def test_solve_alpha_degenerate():
    out = solve_alpha(torus_model())
    assert out.status == "degenerate" and out.alpha == 0.0


def test_solve_alpha_no_alpha():
    # Iwasawa standard embedding: P = 0 while dd^c omega != 0
    out = solve_alpha(standard_embedding(models.iwasawa(), chern(models.iwasawa())))
    assert out.status == "no_alpha" and out.alpha is None and out.residual > 1


def test_solve_alpha_least_squares():
    # a bundle curvature that is not parallel to dd^c omega
    rng = np.random.default_rng(3)
    h = models.sl2c(2.0)
    A = Connection(np.array([random_skew_hermitian(rng, 2) for _ in range(6)]))
    m = StromingerModel(h, bismut(h), A)
    out = solve_alpha(m)
    assert out.status == "least_squares"
    assert abs(bianchi_residual(m, out.alpha).norm() - out.residual) < 1e-12
    # the reported alpha minimises the residual
    for da in (-1e-3, 1e-3):
        assert bianchi_residual(m, out.alpha + da).vector(4).real @ bianchi_residual(m, out.alpha + da).vector(
            4).real >= bianchi_residual(m, out.alpha).vector(4).real @ bianchi_residual(m, out.alpha).vector(4).real


# ---------------------------------------------------------------------------
# check_system


def test_check_system_sl2c():
    rep = check_system(sl2c_model(2.0, alpha=1.0))
    assert rep.passed
    assert rep.alpha_used == 1.0
    assert set(rep.flags) == {"hym_A", "hym_nabla", "conformally_balanced", "bianchi", "holomorphic_volume"}


def test_check_system_sl2c_wrong_alpha_fails_bianchi_only():
    rep = check_system(sl2c_model(2.0, alpha=0.5))
    assert not rep.passed
    assert [k for k, v in rep.flags.items() if not v] == ["bianchi"]


def test_check_system_torus():
    rep = check_system(torus_model(alpha=0.7))
    assert rep.passed
    assert rep.classification["kahler"]


def test_check_system_iwasawa_standard_embedding():
    h = models.iwasawa()
    rep = check_system(standard_embedding(h, chern(h)))
    assert rep.flags["conformally_balanced"]
    assert rep.flags["hym_A"] and rep.flags["hym_nabla"]
    # tr R^R cancels, but dd^c omega itself is nonzero on this model
    assert not rep.flags["bianchi"]
    assert math.isclose(rep.residuals["bianchi"], 8.0, rel_tol=1e-12)


def test_strict_hym_nabla_switch():
    rng = np.random.default_rng(11)
    h = models.torus(6)
    nabla = Connection(np.array([random_skew_hermitian(rng, 6).real for _ in range(6)]))
    loose = check_system(StromingerModel(h, nabla, Connection.flat(6, 1), strict_hym_nabla=False))
    strict = check_system(StromingerModel(h, nabla, Connection.flat(6, 1), strict_hym_nabla=True))
    assert "hym_nabla" not in loose.flags
    assert loose.informational["hym_nabla_passes"] is False
    assert strict.flags["hym_nabla"] is False


@given(seeds)
def test_flags_invariant_under_fiber_metric_rescale(seed):
    rng = rng_from(seed)
    h = models.sl2c(float(rng.uniform(0.5, 3)))
    r = int(rng.integers(1, 3))
    A = Connection(np.array([random_skew_hermitian(rng, r) for _ in range(6)]))
    if rng.random() < 0.5:
        A = Connection.flat(6, r)
    base = check_system(StromingerModel(h, bismut(h), A))
    scaled = check_system(StromingerModel(h, bismut(h), A.with_fiber_metric(float(rng.uniform(0.1, 10)) * np.eye(r))))
    assert base.flags == scaled.flags


def test_solution_gives_leibniz_courant_algebroid():
    m = sl2c_model(2.0, alpha=1.0)
    assert check_system(m).passed
    h = m.h
    H = dc(h.alg, h.J, h.omega).real
    theta = direct_sum(m.nablaT, m.A)
    data = courant.CourantData(h.alg, H, theta, m.pairingc.scaled(1.0))
    assert data.bianchi_residual() < 1e-12
    assert courant.max_leibniz_residual(data) < 1e-9


def test_model_validation():
    h = models.sl2c(1.0)
    with pytest.raises(ValueError):
        StromingerModel(models.hopf4(), Connection.flat(4, 4), Connection.flat(4, 1))
    with pytest.raises(ValueError):
        StromingerModel(h, Connection.flat(6, 6), Connection.flat(6, 2), Pairing.trace(3))
    with pytest.raises(ValueError):
        StromingerModel(h, Connection.flat(6, 6), Connection.flat(6, 2), alpha="guess")


# ---------------------------------------------------------------------------
# lambda


def test_lambda_value_examples():
    assert lambda_value(0, 1, 1.0, 3) == 0
    assert lambda_value(2, 1, 1.0, 3) == 2 * math.pi
    assert lambda_value(1, 2, 1.0, 2) == math.pi


@pytest.mark.parametrize("args", [(1, 0, 1.0, 3), (1, 1, 0.0, 3), (1, 1, -1.0, 3)])
def test_lambda_value_rejects(args):
    with pytest.raises(ValueError):
        lambda_value(*args)
