import numpy as np
import pytest
from hypothesis import given

from helpers import close, random_form, rng_from, seeds
from stromcheck import models
from stromcheck.cxstruct import (AlmostComplexStructure, IntegrabilityError, bidegree_parts, d_leakage, dc,
                                 dc_conjugation, del_, delbar, j_action, nijenhuis, pq_project)
from stromcheck.exterior import Form
from stromcheck.liealg import LieAlgebraModel, ce_differential
from stromcheck.models import theta, theta_bar

J6 = AlmostComplexStructure.standard(6)


def integrable_pair(rng):
    """(algebra, J) with J integrable, possibly in a rotated basis."""
    h = models.random_integrable_model(rng)
    return h.alg, h.J


def test_standard_j_types():
    th1, th2 = theta(6, 1), theta(6, 2)
    a = th1 ^ theta_bar(6, 1)
    assert pq_project(J6, a, 1, 1).allclose(a, 1e-14)
    assert pq_project(J6, a, 2, 0).norm() < 1e-14
    b = th1 ^ th2
    assert pq_project(J6, b, 2, 0).allclose(b, 1e-14)


def test_theta_is_type_10():
    # alpha(J v) = i alpha(v) on every basis vector
    for j in (1, 2, 3):
        vec = theta(6, j).vector(1)
        assert np.allclose(vec @ J6.matrix, 1j * vec)


def test_pq_project_degree_mismatch():
    with pytest.raises(ValueError):
        pq_project(J6, Form.e(6, 1, 2), 2, 1)


def test_j_squared_enforced():
    with pytest.raises(ValueError):
        AlmostComplexStructure(np.eye(4))


@given(seeds)
def test_bidegree_decomposition(seed):
    rng = rng_from(seed)
    p = models.random_basis_change(rng, 6)
    J = J6.conjugated(p)
    k = int(rng.integers(0, 7))
    a = random_form(rng, 6, k)
    parts = [pq_project(J, a, p_, k - p_) for p_ in range(k + 1)]
    total = Form.zero(6)
    for p_, piece in enumerate(parts):
        total = total + piece
        # eigen-endomorphism (-1)^k alpha(J., ..., J.) acts as i^{q-p}
        assert close(j_action(J, piece), (1j) ** (k - 2 * p_) * piece, 1e-9)
        # idempotent, and annihilated by every other projection
        assert close(pq_project(J, piece, p_, k - p_), piece, 1e-9)
        for r in range(k + 1):
            if r != p_:
                assert pq_project(J, piece, r, k - r).norm() < 1e-9 * max(1.0, a.norm())
    assert close(total, a, 1e-9)
    assert close(sum(bidegree_parts(J, a).values(), Form.zero(6)), a, 1e-9)


def test_nijenhuis_abelian():
    rng = np.random.default_rng(5)
    J = J6.conjugated(models.random_basis_change(rng, 6))
    assert nijenhuis(LieAlgebraModel.abelian(6), J) == 0


def test_nijenhuis_iwasawa():
    h = models.iwasawa()
    assert nijenhuis(h.alg, h.J) < 1e-14


def test_nijenhuis_rotated_iwasawa_j():
    # J conjugated by a rotation that does not commute with J, on the same algebra
    c, s = np.cos(0.7), np.sin(0.7)
    rot = np.eye(6)
    rot[np.ix_([0, 2], [0, 2])] = [[c, -s], [s, c]]
    J = J6.conjugated(rot)
    assert np.abs(J.matrix - J6.matrix).max() > 0.1
    alg = models.iwasawa().alg
    assert nijenhuis(alg, J) > 0.1
    assert d_leakage(alg, J) > 0.1
    with pytest.raises(IntegrabilityError):
        dc(alg, J, Form.e(6, 1))


@given(seeds)
def test_nijenhuis_iff_no_leakage(seed):
    rng = rng_from(seed)
    alg, J = integrable_pair(rng)
    if rng.random() < 0.5:
        J = J.conjugated(models.random_basis_change(rng, alg.dim))
    assert (nijenhuis(alg, J) < 1e-9) == (d_leakage(alg, J) < 1e-9)


def test_dc_on_scalars():
    alg = models.sl2c(1.0).alg
    assert dc(alg, J6, Form.scalar(6, 3.0)).norm() == 0


@pytest.mark.parametrize("t", [1.0, 2.0, 3.0])
def test_sl2c_ddc_omega(t):
    # Verified value +4/t^2 on each of e^1234, e^1256, e^3456 (see README, sign conventions).
    # Two independent routes: the bidegree operators and J d J^{-1}.
    h = models.sl2c(t)
    v = Form.e(6, 1, 2, 3, 4) + Form.e(6, 1, 2, 5, 6) + Form.e(6, 3, 4, 5, 6)
    via_projectors = ce_differential(h.alg, dc(h.alg, h.J, h.omega))
    via_conjugation = ce_differential(h.alg, dc_conjugation(h.alg, h.J, h.omega))
    assert close(via_projectors, 4 / t ** 2 * v, 1e-12)
    assert close(via_conjugation, 4 / t ** 2 * v, 1e-12)


def test_sl2c_ddc_omega_hand_oracle():
    # omega = i/2 sum theta_j ^ conj(theta_j); for a (1,1)-form dd^c = 2i del delbar and
    # with the holomorphic relations d theta_1 = theta_2 ^ theta_3 (cyclic, t = 1),
    # delbar omega = -i/2 sum theta_j ^ d conj(theta_j),
    # 2i del delbar omega = sum_j d theta_j ^ d conj(theta_j) = sum_j |theta_kl|^2 terms.
    th = [theta(6, j) for j in (1, 2, 3)]
    dth = [th[1] ^ th[2], -(th[0] ^ th[2]), th[0] ^ th[1]]
    oracle = Form.zero(6)
    for d in dth:
        oracle = oracle + (d ^ d.conj())
    h = models.sl2c(1.0)
    assert close(ce_differential(h.alg, dc(h.alg, h.J, h.omega)), oracle, 1e-12)


@given(seeds)
def test_ddc_is_2i_del_delbar_on_11_forms(seed):
    rng = rng_from(seed)
    alg, J = integrable_pair(rng)
    m = alg.dim
    a = pq_project(J, random_form(rng, m, 2), 1, 1)
    lhs = ce_differential(alg, dc(alg, J, a))
    rhs = 2j * del_(alg, J, delbar(alg, J, a))
    assert close(lhs, rhs, 1e-9)


@given(seeds)
def test_operator_identities(seed):
    rng = rng_from(seed)
    alg, J = integrable_pair(rng)
    m = alg.dim
    k = int(rng.integers(0, m - 1))
    a = random_form(rng, m, k)
    d = ce_differential(alg, a)
    assert close(d, del_(alg, J, a) + delbar(alg, J, a), 1e-9)
    assert del_(alg, J, del_(alg, J, a)).norm() < 1e-9 * max(1.0, a.norm())
    assert delbar(alg, J, delbar(alg, J, a)).norm() < 1e-9 * max(1.0, a.norm())
    anti = del_(alg, J, delbar(alg, J, a)) + delbar(alg, J, del_(alg, J, a))
    assert anti.norm() < 1e-9 * max(1.0, a.norm())
    # dd^c = -d^c d
    assert close(ce_differential(alg, dc(alg, J, a)), -dc(alg, J, d), 1e-9)


@given(seeds)
def test_dc_equals_conjugated_d(seed):
    rng = rng_from(seed)
    alg, J = integrable_pair(rng)
    k = int(rng.integers(1, 3))
    a = random_form(rng, alg.dim, k)
    assert close(dc(alg, J, a), dc_conjugation(alg, J, a), 1e-9)
