import math

import numpy as np
import pytest
from hypothesis import given

import stromcheck.hermitian as hermitian
from helpers import close, holomorphic_volume, rng_from, seeds
from stromcheck import models
from stromcheck.cxstruct import AlmostComplexStructure, pq_project
from stromcheck.exterior import Form, MetricTensor, wedge_power
from stromcheck.hermitian import (CompatibilityError, ConventionError, HermitianData, classify,
                                  dilatino_residual, kahler_form, lee_form, omega_norm)
from stromcheck.liealg import LieAlgebraModel
from stromcheck.models import theta, theta_bar


def with_volume(h: HermitianData) -> HermitianData:
    return HermitianData(h.alg, h.J, h.g, holomorphic_volume(h.J))


def hopf_with_volume() -> HermitianData:
    h = models.hopf4()
    return HermitianData(h.alg, h.J, h.g, theta(4, 1) ^ theta(4, 2))


# ---------------------------------------------------------------------------
# Kahler form


def test_kahler_form_standard():
    h = models.torus(6)
    assert kahler_form(h) == Form.e(6, 1, 2) + Form.e(6, 3, 4) + Form.e(6, 5, 6)


def test_kahler_form_iwasawa():
    expected = Form.zero(6)
    for j in (1, 2, 3):
        expected = expected + 1j * (theta(6, j) ^ theta_bar(6, j))
    assert close(kahler_form(models.iwasawa()), expected, 1e-15)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_kahler_form_sl2c(t):
    expected = Form.zero(6)
    for j in (1, 2, 3):
        sigma = theta(6, j) / t
        expected = expected + (1j * t ** 2 / 2) * (sigma ^ sigma.conj())
    assert close(kahler_form(models.sl2c(t)), expected, 1e-14)


def test_incompatible_metric_rejected():
    g = MetricTensor(np.diag([1.0, 2.0, 1.0, 1.0]))
    with pytest.raises(CompatibilityError):
        HermitianData(LieAlgebraModel.abelian(4), AlmostComplexStructure.standard(4), g)


def test_omega_type_checked():
    h = models.torus(6)
    with pytest.raises(ValueError, match="type"):
        HermitianData(h.alg, h.J, h.g, theta(6, 1) ^ theta(6, 2) ^ theta_bar(6, 3))


@given(seeds)
def test_kahler_form_is_real_11_and_positive(seed):
    rng = rng_from(seed)
    h = models.random_integrable_model(rng)
    omega = kahler_form(h)
    assert np.abs(omega.imag.vector(2)).max() == 0
    assert close(pq_project(h.J, omega, 1, 1), omega, 1e-10)
    top = tuple(range(1, h.alg.dim + 1))
    assert wedge_power(omega, h.n)[top].real > 0


# ---------------------------------------------------------------------------
# Lee form


def test_lee_form_abelian():
    assert lee_form(models.torus(6)).norm() == 0


def test_lee_form_iwasawa():
    assert lee_form(models.iwasawa()).norm() < 1e-14


def test_lee_form_hopf():
    # by hand: de^2 = -e^34, de^3 = e^24, de^4 = -e^23, so d omega = e^134 and
    # Lambda(e^134) = iota_{e_4} iota_{e_3} e^134 = e^1, the central direction
    assert close(lee_form(models.hopf4()), Form.e(4, 1), 1e-14)


def test_lee_form_convention_guard(monkeypatch):
    monkeypatch.setattr(hermitian, "j_action", lambda J, a: 2 * a)
    with pytest.raises(ConventionError):
        lee_form(models.hopf4())


# ---------------------------------------------------------------------------
# classification


def test_classify_abelian():
    cl = classify(models.torus(6))
    assert cl.kahler and cl.balanced and cl.gauduchon


def test_classify_iwasawa():
    h = models.iwasawa()
    cl = classify(h)
    assert not cl.kahler and cl.balanced
    assert h.d(h.omega).norm() > 0.1
    assert (h.d(h.omega) ^ h.omega).norm() < 1e-14


def test_classify_hopf():
    cl = classify(models.hopf4())
    assert not cl.balanced and cl.gauduchon


@given(seeds)
def test_classification_monotone_and_rescale_invariant(seed):
    rng = rng_from(seed)
    h = models.random_integrable_model(rng)
    cl = classify(h)
    assert (not cl.kahler or cl.balanced) and (not cl.balanced or cl.gauduchon)
    c = float(rng.uniform(0.3, 3.0))
    hs = h.scaled(c)
    cs = classify(hs)
    assert (cs.kahler, cs.balanced, cs.gauduchon) == (cl.kahler, cl.balanced, cl.gauduchon)
    assert close(lee_form(hs), lee_form(h), 1e-9)


@given(seeds)
def test_prop_balanced_and_gauduchon_via_lee_form(seed):
    rng = rng_from(seed)
    h = models.random_integrable_model(rng)
    tol = 1e-9
    cl = classify(h, tol)
    theta_w = lee_form(h)
    assert cl.balanced == (theta_w.norm() < tol)
    assert cl.gauduchon == (h.codifferential(theta_w).norm() < tol)


@given(seeds)
def test_d_omega_power_is_lee_wedge(seed):
    rng = rng_from(seed)
    h = models.random_integrable_model(rng)
    pw = wedge_power(h.omega, h.n - 1)
    assert close(h.d(pw), lee_form(h) ^ pw, 1e-9)


# ---------------------------------------------------------------------------
# ||Omega|| and the dilatino equation


def test_omega_norm_iwasawa():
    # theta ^ conj(theta) = -2i e^12, so Omega ^ conj(Omega) = -8i e^123456 and the
    # right-hand side is 8 e^123456; with g = 2 Id, omega^3/3! = 8 e^123456
    assert math.isclose(omega_norm(models.iwasawa()), 1.0, rel_tol=1e-14)


def test_omega_norm_abelian_matches_iwasawa():
    torus = models.torus(6)
    assert math.isclose(omega_norm(torus), 2 * math.sqrt(2), rel_tol=1e-14)
    assert math.isclose(omega_norm(torus.scaled(2.0)), omega_norm(models.iwasawa()), rel_tol=1e-14)


@pytest.mark.parametrize("c", [0.25, 0.5, 3.0, 10.0])
def test_omega_norm_scaling(c):
    h = models.iwasawa()
    assert math.isclose(omega_norm(h.scaled(c)), c ** -1.5 * omega_norm(h), rel_tol=1e-12)


def test_omega_norm_needs_omega():
    with pytest.raises(ValueError):
        omega_norm(models.hopf4())


def test_dilatino_iwasawa():
    first, second = dilatino_residual(models.iwasawa())
    assert first < 1e-14 and second < 1e-14


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0, 3.0])
def test_dilatino_sl2c(t):
    first, second = dilatino_residual(models.sl2c(t))
    assert first < 1e-12 and second < 1e-12


def test_dilatino_hopf():
    first, second = dilatino_residual(hopf_with_volume())
    assert first > 0.1 and second > 0.1


@given(seeds)
def test_dilatino_components_vanish_together(seed):
    rng = rng_from(seed)
    h = with_volume(models.random_integrable_model(rng))
    first, second = dilatino_residual(h)
    assert (first < 1e-9) == (second < 1e-9)
