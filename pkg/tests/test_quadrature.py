import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperflux.errors import DivergenceError
from hyperflux.geometry import ContourPath, Line, Ray, Support, build_contour
from hyperflux.quadrature import (GrowthCertificate, QuadConfig, choose_truncation, gauss_legendre_panels,
                                  integrate_path, ray_truncation)


def test_config_validation_and_env(monkeypatch):
    with pytest.raises(ValueError):
        QuadConfig(abs_tol=0.0)
    monkeypatch.setenv("HYPERFLUX_QUAD_TOL", "1e-6")
    assert QuadConfig.from_env().abs_tol == 1e-6
    assert QuadConfig().scaled(0.5).rel_tol == pytest.approx(0.5e-9)


def test_growth_rates():
    assert GrowthCertificate.bounded().rate == 0.0
    assert GrowthCertificate.slowly_increasing(4).rate == 0.25
    assert GrowthCertificate.type_minus_infinity(3).rate == -3.0
    assert GrowthCertificate.exponential_type(0.7).rate == 0.7
    with pytest.raises(ValueError):
        GrowthCertificate("wild")
    with pytest.raises(ValueError):
        GrowthCertificate.bounded(C=-1.0)


def test_truncation_bound_and_divergence():
    R, tail = choose_truncation(GrowthCertificate.bounded(2.0), -0.5, 1e-10)
    assert tail <= 1e-10 * (1 + 1e-12)
    assert 2.0 * math.exp(-0.5 * R) / 0.5 == pytest.approx(tail)
    with pytest.raises(DivergenceError):
        choose_truncation(GrowthCertificate.slowly_increasing(2), -0.25, 1e-10)


@given(st.integers(0, 12), st.floats(-2, 2), st.floats(0.1, 3))
@settings(max_examples=40, deadline=None)
def test_segment_integral_of_polynomials_is_exact(k, a, L):
    path = ContourPath((Line(complex(a, 0), complex(a + L, 0.5)),), orientation="open")
    res = integrate_path(lambda w: w ** k, path)
    p, q = complex(a, 0), complex(a + L, 0.5)
    exact = (q ** (k + 1) - p ** (k + 1)) / (k + 1)
    assert abs(res.value - exact) <= 1e-10 * max(1.0, abs(exact))


def test_residue_oracle_on_circle():
    # clockwise contour: int exp(w)/w dw = -2 pi i
    res = integrate_path(lambda w: np.exp(w) / w, build_contour(Support.point(0.0), 1.0))
    assert abs(res.value + 2j * math.pi) < 1e-11
    assert res.error < 1e-8


def test_error_estimate_bounds_true_error():
    # near-singular integrand; the reported error must cover the actual one
    path = build_contour(Support.compact(0.0, 1.0), 0.05)
    res = integrate_path(lambda w: 1.0 / (w - 0.5) ** 2, path, QuadConfig(abs_tol=1e-8, rel_tol=1e-8))
    assert abs(res.value) <= max(res.error, 1e-12) * 10


def test_ray_tail_bound():
    ray = Ray(0j, 1.0 + 0j, 1.0)
    short, tail = ray_truncation(lambda z: np.abs(np.exp(-z)), ray, -1.0, 1e-12)
    res = integrate_path(lambda w: np.exp(-w), ContourPath((short,), orientation="open"), tail_bound=tail)
    assert abs(res.value - 1.0) <= res.error + 1e-14
    with pytest.raises(DivergenceError):
        ray_truncation(lambda z: np.ones(z.shape), ray, 0.0, 1e-12)


def test_vector_valued_integrand():
    path = build_contour(Support.point(0.0), 0.5)
    res = integrate_path(lambda w: np.stack([1 / w, 1 / w ** 2, np.ones_like(w)], axis=-1), path)
    assert np.allclose(res.value, [-2j * math.pi, 0, 0], atol=1e-11)


def test_gauss_legendre_panels_respects_breakpoints():
    x, w = gauss_legendre_panels(0.0, 2.0, 4, 10, breakpoints=(0.7,))
    assert w.sum() == pytest.approx(2.0)
    f = np.where(x < 0.7, x, x ** 2)
    assert (w * f).sum() == pytest.approx(0.7 ** 2 / 2 + (8 - 0.7 ** 3) / 3, rel=1e-13)
