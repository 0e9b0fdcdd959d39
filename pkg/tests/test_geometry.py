import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperflux.errors import DegeneratePathError
from hyperflux.geometry import (Support, build_contour, build_gamma_komatsu, in_neighborhood, in_strip,
                                strip_index, supporting_function)
from hyperflux.quadrature import integrate_path

finite = st.floats(-5, 5, allow_nan=False)


def test_support_validation():
    with pytest.raises(ValueError):
        Support.compact(1.0, 0.0)
    with pytest.raises(ValueError):
        Support("nonsense")
    with pytest.raises(ValueError):
        Support.compact(0.0, math.inf)


def test_closure_of_open_halflines():
    assert Support.halfline_open_right(1.0).closure() == Support.right_ray(1.0)
    assert Support.halfline_open_left(-2.0).closure() == Support.left_ray(-2.0)


def test_support_json_round_trip():
    for K in (Support.empty(), Support.point(0.5), Support.compact(-1, 2), Support.right_ray(0.0),
              Support.left_ray(3.0), Support.plus_inf(), Support.minus_inf(), Support.pm_inf(),
              Support.full_line()):
        assert Support.from_json(K.to_json()) == K


@given(finite, st.floats(0, 3), finite)
def test_minkowski_and_translate(a, w, s):
    K = Support.compact(a, a + w)
    L = Support.compact(-1.0, 1.0)
    M = K.minkowski(L)
    assert M.a == pytest.approx(a - 1) and M.b == pytest.approx(a + w + 1)
    T = K.translate(s)
    assert T.a == pytest.approx(a + s) and T.b == pytest.approx(a + w + s)


@given(finite, st.floats(0, 3), st.floats(-4, 4))
def test_supporting_function_of_interval(a, w, y):
    K = Support.compact(a, a + w)
    assert supporting_function(K, y) == pytest.approx(max(a * y, (a + w) * y))


def test_neighborhood_and_strip():
    K = Support.compact(0.0, 1.0)
    assert in_neighborhood(0.5 + 0.4j, K, 0.5)
    assert not in_neighborhood(2.0 + 0j, K, 0.5)
    assert in_strip(10.0 + 0.5j, K, 1) and not in_strip(0.5 + 0.5j, K, 1)
    assert strip_index(0.5 + 0.3j, K) >= 4


@pytest.mark.parametrize("K", [Support.point(0.3), Support.compact(-1.0, 2.0)])
def test_compact_contour_is_clockwise(K):
    path = build_contour(K, 0.5)
    res = integrate_path(lambda w: 1.0 / (w - (K.a + K.b) / 2), path)
    assert abs(res.value - (-2j * math.pi)) < 1e-10
    z = path.sample(64)
    assert np.allclose(K.distance(z), 0.5, atol=1e-12)


@given(st.floats(0.1, 1.0), finite)
@settings(max_examples=25, deadline=None)
def test_compact_contour_winding_property(c, a):
    path = build_contour(Support.compact(a, a + 1.0), c)
    res = integrate_path(lambda w: 1.0 / (w - a - 0.5), path)
    assert abs(res.value + 2j * math.pi) < 1e-9


def test_unbounded_contour_needs_long_rays():
    with pytest.raises(DegeneratePathError):
        build_contour(Support.right_ray(0.0), 0.5, R_max=1.0)
    with pytest.raises(DegeneratePathError):
        build_contour(Support.empty(), 0.5)


@pytest.mark.parametrize("K", [Support.right_ray(0.0), Support.left_ray(0.0), Support.plus_inf(),
                               Support.minus_inf(), Support.pm_inf(), Support.full_line()])
def test_unbounded_contours_keep_clearance(K):
    path = build_contour(K, 0.25, R_max=20.0)
    assert path.rays
    z = path.sample(64)
    fin = np.isfinite(z)
    if K.kind in ("right_ray", "left_ray", "full_line"):
        assert np.all(K.distance(z[fin]) >= 0.25 - 1e-12)


def test_komatsu_path_validation():
    p = build_gamma_komatsu(0.0, -0.5, -0.7, 0.7, 10.0)
    assert len(p.rays) == 2
    with pytest.raises(DegeneratePathError):
        build_gamma_komatsu(0.0, 0.5, -0.7, 0.7, 10.0)
    with pytest.raises(DegeneratePathError):
        build_gamma_komatsu(0.0, -0.5, 0.2, 0.7, 10.0)
