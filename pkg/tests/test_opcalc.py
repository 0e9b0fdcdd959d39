import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperflux import (EntireSymbol, Support, apply_P_deriv, cauchy_embed, convolve_contour, convolve_transform,
                       dirac, fourier_compact, gaussian, laplace, multiply_entire, opaque, pair, transform_product)
from hyperflux.errors import NearSingularError, TruncationError, UnsupportedSupportError
from hyperflux.hyperfn import heaviside
from hyperflux.opcalc import taylor_coefficients, transform_multiplier, transform_P_i_deriv

ZETA = np.array([0.3 + 0.2j, -2.0 + 0.5j, 4.0 - 1j])
coeff = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def _one(t):
    return np.ones_like(np.asarray(t, dtype=float))


def test_symbol_from_polynomial():
    P = EntireSymbol.from_polynomial([1.0, 2.0, 3.0])
    assert P.coeffs == (1, 2, 6)
    assert P(2.0) == pytest.approx(1 + 4 + 12)
    assert P.derivative(1)(0.0) == pytest.approx(2.0)
    assert P.substituted(1j)(1.0) == pytest.approx(P(1j))
    assert P.passes_type_zero_check() and P.truncation_tail(0.25) == 0.0


def test_exponential_symbol_tail_and_truncation_error():
    exp_sym = EntireSymbol.from_taylor([1 / math.factorial(k) for k in range(6)])
    assert not exp_sym.polynomial
    with pytest.raises(TruncationError):
        apply_P_deriv(dirac(0.0), exp_sym, tol=1e-12)


def test_taylor_coefficients_of_exponential():
    a = taylor_coefficients(np.exp, np.array([0.5]), 0.5, 5)
    expect = [math.exp(0.5) / math.factorial(k) for k in range(6)]
    assert np.allclose(a[:, 0], expect, atol=1e-13)


@given(st.lists(coeff, min_size=1, max_size=5))
@settings(max_examples=20, deadline=None)
def test_derivative_becomes_multiplier(P):
    h = cauchy_embed(np.cos, -0.5, 0.5)
    lhs = fourier_compact(apply_P_deriv(h, P))(ZETA)
    rhs = transform_multiplier(fourier_compact(h), P)(ZETA)
    assert np.max(np.abs(lhs - rhs)) <= 1e-8 * max(1.0, np.max(np.abs(rhs)))


@given(st.lists(coeff, min_size=1, max_size=5))
@settings(max_examples=20, deadline=None)
def test_multiplier_becomes_derivative(P):
    h = dirac(0.4, 1.0 - 1j)
    lhs = fourier_compact(multiply_entire(h, P))(ZETA)
    rhs = transform_P_i_deriv(fourier_compact(h), P)(ZETA)
    assert np.max(np.abs(lhs - rhs)) <= 1e-8 * max(1.0, np.max(np.abs(rhs)))


def test_derivative_of_dirac_pairs_with_derivative():
    # <delta', phi> = -phi'(0); P(-i d) with P(x) = i x gives d/dz
    h = apply_P_deriv(dirac(0.0), [0.0, 1j])
    phi = gaussian(0.5, 1.0)
    assert abs(pair(h, phi) - (-(-2 * (0 - 0.5)) * math.exp(-0.25))) < 1e-10


def test_laplace_side_derivative():
    h = cauchy_embed(lambda t: t * t, 0.0, 1.0)
    s = np.array([1.0 + 1j, 3.0])
    lhs = laplace(apply_P_deriv(h, [1.0, 2.0], side="laplace"))(s)
    assert np.allclose(lhs, (1 + 2 * s) * laplace(h)(s), atol=1e-9)


def test_opaque_derivative():
    h = opaque(dirac(0.0).F, Support.point(0.0), name="op")
    lhs = fourier_compact(apply_P_deriv(h, [0.0, 0.0, 1.0]))(ZETA)
    assert np.allclose(lhs, ZETA ** 2, atol=1e-8)


def test_structural_point_mass_convolution():
    c = convolve_contour(dirac(0.3, 2.0), dirac(-1.0))
    assert c.atoms is not None
    assert np.allclose(fourier_compact(c)(ZETA), 2 * np.exp(1j * 0.7 * ZETA), atol=1e-12)


def test_opaque_convolution_support_and_value():
    box = cauchy_embed(_one, 0.0, 1.0)
    c = convolve_contour(dirac(0.5), box)
    assert c.support == Support.compact(0.5, 1.5)
    # box * box is the triangle 1 - |w - 1| on [0, 2]
    t = convolve_contour(box, box)
    exact = 2 * 0.746824132812427025399467436132 - (1 - math.exp(-1))
    assert abs(pair(t, gaussian(1.0, 1.0)) - exact) < 1e-9
    with pytest.raises(NearSingularError):
        c.F(np.array([1.0 + 0j]))


def test_convolution_needs_compact_first_factor():
    with pytest.raises(UnsupportedSupportError):
        convolve_contour(heaviside(0.0), dirac(0.0))


def test_transform_side_convolution_matches_contour_side():
    box = cauchy_embed(_one, 0.0, 0.5)
    a = convolve_transform(box, dirac(0.25))
    b = convolve_contour(box, dirac(0.25))
    phi = gaussian(0.5, 2.0)
    assert abs(pair(a, phi) - pair(b, phi)) < 1e-6


def test_transform_product_tag_adds_supports():
    g = transform_product(fourier_compact(dirac(0.0)), fourier_compact(cauchy_embed(_one, 1.0, 2.0)))
    assert (g.tag.a, g.tag.b) == (1.0, 2.0)
