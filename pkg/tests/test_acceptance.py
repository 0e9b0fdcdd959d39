"""End-to-end acceptance criteria with their tolerances and runtime budgets."""

import time

import numpy as np
import pytest

from hyperflux import (GrowthCertificate, cauchy_embed, convolve_contour, dirac, fourier_compact,
                       fourier_halfline, gaussian, heaviside, inverse_fourier_compact, laplace, multiply_entire,
                       pair, range_membership, shift, apply_P_deriv)
from hyperflux.compare import (SectorGrid, consistency_chain, consistency_I0, komatsu_laplace, langenbruch_laplace,
                               to_type_minus_infinity)
from hyperflux.opcalc import transform_multiplier, transform_P_i_deriv
from hyperflux.suites import random_corpus


def _one(t):
    return np.ones_like(np.asarray(t, dtype=float))


class _Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f} s, budget {self.seconds} s"


def _disk(rng, n, radius):
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))


@pytest.mark.acceptance(1, "Fourier transform of the Dirac mass is 1 (<= 1e-8)")
def test_dirac_transform_is_one():
    rng = np.random.default_rng(1)
    with _Budget(5):
        d0 = dirac(0.0)
        z = _disk(rng, 200, 20.0)
        v, _ = fourier_compact(d0).evaluate(z)
        assert np.max(np.abs(v - 1)) <= 1e-8
        lower = z.real - 1j * np.abs(z.imag) - 0.05j
        lower = lower[np.abs(lower) <= 20]
        v, _ = fourier_halfline(d0, "right").evaluate(lower)
        assert np.max(np.abs(v - 1)) <= 1e-8
        v, _ = fourier_halfline(d0, "left").evaluate(np.conj(lower))
        assert np.max(np.abs(v - 1)) <= 1e-8


@pytest.mark.acceptance(2, "shift law for Fourier and Laplace transforms (<= 1e-6 + error)")
def test_shift_law():
    rng = np.random.default_rng(2)
    with _Budget(30):
        zeta = rng.uniform(-8, 8, 50) + 1j * rng.uniform(-3, 3, 50)
        for h in random_corpus(rng):
            s = float(rng.uniform(-2, 2))
            hs = shift(h, s)
            for transform, factor in ((fourier_compact, np.exp(-1j * s * zeta)), (laplace, np.exp(-s * zeta))):
                v, e = transform(h).evaluate(zeta)
                vs, es = transform(hs).evaluate(zeta)
                bound = 1e-6 + es + np.abs(factor) * e
                assert np.all(np.abs(vs - factor * v) <= bound), h.name


@pytest.mark.acceptance(3, "derivative/multiplier duality up to degree 4 (<= 1e-5)")
def test_derivative_multiplier_duality():
    rng = np.random.default_rng(3)
    with _Budget(60):
        zeta = rng.uniform(-5, 5, 50) + 1j * rng.uniform(-2, 2, 50)
        hs = [dirac(0.3, 1 - 0.5j), dirac(-0.7), cauchy_embed(_one, 0.0, 1.0),
              cauchy_embed(lambda t: np.exp(-t) * np.cos(3 * t), -1.0, 0.5),
              cauchy_embed(lambda t: t * t, -0.5, 0.8, np.array([1.0, 2.0j]))]
        for h in hs:
            F = fourier_compact(h)
            for deg in range(5):
                P = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
                lhs, _ = fourier_compact(apply_P_deriv(h, P)).evaluate(zeta)
                rhs, _ = transform_multiplier(F, P).evaluate(zeta)
                assert np.max(np.abs(lhs - rhs)) <= 1e-5, (h.name, deg)
                lhs, _ = fourier_compact(multiply_entire(h, P)).evaluate(zeta)
                rhs, _ = transform_P_i_deriv(F, P).evaluate(zeta)
                assert np.max(np.abs(lhs - rhs)) <= 1e-5, (h.name, deg)


@pytest.mark.acceptance(4, "convolution of point masses, boxes and matrix weights")
def test_convolution():
    rng = np.random.default_rng(4)
    with _Budget(60):
        zeta = rng.uniform(-6, 6, 30) + 1j * rng.uniform(-2, 2, 30)
        a, b = 0.4, -0.9
        v, _ = fourier_compact(convolve_contour(dirac(a), dirac(b))).evaluate(zeta)
        assert np.max(np.abs(v - np.exp(-1j * (a + b) * zeta))) <= 1e-7
        box = cauchy_embed(_one, 0.0, 1.0)
        v, _ = fourier_compact(convolve_contour(box, box)).evaluate(zeta)
        exact = ((1 - np.exp(-1j * zeta)) / (1j * zeta)) ** 2
        assert np.max(np.abs(v - exact)) <= 1e-5
        for _ in range(5):
            A, B = rng.normal(size=(2, 2)), rng.normal(size=(2, 2))
            v, _ = fourier_compact(convolve_contour(dirac(0.0, A), dirac(0.0, B))).evaluate(zeta[:5])
            assert np.max(np.abs(v - A @ B)) <= 1e-7


@pytest.mark.acceptance(5, "inverse Fourier round trip on a 12-Gaussian battery (<= 1e-4)")
def test_inverse_round_trip():
    with _Budget(600):
        hs = [dirac(0.0), dirac(0.5, 2 - 1j), apply_P_deriv(dirac(-0.3), [0, 1]),
              cauchy_embed(_one, 0.0, 1.0), cauchy_embed(np.cos, -1.0, 1.0),
              cauchy_embed(lambda t: np.exp(-t), 0.0, 2.0), cauchy_embed(lambda t: t, -0.5, 0.5),
              dirac(-1.0) + dirac(1.0), cauchy_embed(lambda t: t * t, 0.2, 0.6, np.array([1.0, -1.0j])),
              convolve_contour(dirac(0.25), cauchy_embed(_one, 0.0, 0.5))]
        battery = [gaussian(mu, s, poly) for mu in (-0.5, 0.0, 0.7) for s in (0.5, 2.0)
                   for poly in ((1.0,), (0.5, 1.0j))]
        assert len(battery) == 12
        for h in hs:
            back = inverse_fourier_compact(fourier_compact(h))
            for phi in battery:
                assert np.max(np.abs(pair(back, phi) - pair(h, phi))) <= 1e-4, (h.name, phi.name)


@pytest.mark.acceptance(6, "growth certificates of Fourier and Langenbruch outputs")
def test_growth_certificates():
    with _Budget(60):
        for h in (dirac(0.3), cauchy_embed(_one, -0.5, 1.0), cauchy_embed(np.cos, 0.0, 2.0, np.array([1, 1j]))):
            F = fourier_compact(h)
            assert F.tag.kind == "FO_compact"
            for rep in range_membership(F, F.tag, 4, 40.0):
                assert rep.verdict == "consistent" and rep.growth_slope <= 1e-3, rep.to_json()
        for h in (dirac(0.0), cauchy_embed(_one, 0.0, 1.0)):
            L = langenbruch_laplace(to_type_minus_infinity(h))
            assert L.tag.kind == "LG_zero_inf"
            for rep in range_membership(L, L.tag, 3, 40.0):
                assert rep.verdict == "consistent", rep.to_json()


@pytest.mark.acceptance(7, "three-transform agreement and germ equivalence with the Langenbruch route")
def test_three_transform_agreement():
    densities = [(_one, 1.0), (lambda t: np.exp(-t), 3.0), (lambda t: np.asarray(t, dtype=float), 2.0)]
    with _Budget(300):
        for f, T in densities:
            rep = consistency_chain(f, T)
            assert rep["flagged_nodes"] == 0
            assert rep["max_pairwise_dev"] <= 1e-6
            assert all(0.5 <= n["node"][0] <= 20 for n in rep["nodes"])
            rep = consistency_I0(cauchy_embed(f, 0.0, T), k_max=3, tol=1e-6)
            assert rep["germ_verdict"] == "equivalent", rep["germ_reports"]


class _EntireDecreasing:
    growth = GrowthCertificate.type_minus_infinity(8)

    def __init__(self, f):
        self.f = f

    def __call__(self, z):
        return self.f(z)


@pytest.mark.acceptance(8, "kernel annihilation for entire inputs (<= 1e-7)")
def test_kernel_annihilation():
    grid = SectorGrid(4.0, np.pi / 4)
    with _Budget(60):
        for F, growth in ((lambda z: np.ones_like(z), GrowthCertificate.bounded()),
                          (lambda z: np.exp(0.3 * z), GrowthCertificate.exponential_type(0.3)),
                          (lambda z: np.cos(0.5 * z), GrowthCertificate.exponential_type(0.5))):
            s = komatsu_laplace(F, 0.0, grid.nodes, growth=growth)
            assert not s.flagged.any()
            assert np.max(np.abs(s.values)) <= 1e-7
        for f in (lambda w: np.exp(-w * w), lambda w: w * np.exp(-w * w),
                  lambda w: np.exp(-(w - 1) ** 2) * np.cos(w)):
            v, _ = langenbruch_laplace(_EntireDecreasing(f)).evaluate(grid.nodes)
            assert np.max(np.abs(v)) <= 1e-7


def _corpus():
    rng = np.random.default_rng(9)
    box = cauchy_embed(_one, 0.0, 1.0, name="box")
    return random_corpus(rng) + [
        box, cauchy_embed(lambda t: t * t, -1.0, 2.0, np.array([1.0, 2.0j]), name="vector"),
        convolve_contour(box, box), convolve_contour(dirac(0.2), box),
        apply_P_deriv(dirac(0.1), [0.0, 1.0, 2.0]), multiply_entire(cauchy_embed(np.cos, 0.0, 1.0), [1.0, 0.0, 1.0])]


@pytest.mark.acceptance(9, "transforms independent of the contour clearance")
def test_contour_independence():
    rng = np.random.default_rng(10)
    zeta = rng.uniform(-4, 4, 30) + 1j * rng.uniform(-2, 2, 30)
    lower = rng.uniform(-4, 4, 20) - 1j * rng.uniform(0.3, 2, 20)

    def agree(make, z, c):
        v1, e1 = make(c).evaluate(z)
        v2, e2 = make(c / 2).evaluate(z)
        d = np.abs(v1 - v2).reshape(z.size, -1).max(axis=1)
        assert np.all(d <= e1 + e2 + 1e-14)

    with _Budget(300):
        for h in _corpus():
            c = max(0.5, 2.1 * h.min_clearance)
            agree(lambda cl: fourier_compact(h, clearance=cl), zeta, c)
            agree(lambda cl: laplace(h, clearance=cl), zeta, c)
        for h in (heaviside(0.0), heaviside(-1.0), dirac(0.5)):
            agree(lambda cl: fourier_halfline(h, "right", clearance=cl), lower, 0.5)
        for h in (dirac(0.0), cauchy_embed(_one, 0.0, 1.0)):
            rep = to_type_minus_infinity(h)
            agree(lambda cl: langenbruch_laplace(rep, clearance=cl), np.linspace(0.5, 10, 8) + 0.5j, 0.5)
