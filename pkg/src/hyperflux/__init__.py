"""Numerical hyperfunctions: defining functions, contour transforms and operational calculus."""

from .errors import (AccuracyError, DivergenceError, DomainError, HyperfluxError, NearSingularError,
                     NotDecomposableError, UnsupportedSupportError)
from .geometry import Support, build_contour, build_gamma_komatsu
from .hyperfn import (Hyperfunction, TestFunction, ValueSpace, boundary_jump, cauchy_embed, dirac, gaussian,
                      heaviside, opaque, pair, shift, standard_representative, zero)
from .opcalc import (EntireSymbol, apply_P_deriv, convolve_contour, convolve_transform, multiply_entire,
                     transform_product)
from .quadrature import GrowthCertificate, QuadConfig, integrate_path
from .transforms import (GermSpaceTag, TransformFunction, decompose_at, fourier_compact, fourier_fullline,
                         fourier_halfline, germ_equivalent_heuristic, inverse_fourier_compact, laplace,
                         range_membership)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "DivergenceError",
    "DomainError",
    "EntireSymbol",
    "GermSpaceTag",
    "GrowthCertificate",
    "HyperfluxError",
    "Hyperfunction",
    "NearSingularError",
    "NotDecomposableError",
    "QuadConfig",
    "Support",
    "TestFunction",
    "TransformFunction",
    "UnsupportedSupportError",
    "ValueSpace",
    "apply_P_deriv",
    "boundary_jump",
    "build_contour",
    "build_gamma_komatsu",
    "cauchy_embed",
    "convolve_contour",
    "convolve_transform",
    "decompose_at",
    "dirac",
    "fourier_compact",
    "fourier_fullline",
    "fourier_halfline",
    "gaussian",
    "germ_equivalent_heuristic",
    "heaviside",
    "integrate_path",
    "inverse_fourier_compact",
    "laplace",
    "multiply_entire",
    "opaque",
    "pair",
    "range_membership",
    "shift",
    "standard_representative",
    "transform_product",
    "zero",
]
