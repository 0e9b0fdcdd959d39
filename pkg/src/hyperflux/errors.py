"""Exception hierarchy shared by all hyperflux modules."""


class HyperfluxError(Exception):
    """Base class for library errors."""


class UnsupportedSupportError(HyperfluxError):
    """The operation is not defined for the given support kind."""


class DegeneratePathError(HyperfluxError):
    """A contour cannot be built with the requested parameters."""


class EvaluationError(HyperfluxError):
    """An integrand produced a non-finite value.

    Attributes
    ----------
    node : complex
        The quadrature node where evaluation failed.
    """

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class AccuracyError(HyperfluxError):
    """Adaptive refinement hit its depth limit.

    Attributes
    ----------
    result : IntegralResult
        Best available value with its error estimate.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class NearSingularError(HyperfluxError):
    """A defining function was evaluated too close to its support."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class DomainError(HyperfluxError):
    """A transform was evaluated outside its declared domain."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class DivergenceError(DomainError):
    """An integral over an unbounded path does not converge.

    Attributes
    ----------
    location : complex or None
        Transform variable for which the exponent is non-negative.
    """

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class ValueSpaceError(HyperfluxError):
    """Incompatible value spaces."""


class NotDecomposableError(HyperfluxError):
    """A hyperfunction without structural metadata cannot be split."""


class TruncationError(HyperfluxError):
    """A series truncation exceeds the requested tolerance."""


class DivergingJumpError(HyperfluxError):
    """Boundary-jump extrapolation did not converge."""

    def __init__(self, message, samples=None):
        super().__init__(message)
        self.samples = samples


class PreconditionError(HyperfluxError):
    """An input does not satisfy the documented precondition."""
