"""Exception types shared across the package."""


class SdrkitError(Exception):
    """Base class for every error this package raises on bad input or data."""


class NonFiniteInput(SdrkitError):
    """An input array contains NaN or infinite entries."""


class SingularCovariance(SdrkitError):
    """Predictor covariance is numerically rank deficient."""


class DimensionMismatch(SdrkitError):
    """Operands live in different ambient dimensions."""


class EmptySelection(SdrkitError):
    """No observation pair satisfies the selection criterion."""


class DegeneratePair(SdrkitError):
    """Two predictor rows coincide, so the line through them is undefined."""


class TooFewSlices(SdrkitError):
    """Slice count is too small for the requested subspace dimension."""


class DegenerateConditioning(SdrkitError):
    """Too few Monte-Carlo pairs satisfy the conditioning event."""


class ParseError(SdrkitError):
    """Input data failed to parse; the message carries the location."""


class NonNumericCell(ParseError):
    """A CSV cell expected to be numeric is not."""
