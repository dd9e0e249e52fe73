"""Exception types raised across the package."""


class ConfigurationError(ValueError):
    """Invalid simulation, array, grid or run configuration."""

    kind = "config"


class AbsorptionRangeError(ValueError):
    """Frequency requested outside the sampled absorption table."""

    kind = "range"


class AbsorptionFormatError(ValueError):
    """Malformed absorption CSV content."""

    kind = "format"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NonHermitianError(ValueError):
    """Covariance input that is not Hermitian within tolerance."""

    kind = "hermitian"


class DegenerateInputError(ValueError):
    """Input that makes an estimator undefined (e.g. an all-zero PSD)."""

    kind = "degenerate"
