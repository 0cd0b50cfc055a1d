"""Exception types shared across the package."""


class BasisMismatchError(ValueError):
    """Vectors or operators defined over different mode bases were combined."""


class DegenerateInputError(ValueError):
    """Input has no usable content (zero vector, zero total weight)."""


class ContractViolation(ValueError):
    """A precondition of an operation was not met by the caller."""


class ConfigurationError(ValueError):
    """The interferometer configuration cannot support the request."""


class NoDetectionError(DegenerateInputError):
    """A measurement model assigns zero total weight to every outcome."""
