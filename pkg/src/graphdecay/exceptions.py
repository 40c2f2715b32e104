"""Exception types raised by graphdecay."""


class InputError(ValueError):
    """Malformed or inconsistent input (labels, dimensions, probabilities)."""


class ResourceError(RuntimeError):
    """A dense computation would exceed the configured size limit."""


class UnsupportedQuantifierError(ValueError):
    """The requested entanglement quantifier cannot be evaluated on this boundary."""
