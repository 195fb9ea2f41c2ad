"""Exception types shared by the package (the CLI maps them to exit codes)."""


class ModelError(ValueError):
    """A model violates its contract (non-Hermitian jump, bad dimensions, ...)."""


class NotQuasiperiodicError(ModelError):
    """The model is not declared quasiperiodic, so the classification theorems do not apply."""


class NumericalInconsistency(RuntimeError):
    """Two computations that must agree did not (route mismatch, failed inclusion, ...)."""
