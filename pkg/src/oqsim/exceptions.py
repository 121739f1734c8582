"""Exception types shared across the toolbox."""

__all__ = [
    "OqsimError",
    "DimensionMismatchError",
    "SingularMatrixError",
    "ConvergenceError",
    "NotHermitianError",
    "RangeError",
    "StepLimitError",
    "StiffnessError",
    "MethodError",
    "UnsupportedError",
    "ModelError",
    "SolverError",
]


class OqsimError(Exception):
    """Base class for all toolbox errors."""


class DimensionMismatchError(OqsimError, ValueError):
    """Operands have incompatible shapes or subsystem dimensions."""


class SingularMatrixError(OqsimError):
    """A linear solve hit a numerically singular matrix."""


class ConvergenceError(OqsimError):
    """An iterative method failed to reach its tolerance."""


class NotHermitianError(OqsimError, ValueError):
    """An operation requiring a Hermitian input received a non-Hermitian one."""


class RangeError(OqsimError, ValueError):
    """A value lies outside its permitted domain (spline knot range, occupation tuple, ...)."""


class StepLimitError(OqsimError):
    """The ODE integrator exhausted its step budget between two output times."""


class StiffnessError(OqsimError):
    """The ODE integrator's step size underflowed; the problem is likely stiff."""


class MethodError(OqsimError):
    """The requested numerical method cannot be applied to this problem."""


class UnsupportedError(OqsimError):
    """The operation is not defined for this kind of object (e.g. ENR dims)."""


class ModelError(OqsimError, ValueError):
    """A batch model file failed validation; the message names the offending path."""


class SolverError(OqsimError):
    """A solver failed at run time (as opposed to model validation time)."""
