"""Scalar coefficients for time-dependent operators.

Three base variants: a constant, a Python callable of time (and optional
``args`` mapping), and a natural cubic spline through sampled data.  Algebraic
combinators (sum, product, conjugate, squared modulus, scale) keep coefficient
arithmetic closed, which is what lets :class:`~oqsim.qobjevo.QobjEvo` compose
pointwise in time.
"""

from __future__ import annotations

import inspect
import numbers

import numpy as np
from scipy.interpolate import CubicSpline

from .exceptions import RangeError

__all__ = [
    "Coefficient",
    "ConstantCoefficient",
    "FunctionCoefficient",
    "SplineCoefficient",
    "coefficient",
    "coeff_eval",
]


class Coefficient:
    """Base class: a complex-valued function of time."""

    def __call__(self, t: float, args: dict | None = None) -> complex:
        raise NotImplementedError

    @property
    def is_constant(self) -> bool:
        return False

    def conj(self) -> "Coefficient":
        return _Conj(self)

    def abs2(self) -> "Coefficient":
        """The squared modulus |c(t)|^2 (real-valued)."""
        return _Abs2(self)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return _Scaled(self, complex(other))
        if isinstance(other, Coefficient):
            return _Product(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, numbers.Number):
            other = ConstantCoefficient(other)
        if isinstance(other, Coefficient):
            return _Sum(self, other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return _Scaled(self, -1.0)


class ConstantCoefficient(Coefficient):
    def __init__(self, value: complex):
        self.value = complex(value)

    def __call__(self, t, args=None):
        return self.value

    @property
    def is_constant(self):
        return True

    def conj(self):
        return ConstantCoefficient(self.value.conjugate())

    def abs2(self):
        return ConstantCoefficient(abs(self.value) ** 2)


class FunctionCoefficient(Coefficient):
    """Wraps ``f(t)`` or ``f(t, args)``; the arity is detected once."""

    def __init__(self, fn):
        if not callable(fn):
            raise TypeError(f"expected a callable, got {type(fn)}")
        self.fn = fn
        try:
            params = inspect.signature(fn).parameters
            self._wants_args = len(params) >= 2
        except (TypeError, ValueError):
            self._wants_args = False

    def __call__(self, t, args=None):
        if self._wants_args:
            return complex(self.fn(t, args or {}))
        return complex(self.fn(t))


class SplineCoefficient(Coefficient):
    """Natural cubic spline through ``(times, values)`` samples.

    Evaluation at a knot reproduces the stored value; evaluation outside the
    knot range raises :class:`RangeError` instead of extrapolating.
    """

    def __init__(self, times, values):
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=np.complex128)
        if times.ndim != 1 or times.size < 2:
            raise ValueError("spline needs at least two knot times")
        if values.shape != times.shape:
            raise ValueError("times and values must have equal length")
        if np.any(np.diff(times) <= 0):
            raise ValueError("knot times must be strictly increasing")
        self.times = times
        self.values = values
        self._spline = CubicSpline(times, values, bc_type="natural")

    def __call__(self, t, args=None):
        if t < self.times[0] or t > self.times[-1]:
            raise RangeError(
                f"spline evaluated at t={t}, outside [{self.times[0]}, {self.times[-1]}]"
            )
        return complex(self._spline(t))


class _Sum(Coefficient):
    def __init__(self, a, b):
        self.a, self.b = a, b

    def __call__(self, t, args=None):
        return self.a(t, args) + self.b(t, args)


class _Product(Coefficient):
    def __init__(self, a, b):
        self.a, self.b = a, b

    def __call__(self, t, args=None):
        return self.a(t, args) * self.b(t, args)


class _Scaled(Coefficient):
    def __init__(self, base, scale):
        self.base, self.scale = base, scale

    def __call__(self, t, args=None):
        return self.scale * self.base(t, args)


class _Conj(Coefficient):
    def __init__(self, base):
        self.base = base

    def __call__(self, t, args=None):
        return self.base(t, args).conjugate()


class _Abs2(Coefficient):
    def __init__(self, base):
        self.base = base

    def __call__(self, t, args=None):
        return abs(self.base(t, args)) ** 2


def coefficient(spec) -> Coefficient:
    """Coerce a number, callable, (times, values) pair or Coefficient."""
    if isinstance(spec, Coefficient):
        return spec
    if isinstance(spec, numbers.Number):
        return ConstantCoefficient(spec)
    if callable(spec):
        return FunctionCoefficient(spec)
    if isinstance(spec, tuple) and len(spec) == 2:
        return SplineCoefficient(*spec)
    raise TypeError(f"cannot interpret {type(spec)} as a coefficient")


def coeff_eval(c: Coefficient, t: float, args: dict | None = None) -> complex:
    """Functional evaluation entry point."""
    return coefficient(c)(t, args)
