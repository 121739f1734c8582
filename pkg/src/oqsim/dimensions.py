"""Subsystem dimension bookkeeping for quantum objects.

Dimensions track the tensor-product structure of the space an object acts on.
Each side (ket = rows, bra = columns) is either a flat list of subsystem sizes,
e.g. ``[2, 2]``, or -- for superoperator-like objects -- a nested pair
``[ket_dims, bra_dims]`` describing the operator space being acted on.

Objects living on an excitation-number-restricted space carry the
:class:`~oqsim.enr.EnrSpace` in the ``enr`` slot; their flat size is the
enumeration length rather than the product of subsystem dimensions.
"""

from __future__ import annotations

import math

from .exceptions import DimensionMismatchError

__all__ = ["Dimensions", "infer_kind", "KINDS"]

KINDS = ("ket", "bra", "oper", "super", "operator_ket", "operator_bra")


def _is_nested(side) -> bool:
    return any(isinstance(x, (list, tuple)) for x in side)


def _side_size(side) -> int:
    if _is_nested(side):
        return _side_size(side[0]) * _side_size(side[1])
    return math.prod(side)


def _as_list(side):
    if isinstance(side, (list, tuple)):
        return [_as_list(x) for x in side]
    return int(side)


class Dimensions:
    """Ket/bra subsystem dimensions plus an optional ENR marker."""

    __slots__ = ("ket", "bra", "enr")

    def __init__(self, ket, bra, enr=None):
        self.ket = _as_list(ket)
        self.bra = _as_list(bra)
        self.enr = enr

    @classmethod
    def square(cls, dims, enr=None) -> "Dimensions":
        return cls(dims, dims, enr=enr)

    @classmethod
    def from_shape(cls, shape) -> "Dimensions":
        return cls([shape[0]], [shape[1]])

    @property
    def shape(self):
        # ENR objects store the enumeration length as a single flat dimension,
        # so the product rule applies to them as well.
        return (_side_size(self.ket), _side_size(self.bra))

    @property
    def ket_nested(self) -> bool:
        return _is_nested(self.ket)

    @property
    def bra_nested(self) -> bool:
        return _is_nested(self.bra)

    def check_shape(self, shape) -> None:
        if self.shape != tuple(shape):
            raise DimensionMismatchError(
                f"dims {self.as_list()} imply shape {self.shape}, data has {tuple(shape)}"
            )

    def transposed(self) -> "Dimensions":
        return Dimensions(self.bra, self.ket, enr=self.enr)

    def as_list(self):
        return [self.ket, self.bra]

    def __eq__(self, other):
        if not isinstance(other, Dimensions):
            return NotImplemented
        return self.ket == other.ket and self.bra == other.bra and self.enr == other.enr

    def __hash__(self):
        return hash((repr(self.ket), repr(self.bra), self.enr))

    def __repr__(self):
        return f"Dimensions({self.as_list()!r})" + ("" if self.enr is None else " [ENR]")


def infer_kind(shape, dims: Dimensions) -> str:
    """Deterministic kind inference from shape and dimension structure.

    A 1x1 object is classified as an operator (scalar).
    """
    ket_nested, bra_nested = dims.ket_nested, dims.bra_nested
    if ket_nested and bra_nested:
        return "super"
    if ket_nested:
        return "operator_ket"
    if bra_nested:
        return "operator_bra"
    nrows, ncols = shape
    if nrows == 1 and ncols == 1:
        return "oper"
    if ncols == 1 and all(d == 1 for d in dims.bra):
        return "ket"
    if nrows == 1 and all(d == 1 for d in dims.ket):
        return "bra"
    return "oper"
