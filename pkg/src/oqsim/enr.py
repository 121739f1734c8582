"""Excitation-number-restricted composite spaces.

A composite space with subsystem dimensions ``dims`` is restricted to the
occupation tuples ``(n_1, ..., n_m)`` with ``sum n_i <= n_exc`` and
``n_i < dims[i]``, enumerated in graded lexicographic order.  Operators built
here carry an ENR marker in their dimensions; ``tensor`` and ``ptrace`` reject
such objects (the compressed enumeration does not factor), and annihilation
operators of different subsystems in general no longer commute on the
restricted space.
"""

from __future__ import annotations

import numpy as np

from . import data as _d
from .dimensions import Dimensions
from .exceptions import RangeError
from .qobj import Qobj
from .settings import default_dtype

__all__ = ["EnrSpace", "enr_space", "enr_destroy", "enr_fock", "enr_identity"]


class EnrSpace:
    """Ordered enumeration of restricted occupation tuples."""

    def __init__(self, dims, n_exc: int):
        dims = [int(d) for d in dims]
        if not dims or any(d < 1 for d in dims):
            raise RangeError("subsystem dimensions must be positive")
        if n_exc < 0:
            raise RangeError("n_exc must be non-negative")
        self.dims = dims
        self.n_exc = int(n_exc)
        states = []
        for total in range(n_exc + 1):
            states.extend(sorted(_bounded_compositions(total, dims)))
        self.states = states
        self._index = {s: i for i, s in enumerate(states)}

    @property
    def size(self) -> int:
        return len(self.states)

    def __eq__(self, other):
        if not isinstance(other, EnrSpace):
            return NotImplemented
        return self.dims == other.dims and self.n_exc == other.n_exc

    def __hash__(self):
        return hash((tuple(self.dims), self.n_exc))

    def index(self, occupations) -> int:
        key = tuple(int(n) for n in occupations)
        if key not in self._index:
            raise RangeError(
                f"occupation tuple {key} is outside the restricted space"
                f" (dims={self.dims}, n_exc={self.n_exc})"
            )
        return self._index[key]

    def __contains__(self, occupations) -> bool:
        return tuple(int(n) for n in occupations) in self._index

    def __repr__(self):
        return f"EnrSpace(dims={self.dims}, n_exc={self.n_exc}, size={self.size})"


def _bounded_compositions(total, dims):
    """Occupation tuples with the given total, honoring per-subsystem bounds."""
    if len(dims) == 1:
        return [(total,)] if total < dims[0] else []
    out = []
    for first in range(min(total, dims[0] - 1) + 1):
        for rest in _bounded_compositions(total - first, dims[1:]):
            out.append((first,) + rest)
    return out


def enr_space(dims, n_exc: int) -> EnrSpace:
    """Enumerate the restricted space in graded lexicographic order."""
    return EnrSpace(dims, n_exc)


def _enr_dims(space: EnrSpace, kind: str) -> Dimensions:
    n = space.size
    if kind == "oper":
        return Dimensions([n], [n], enr=space)
    return Dimensions([n], [1], enr=space)


def enr_destroy(dims, n_exc: int, dtype: str | None = None):
    """Annihilation operators of each subsystem on the restricted space.

    Operator ``i`` maps ``|..., n_i, ...> -> sqrt(n_i) |..., n_i - 1, ...>``.
    """
    space = enr_space(dims, n_exc)
    fmt = dtype or default_dtype("oper")
    ops = []
    for i in range(len(space.dims)):
        arr = np.zeros((space.size, space.size), dtype=np.complex128)
        for src, occ in enumerate(space.states):
            if occ[i] > 0:
                target = list(occ)
                target[i] -= 1
                arr[space.index(target), src] = np.sqrt(occ[i])
        ops.append(Qobj(_d.from_array(arr, fmt), dims=_enr_dims(space, "oper")))
    return ops


def enr_fock(dims, n_exc: int, occupations, dtype: str | None = None) -> Qobj:
    """Unit ket at the given occupation tuple of the restricted space."""
    space = enr_space(dims, n_exc)
    idx = space.index(occupations)
    vec = np.zeros((space.size, 1), dtype=np.complex128)
    vec[idx, 0] = 1.0
    return Qobj(_d.from_array(vec, dtype or default_dtype("state")), dims=_enr_dims(space, "ket"))


def enr_identity(dims, n_exc: int, dtype: str | None = None) -> Qobj:
    """Identity operator on the restricted space."""
    space = enr_space(dims, n_exc)
    fmt = dtype or default_dtype("oper")
    return Qobj(_d.identity_data(space.size, fmt), dims=_enr_dims(space, "oper"))
