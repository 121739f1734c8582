"""Time-dependent quantum objects: sums of (Qobj, coefficient) terms.

A :class:`QobjEvo` represents ``Q(t) = sum_k c_k(t) Q_k``.  All algebra is
pointwise in time: ``(a + b)(t) = a(t) + b(t)``, ``(a @ b)(t) = a(t) @ b(t)``,
``a.dag()(t) = a(t).dag()``.  Constant terms are folded together so solvers
pay for time dependence only where it exists.
"""

from __future__ import annotations

import numbers

import numpy as np

from .coefficient import Coefficient, ConstantCoefficient, coefficient
from .exceptions import DimensionMismatchError
from .qobj import Qobj
from .superop import lindblad_dissipator, spost, spre, sprepost

__all__ = ["QobjEvo", "liouvillian_evo"]


class QobjEvo:
    """A list of ``(Qobj, Coefficient)`` terms evaluable at any time.

    Parameters
    ----------
    spec : Qobj, QobjEvo, or list
        List entries are either bare Qobjs (constant term) or
        ``(Qobj, coefficient-like)`` pairs, where the coefficient may be a
        number, a callable ``f(t[, args])``, a ``(times, values)`` sample pair
        or a :class:`~oqsim.coefficient.Coefficient`.
    """

    __slots__ = ("terms", "dims", "_const", "_td_mats")

    def __init__(self, spec):
        if isinstance(spec, QobjEvo):
            terms = list(spec.terms)
        elif isinstance(spec, Qobj):
            terms = [(spec, ConstantCoefficient(1.0))]
        elif isinstance(spec, (list, tuple)):
            terms = []
            for entry in spec:
                if isinstance(entry, Qobj):
                    terms.append((entry, ConstantCoefficient(1.0)))
                elif isinstance(entry, (list, tuple)) and len(entry) == 2 and isinstance(entry[0], Qobj):
                    terms.append((entry[0], coefficient(entry[1])))
                else:
                    raise TypeError(
                        "QobjEvo spec entries must be Qobj or (Qobj, coefficient)"
                    )
            if not terms:
                raise ValueError("QobjEvo needs at least one term")
        else:
            raise TypeError(f"cannot build QobjEvo from {type(spec)}")

        dims = terms[0][0].dims
        for q, _ in terms[1:]:
            if q.dims != dims:
                raise DimensionMismatchError(
                    f"all QobjEvo terms must share dims; got {q.dims.as_list()} vs {dims.as_list()}"
                )
        self.dims = dims
        self.terms = self._fold(terms)
        self._const = None
        self._td_mats = None

    @staticmethod
    def _fold(terms):
        """Combine all constant terms into a single leading term."""
        const = None
        rest = []
        for q, c in terms:
            if c.is_constant:
                scaled = q * c(0.0)
                const = scaled if const is None else const + scaled
            else:
                rest.append((q, c))
        out = []
        if const is not None:
            out.append((const, ConstantCoefficient(1.0)))
        return out + rest

    # -- evaluation ----------------------------------------------------------

    @property
    def isconstant(self) -> bool:
        return all(c.is_constant for _, c in self.terms)

    @property
    def shape(self):
        return self.dims.shape

    def __call__(self, t: float, args: dict | None = None) -> Qobj:
        out = None
        for q, c in self.terms:
            val = c(t, args)
            term = q * val
            out = term if out is None else out + term
        return out

    def _compiled(self):
        """Cache raw scipy matrices for fast matvec in the integrators."""
        if self._td_mats is None:
            const = None
            td = []
            for q, c in self.terms:
                if c.is_constant:
                    m = q.data.scipy_matrix() * c(0.0)
                    const = m if const is None else const + m
                else:
                    td.append((q.data.scipy_matrix(), c))
            self._const = const
            self._td_mats = td
        return self._const, self._td_mats

    def matvec(self, t: float, y: np.ndarray, args: dict | None = None) -> np.ndarray:
        """Evaluate ``Q(t) @ y`` on a flat ndarray without building a Qobj."""
        const, td = self._compiled()
        out = const @ y if const is not None else np.zeros_like(y)
        for m, c in td:
            out = out + c(t, args) * (m @ y)
        return out

    # -- algebra (pointwise in t) ---------------------------------------------

    def __add__(self, other):
        if isinstance(other, numbers.Number):
            if other == 0:
                return QobjEvo(self)
            eye = self._identity_like()
            other = QobjEvo([(eye, ConstantCoefficient(other))])
        elif isinstance(other, Qobj):
            other = QobjEvo(other)
        if not isinstance(other, QobjEvo):
            return NotImplemented
        if self.dims != other.dims:
            raise DimensionMismatchError("cannot add QobjEvo with different dims")
        return QobjEvo._from_terms(self.terms + other.terms, self.dims)

    __radd__ = __add__

    def __sub__(self, other):
        return self.__add__(-1 * other if not isinstance(other, numbers.Number) else -other)

    def __neg__(self):
        return (-1) * self

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return QobjEvo._from_terms(
                [(q * other, c) for q, c in self.terms], self.dims
            )
        if isinstance(other, (Qobj, QobjEvo)):
            return self.__matmul__(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self.__mul__(other)
        if isinstance(other, Qobj):
            return QobjEvo(other).__matmul__(self)
        return NotImplemented

    def __matmul__(self, other):
        if isinstance(other, Qobj):
            other = QobjEvo(other)
        if not isinstance(other, QobjEvo):
            return NotImplemented
        terms = []
        for qa, ca in self.terms:
            for qb, cb in other.terms:
                prod = qa @ qb
                if ca.is_constant and cb.is_constant:
                    co = ConstantCoefficient(ca(0.0) * cb(0.0))
                else:
                    co = ca * cb
                terms.append((prod, co))
        return QobjEvo._from_terms(terms, terms[0][0].dims)

    def dag(self) -> "QobjEvo":
        return QobjEvo._from_terms(
            [(q.dag(), c.conj() if not c.is_constant else ConstantCoefficient(c(0.0).conjugate()))
             for q, c in self.terms],
            self.dims.transposed(),
        )

    def _identity_like(self) -> Qobj:
        from .operators import qeye_like

        if self.shape[0] != self.shape[1]:
            raise DimensionMismatchError("scalar addition needs square dims")
        return qeye_like(self.terms[0][0])

    @classmethod
    def _from_terms(cls, terms, dims):
        obj = cls.__new__(cls)
        obj.dims = dims
        obj.terms = cls._fold(list(terms))
        obj._const = None
        obj._td_mats = None
        return obj


def _as_evo(x) -> QobjEvo:
    return x if isinstance(x, QobjEvo) else QobjEvo(x)


def _lift(evo: QobjEvo, fn) -> list:
    """Apply an operator->superoperator map termwise."""
    return [(fn(q), c) for q, c in evo.terms]


def liouvillian_evo(H, c_ops=()) -> QobjEvo:
    """Time-dependent Lindblad generator built termwise.

    ``H`` may be a Qobj, a QobjEvo, or ``None``; superoperator terms pass
    through unchanged.  Collapse operators may be constant or time dependent;
    a coefficient ``f`` on a collapse operator enters the dissipator with
    ``|f(t)|^2`` on both the sandwich and anticommutator parts, i.e. the
    physical-rate semantics ``D[f(t) c]``.
    """
    parts = []
    if H is not None:
        Hev = _as_evo(H)
        if Hev.terms[0][0].issuper:
            parts.extend(Hev.terms)
        else:
            parts.extend(_lift(Hev, lambda q: -1j * (spre(q) - spost(q))))

    for c in c_ops or ():
        cev = _as_evo(c)
        base = cev.terms[0][0]
        if base.issuper:
            parts.extend(cev.terms)
            continue
        if cev.isconstant:
            parts.append((lindblad_dissipator(cev(0.0)), ConstantCoefficient(1.0)))
            continue
        # D[c(t)] expanded termwise; for a single term (A, f) the sandwich and
        # anticommutator pieces both carry |f(t)|^2.
        for qa, ca in cev.terms:
            for qb, cb in cev.terms:
                if ca.is_constant and cb.is_constant:
                    co = ConstantCoefficient(ca(0.0) * cb(0.0).conjugate())
                elif ca is cb:
                    co = ca.abs2()
                else:
                    co = ca * cb.conj()
                bd = qb.dag()
                ab = bd @ qa
                parts.append((sprepost(qa, bd), co))
                parts.append((-0.5 * (spre(ab) + spost(ab)), co))
    if not parts:
        raise ValueError("liouvillian_evo needs a Hamiltonian or collapse operators")
    dims = parts[0][0].dims
    for q, _ in parts:
        if q.dims != dims:
            raise DimensionMismatchError("liouvillian terms have mismatched dims")
    return QobjEvo._from_terms(parts, dims)
