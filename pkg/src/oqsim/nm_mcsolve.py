"""Non-Markovian Monte Carlo: quantum jumps for master equations whose rates
may turn negative.

The time-local master equation ``d rho/dt = -i[H, rho] + sum_n gamma_n(t) D_n``
is mapped onto a completely positive unraveling by (i) padding the jump
operators so that ``sum_n A_n^dag A_n = alpha 1``, (ii) shifting all rates by
``s(t) = 2 |min(0, gamma_1(t), ...)|`` so they are non-negative, and (iii)
weighting each trajectory with the influence martingale

    mu(t) = exp(alpha * int_0^t s) * prod_k gamma_{n_k}(t_k) / Gamma_{n_k}(t_k)

over its jumps.  Martingale-weighted averages reconstruct the original state;
the ensemble average of mu itself (the ``trace`` field) estimates tr(rho) = 1
and is a convergence diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import data as _d
from .coefficient import Coefficient, ConstantCoefficient, FunctionCoefficient, coefficient
from .exceptions import DimensionMismatchError, RangeError
from .mcsolve import _Channel, _run_trajectories
from .qobj import Qobj
from .qobjevo import QobjEvo
from .result import MultiTrajResult
from .trajectory import McOptions

__all__ = ["NmPrepared", "nm_prepare", "nm_mcsolve"]

_RATE_GUARD = 1e-14


@dataclass
class NmPrepared:
    """Padded jump operators, rate functions, shift and shifted rates."""

    ops: list
    rates: list
    alpha: float
    shift: object  # callable t -> s(t) >= 0
    shifted_rates: list


def _real_rate(coeff: Coefficient):
    return lambda t: float(coeff(t).real)


def nm_prepare(ops_and_rates) -> NmPrepared:
    """Complete the jump-operator set and build the rate shift.

    ``alpha`` is the largest eigenvalue of ``sum A_n^dag A_n``; when the sum
    is not already proportional to the identity, the deficit operator
    ``sqrt(alpha 1 - sum A_n^dag A_n)`` is appended with zero rate.
    """
    ops = []
    rates = []
    for op, rate in ops_and_rates:
        if not op.isoper or op.dims.ket != op.dims.bra:
            raise DimensionMismatchError("jump operators must be square operators")
        ops.append(op)
        rates.append(coefficient(rate))
    if not ops:
        raise ValueError("need at least one (operator, rate) pair")
    dims = ops[0].dims
    for op in ops[1:]:
        if op.dims != dims:
            raise DimensionMismatchError("all jump operators must share dims")

    total = None
    for op in ops:
        term = op.dag() @ op
        total = term if total is None else total + term
    w, _ = _d.eig_herm(total.data)
    alpha = float(w[-1])
    if alpha <= 0:
        raise RangeError("sum of A^dag A is zero; no jump dynamics to unravel")

    deficit = alpha * _qeye_like(ops[0]) - total
    if _d.max_abs(deficit.data) > 1e-10:
        wd, _ = _d.eig_herm(deficit.data)
        if wd.min() < -1e-10:
            raise RangeError(
                f"alpha*1 - sum A^dag A has negative eigenvalue {wd.min():.3e};"
                " cannot build the padding operator"
            )
        ops = ops + [deficit.sqrtm()]
        rates = rates + [ConstantCoefficient(0.0)]

    rate_fns = [_real_rate(c) for c in rates]

    def shift(t: float) -> float:
        return 2.0 * abs(min(0.0, min(fn(t) for fn in rate_fns)))

    shifted = [
        FunctionCoefficient(lambda t, args=None, fn=fn: fn(t) + shift(t))
        for fn in rate_fns
    ]
    return NmPrepared(ops=ops, rates=rates, alpha=alpha, shift=shift, shifted_rates=shifted)


def _qeye_like(op: Qobj) -> Qobj:
    from .operators import qeye_like

    return qeye_like(op)


def nm_mcsolve(H, psi0, tlist, ops_and_rates, e_ops=None, options=None) -> MultiTrajResult:
    """Monte Carlo solution of a time-local master equation with possibly
    negative rates.

    Returns martingale-weighted ensemble statistics; the ``trace`` field of
    the result holds the average influence martingale.
    """
    opts = McOptions.coerce(options).validated()
    prep = nm_prepare(ops_and_rates)
    tlist = np.asarray(tlist, dtype=float)

    H_evo = H if isinstance(H, QobjEvo) else QobjEvo(H)
    drift_terms = list((-1j * H_evo).terms)
    channels = []
    for op, gamma, Gamma in zip(prep.ops, prep.rates, prep.shifted_rates):
        gamma_fn = _real_rate(gamma)

        def ratio(t, gfn=gamma_fn, Gfn=Gamma):
            G = float(Gfn(t).real)
            if G < _RATE_GUARD:
                return 0.0
            return gfn(t) / G

        channels.append(_Channel(op, rate=Gamma, ratio_fn=ratio))
        drift_terms.append((-0.5 * (op.dag() @ op), Gamma))
    drift_evo = QobjEvo([(q, c) for q, c in drift_terms])

    # The exponential martingale factor exp(alpha * int_0^t s) is trajectory
    # independent; accumulate it once on the output grid.
    cont = np.ones(tlist.size)
    acc = 0.0
    for j in range(1, tlist.size):
        seg, _ = quad(prep.shift, tlist[j - 1], tlist[j], limit=200)
        acc += seg
        cont[j] = np.exp(prep.alpha * acc)

    return _run_trajectories(
        drift_evo,
        channels,
        psi0,
        tlist,
        e_ops,
        opts,
        H_evo.dims,
        solver_name="nm_mcsolve",
        martingale_cont=cont,
    )
