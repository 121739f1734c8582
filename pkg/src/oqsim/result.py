"""Result containers for the dynamics solvers."""

from __future__ import annotations

import numpy as np

from .qobj import Qobj, expect

__all__ = ["SolveResult", "MultiTrajResult", "normalize_e_ops"]


def normalize_e_ops(e_ops):
    """Coerce e_ops into parallel (labels, operators) lists.

    Accepts None, a single Qobj, a list of Qobjs, or a dict label -> Qobj.
    """
    if e_ops is None:
        return [], []
    if isinstance(e_ops, Qobj):
        return ["e0"], [e_ops]
    if isinstance(e_ops, dict):
        return list(e_ops.keys()), list(e_ops.values())
    labels = [f"e{k}" for k in range(len(e_ops))]
    return labels, list(e_ops)


class SolveResult:
    """Time series produced by a deterministic solver.

    Attributes
    ----------
    times : ndarray
        Output times.
    expect : list of ndarray
        One series per expectation operator, aligned with ``times``.
    e_op_labels : list of str
    states : list of Qobj or None
        Stored states (always present when no e_ops were requested).
    final_state : Qobj or None
    stats : dict
        Bookkeeping: rhs evaluations, wall time, solver name.
    """

    def __init__(self, times, e_op_labels, expect, states=None, final_state=None, stats=None):
        self.times = np.asarray(times, dtype=float)
        self.e_op_labels = list(e_op_labels)
        self.expect = [np.asarray(series) for series in expect]
        self.states = states
        self.final_state = final_state
        self.stats = dict(stats or {})

    @property
    def expect_dict(self) -> dict:
        return dict(zip(self.e_op_labels, self.expect))

    def __repr__(self):
        parts = [f"times={len(self.times)}", f"e_ops={self.e_op_labels}"]
        if self.states is not None:
            parts.append(f"states={len(self.states)}")
        return f"{type(self).__name__}({', '.join(parts)})"


class MultiTrajResult(SolveResult):
    """Ensemble statistics from a trajectory solver.

    ``expect`` holds the (weighted) ensemble averages; ``std_expect`` the
    ensemble standard deviations.  ``runs_expect`` is only populated when
    per-trajectory series were kept.  ``photocurrent`` holds one jump-rate
    series per collapse channel, binned per output interval.  ``trace`` is the
    martingale-average series of the non-Markovian solver.
    """

    def __init__(
        self,
        times,
        e_op_labels,
        average_expect,
        std_expect,
        *,
        runs_expect=None,
        average_states=None,
        final_state=None,
        photocurrent=None,
        measurements=None,
        ntraj_used=0,
        seeds=None,
        weights=None,
        trace=None,
        trace_std=None,
        stats=None,
    ):
        super().__init__(
            times,
            e_op_labels,
            average_expect,
            states=average_states,
            final_state=final_state,
            stats=stats,
        )
        self.std_expect = [np.asarray(s) for s in std_expect]
        self.runs_expect = runs_expect
        self.photocurrent = photocurrent
        self.measurements = measurements
        self.ntraj_used = int(ntraj_used)
        self.seeds = seeds
        self.weights = None if weights is None else np.asarray(weights, dtype=float)
        self.trace = None if trace is None else np.asarray(trace)
        self.trace_std = None if trace_std is None else np.asarray(trace_std)

    @property
    def average_expect(self):
        return self.expect

    @property
    def average_states(self):
        return self.states


def expectations_at(e_ops, state: Qobj):
    """Evaluate a list of e_ops on one state."""
    return [expect(op, state) for op in e_ops]
