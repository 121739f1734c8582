"""Monte Carlo wave function solver (quantum-jump unraveling of the Lindblad
master equation).

Each trajectory integrates the non-Hermitian drift ``H - (i/2) sum C_n^dag C_n``
until the squared norm of the unnormalized state falls to a uniform random
threshold; the jump time is then located by bisection on the dense output, a
channel is drawn with probability proportional to ``<psi|C_n^dag C_n|psi>``,
the collapse operator is applied, the state renormalized, and a fresh
threshold drawn.  Expectation values are computed on normalized states and
averaged (with weights when improved sampling or mixed initial states are
used).
"""

from __future__ import annotations

import time

import numpy as np

from .coefficient import Coefficient
from .exceptions import DimensionMismatchError, SolverError
from .integrator import DP54Stepper
from .qobj import Qobj
from .qobjevo import QobjEvo
from .result import MultiTrajResult, normalize_e_ops
from .solver import sesolve
from .trajectory import McOptions, WeightedStats, run_map, trajectory_rng

__all__ = ["McOptions", "MCSolver", "mcsolve"]


class _Channel:
    """One jump channel: an operator and an optional time-dependent rate."""

    __slots__ = ("mat", "rate", "ratio_fn")

    def __init__(self, op: Qobj, rate: Coefficient | None = None, ratio_fn=None):
        self.mat = op.data.scipy_matrix()
        self.rate = rate
        self.ratio_fn = ratio_fn  # martingale ratio gamma/Gamma at a jump time

    def weight(self, t: float, psi: np.ndarray) -> float:
        w = float(np.linalg.norm(self.mat @ psi) ** 2)
        if self.rate is not None:
            w *= max(float(self.rate(t).real), 0.0)
        return w

    def apply(self, psi: np.ndarray) -> np.ndarray:
        return self.mat @ psi


class _Trajectory:
    __slots__ = ("expect", "jumps", "ratios", "final_norm2", "states")

    def __init__(self, expect, jumps, ratios, final_norm2, states):
        self.expect = expect
        self.jumps = jumps
        self.ratios = ratios
        self.final_norm2 = final_norm2
        self.states = states


def _bisect_jump_time(segment, r: float, rel_tol: float) -> float:
    """Locate ``|psi(t)|^2 = r`` inside one step; the norm is monotone there."""
    lo, hi = segment.t_old, segment.t_new
    tol = rel_tol * max(abs(hi), hi - lo)
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if np.linalg.norm(segment(mid)) ** 2 > r:
            lo = mid
        else:
            hi = mid
    return hi


def _mcwf_trajectory(
    drift_evo: QobjEvo,
    channels,
    psi0: np.ndarray,
    tlist: np.ndarray,
    e_mats,
    integ_opts,
    norm_tol: float,
    rng,
    r_first: float | None,
    store_states: bool,
) -> _Trajectory:
    t_end = float(tlist[-1])

    def rhs(t, y):
        return drift_evo.matvec(t, y)

    psi = psi0.copy()
    r = rng.uniform() if r_first is None else r_first
    stepper = DP54Stepper(rhs, float(tlist[0]), psi, integ_opts, t_end)
    jumps: list[tuple[float, int]] = []
    ratios: list[float] = []
    expect = [np.empty(tlist.size, dtype=complex) for _ in e_mats]
    states = [] if store_states else None

    for j, target in enumerate(tlist):
        eps_t = 4 * np.finfo(float).eps * max(1.0, abs(target))
        while stepper.t < target - eps_t:
            seg = stepper.step()
            if float(np.linalg.norm(stepper.y) ** 2) <= r:
                t_jump = _bisect_jump_time(seg, r, norm_tol)
                psi_j = seg(t_jump)
                weights = np.array([ch.weight(t_jump, psi_j) for ch in channels])
                total = float(weights.sum())
                if not np.isfinite(total) or total <= 0.0:
                    raise SolverError(
                        f"no jump channel has positive weight at t={t_jump:.6g}"
                    )
                u = rng.uniform() * total
                k = int(np.searchsorted(np.cumsum(weights), u, side="right"))
                k = min(k, len(channels) - 1)
                psi_new = channels[k].apply(psi_j)
                nrm = np.linalg.norm(psi_new)
                if nrm == 0.0 or not np.isfinite(nrm):
                    raise SolverError(f"collapse produced a zero-norm state at t={t_jump:.6g}")
                psi_new = psi_new / nrm
                jumps.append((t_jump, k))
                if channels[k].ratio_fn is not None:
                    ratios.append(float(channels[k].ratio_fn(t_jump)))
                r = rng.uniform()
                stepper = DP54Stepper(rhs, t_jump, psi_new, integ_opts, t_end)
        if stepper.segment is None:
            y = stepper.y
        else:
            y = stepper.interpolate(min(target, stepper.segment.t_new))
        nrm = np.linalg.norm(y)
        ynorm = y / nrm if nrm > 0 else y
        for series, m in zip(expect, e_mats):
            series[j] = complex(np.vdot(ynorm, m @ ynorm))
        if store_states:
            states.append(ynorm.copy())

    return _Trajectory(expect, jumps, ratios, float(np.linalg.norm(stepper.y) ** 2), states)


def _allot(ntraj: int, probs) -> list[int]:
    """Distribute trajectories over mixture components proportionally."""
    raw = [p * ntraj for p in probs]
    counts = [max(1, int(np.floor(x))) for x in raw]
    while sum(counts) < ntraj:
        fracs = [x - c for x, c in zip(raw, counts)]
        counts[int(np.argmax(fracs))] += 1
    while sum(counts) > ntraj and max(counts) > 1:
        fracs = [x - c for x, c in zip(raw, counts)]
        k = int(np.argmin(fracs))
        if counts[k] > 1:
            counts[k] -= 1
        else:
            break
    return counts


class MCSolver:
    """Reusable Monte Carlo solver (build the effective drift once)."""

    name = "mcsolve"

    def __init__(self, H, c_ops, options=None):
        if not c_ops:
            raise ValueError("MCSolver needs at least one collapse operator")
        self.options = McOptions.coerce(options).validated()
        H_evo = H if isinstance(H, QobjEvo) else QobjEvo(H)
        self.dims = H_evo.dims
        drift_terms = list((-1j * H_evo).terms)
        channels = []
        for c in c_ops:
            cev = c if isinstance(c, QobjEvo) else QobjEvo(c)
            if cev.dims.ket != H_evo.dims.ket:
                raise DimensionMismatchError("collapse operator dims do not match H")
            if cev.isconstant:
                c0 = cev(0.0)
                channels.append(_Channel(c0))
                drift_terms.append((-0.5 * (c0.dag() @ c0), None))
            else:
                if len(cev.terms) != 1:
                    raise ValueError(
                        "time-dependent collapse operators must be single (Qobj, coeff) terms"
                    )
                base, coeff = cev.terms[0]
                channels.append(_Channel(base, rate=coeff.abs2()))
                drift_terms.append((-0.5 * (base.dag() @ base), coeff.abs2()))
        spec = [(q, c) if c is not None else q for q, c in drift_terms]
        self.drift_evo = QobjEvo(spec)
        self.channels = channels

    def run(self, psi0, tlist, e_ops=None) -> MultiTrajResult:
        return _run_trajectories(
            self.drift_evo,
            self.channels,
            psi0,
            np.asarray(tlist, dtype=float),
            e_ops,
            self.options,
            self.dims,
            solver_name=self.name,
        )


def _run_trajectories(
    drift_evo,
    channels,
    psi0,
    tlist,
    e_ops,
    opts: McOptions,
    dims,
    solver_name: str,
    martingale_cont=None,
):
    """Common driver for mcsolve and nm_mcsolve ensembles."""
    t_start = time.perf_counter()
    labels, ops = normalize_e_ops(e_ops)
    e_mats = [op.data.scipy_matrix() for op in ops]
    real_flags = [op.isherm for op in ops]

    if isinstance(psi0, Qobj):
        components = [(psi0, 1.0)]
    else:
        components = [(k, float(p)) for k, p in psi0]
        total_p = sum(p for _, p in components)
        if abs(total_p - 1.0) > 1e-8:
            raise ValueError("mixture probabilities must sum to 1")
    for ket, _ in components:
        if not ket.isket:
            raise DimensionMismatchError("initial states must be kets")

    counts = _allot(opts.ntraj, [p for _, p in components])
    weighted = opts.improved_sampling or len(components) > 1

    # Job table: (trajectory index for the rng stream, component, r_first role)
    jobs = []
    idx = 0
    nojump: dict[int, _Trajectory] = {}
    for comp_i, ((ket, p), n_i) in enumerate(zip(components, counts)):
        y0 = ket.unit().full().ravel()
        if opts.improved_sampling:
            nj = _mcwf_trajectory(
                drift_evo, channels, y0, tlist, e_mats, opts.integrator,
                opts.norm_tol, trajectory_rng(opts.seed, idx), -1.0, opts.store_states,
            )
            nojump[comp_i] = nj
            idx += 1
            n_jump = max(n_i - 1, 0)
        else:
            n_jump = n_i
        for _ in range(n_jump):
            jobs.append((idx, comp_i, y0))
            idx += 1

    def run_one(job):
        tid, comp_i, y0 = job
        rng = trajectory_rng(opts.seed, tid)
        if opts.improved_sampling:
            p0 = nojump[comp_i].final_norm2
            r_first = p0 + (1.0 - p0) * rng.uniform()
        else:
            r_first = None
        return comp_i, _mcwf_trajectory(
            drift_evo, channels, y0, tlist, e_mats, opts.integrator,
            opts.norm_tol, rng, r_first, opts.store_states,
        )

    def stop_check(done):
        if opts.target_tol is None or not e_mats:
            return False
        atol, rtol = _target_tols(opts.target_tol)
        stats = _reduce(done)
        avg, std = stats.finalize()
        n = stats.n
        for a, s in zip(avg, std):
            err = s / np.sqrt(max(n, 1))
            bound = atol + rtol * np.abs(a)
            if np.any(err > bound):
                return False
        return True

    def _weights_for(done):
        """Pair every finished trajectory with its ensemble weight."""
        by_comp: dict[int, list[_Trajectory]] = {}
        for comp_i, traj in done:
            by_comp.setdefault(comp_i, []).append(traj)
        pairs: list[tuple[float, _Trajectory]] = []
        for comp_i, (_, p) in enumerate(components):
            trajs = by_comp.get(comp_i, [])
            if opts.improved_sampling:
                nj = nojump[comp_i]
                p0 = nj.final_norm2
                # With no jump trajectories for this component, the no-jump
                # run carries the full component weight.
                pairs.append((p * (p0 if trajs else 1.0), nj))
                if trajs:
                    w_each = p * (1.0 - p0) / len(trajs)
                    pairs.extend((w_each, t) for t in trajs)
            else:
                w_each = p / max(len(trajs), 1)
                pairs.extend((w_each, t) for t in trajs)
        return pairs

    def _reduce(done):
        stats = WeightedStats(len(e_mats), tlist.size)
        for w, traj in _weights_for(done):
            series = [
                _weighted_series(traj, k, martingale_cont, tlist)
                for k in range(len(e_mats))
            ]
            stats.add(w, series)
        return stats

    done = run_map(run_one, jobs, opts.map, timeout=opts.timeout, stop_check=stop_check)
    stats = _reduce(done)
    avg, std = stats.finalize()

    # Every trajectory (no-jump ones included) with its weight, for the
    # auxiliary outputs: photocurrent, runs, states, martingale trace.
    all_trajs = _weights_for(done)
    w_total = sum(w for w, _ in all_trajs)
    photocurrent = _photocurrent(all_trajs, len(channels), tlist, w_total)

    trace = trace_std = None
    if martingale_cont is not None:
        trace = np.zeros(tlist.size)
        trace_sq = np.zeros(tlist.size)
        for w, traj in all_trajs:
            mu = _martingale_series(traj, martingale_cont, tlist).real
            trace += w * mu
            trace_sq += w * mu**2
        trace /= w_total
        trace_sq /= w_total
        trace_std = np.sqrt(np.maximum(trace_sq - trace**2, 0.0))

    runs_expect = None
    if opts.keep_runs_results:
        runs_expect = [
            np.array([
                (t.expect[k].real if real_flags[k] else t.expect[k])
                for _, t in all_trajs
            ])
            for k in range(len(e_mats))
        ]

    average_states = None
    if opts.store_states:
        n = drift_evo.shape[0]
        op_dims = [dims.ket, dims.ket]
        acc = [np.zeros((n, n), dtype=complex) for _ in tlist]
        for w, traj in all_trajs:
            mu = (
                _martingale_series(traj, martingale_cont, tlist)
                if martingale_cont is not None
                else np.ones(tlist.size)
            )
            for j, psi in enumerate(traj.states):
                acc[j] += (w * mu[j]) * np.outer(psi, psi.conj())
        from .dimensions import Dimensions

        dm_dims = Dimensions(dims.ket, dims.ket, enr=dims.enr)
        average_states = [Qobj(a / w_total, dims=dm_dims) for a in acc]

    avg_final = [a.real if flag else a for a, flag in zip(avg, real_flags)]
    stats_dict = {
        "solver": solver_name,
        "ntraj_requested": opts.ntraj,
        "run_time": time.perf_counter() - t_start,
        "map": opts.map,
    }
    ntraj_used = len(all_trajs)
    seeds = [(opts.seed, k) for k in range(ntraj_used)]
    return MultiTrajResult(
        tlist,
        labels,
        avg_final,
        std,
        runs_expect=runs_expect,
        average_states=average_states,
        final_state=average_states[-1] if average_states else None,
        photocurrent=photocurrent,
        ntraj_used=ntraj_used,
        seeds=seeds,
        weights=[w for w, _ in all_trajs],
        trace=trace,
        trace_std=trace_std,
        stats=stats_dict,
    )


def _martingale_series(traj: _Trajectory, cont: np.ndarray, tlist: np.ndarray) -> np.ndarray:
    """mu(t_j) = cont(t_j) * prod of jump ratios before t_j."""
    mu = cont.astype(complex).copy()
    if traj.ratios:
        jump_times = np.array([t for t, _ in traj.jumps])
        ratios = np.array(traj.ratios)
        for j, t in enumerate(tlist):
            mu[j] *= np.prod(ratios[jump_times <= t]) if jump_times.size else 1.0
    return mu


def _weighted_series(traj: _Trajectory, k: int, martingale_cont, tlist):
    if martingale_cont is None:
        return traj.expect[k]
    return traj.expect[k] * _martingale_series(traj, martingale_cont, tlist)


def _photocurrent(all_trajs, n_channels, tlist, w_total):
    if tlist.size < 2:
        return [np.zeros(0) for _ in range(n_channels)]
    dt = np.diff(tlist)
    out = [np.zeros(tlist.size - 1) for _ in range(n_channels)]
    for w, traj in all_trajs:
        for t_jump, k in traj.jumps:
            i = int(np.searchsorted(tlist, t_jump, side="right")) - 1
            i = min(max(i, 0), tlist.size - 2)
            out[k][i] += w
    for k in range(n_channels):
        out[k] /= w_total * dt
    return out


def _target_tols(target_tol):
    if isinstance(target_tol, (tuple, list)):
        atol, rtol = target_tol
    else:
        atol, rtol = float(target_tol), 0.0
    return float(atol), float(rtol)


def mcsolve(H, psi0, tlist, c_ops=(), e_ops=None, options=None) -> MultiTrajResult:
    """Lindblad dynamics averaged over quantum-jump trajectories.

    ``psi0`` is a ket or, for mixed initial states, a list of ``(ket, prob)``
    pairs; trajectories are allotted to the components proportionally and the
    results weighted by the component probabilities.  Without collapse
    operators the problem is deterministic and is delegated to
    :func:`~oqsim.solver.sesolve` (wrapped as a single-trajectory result).
    """
    tlist = np.asarray(tlist, dtype=float)
    if not c_ops:
        if not isinstance(psi0, Qobj):
            raise ValueError("mixed initial states need collapse operators")
        res = sesolve(H, psi0, tlist, e_ops=e_ops, options=None)
        std = [np.zeros(tlist.size) for _ in res.expect]
        return MultiTrajResult(
            tlist,
            res.e_op_labels,
            res.expect,
            std,
            ntraj_used=1,
            seeds=[],
            weights=[1.0],
            stats={"solver": "mcsolve", "delegated": "sesolve"},
        )
    solver = MCSolver(H, c_ops, options)
    return solver.run(psi0, tlist, e_ops=e_ops)
