"""Homodyne stochastic master equation solver.

Euler-Maruyama integration of

    d rho = -i[H, rho] dt + sum_c D[c] rho dt + sum_s D[s] rho dt
            + sum_s H[s] rho dW_s

with one Wiener increment per monitored channel ``s`` and
``H[s] rho = s rho + rho s^dag - tr[s rho + rho s^dag] rho``.  The state is
renormalized to unit trace after every substep (the measurement nonlinearity
preserves the trace only on average).  Each trajectory also records the
homodyne current ``J_x = tr[(s + s^dag) rho] + dW/dt`` on the output grid.
"""

from __future__ import annotations

import time

import numpy as np

from .dimensions import Dimensions
from .exceptions import DimensionMismatchError, SolverError
from .qobj import Qobj
from .qobjevo import QobjEvo
from .result import MultiTrajResult, normalize_e_ops
from .trajectory import McOptions, WeightedStats, run_map, trajectory_rng

__all__ = ["WienerPath", "smesolve"]


class WienerPath:
    """Seeded Wiener increments on a substep grid, one row per channel."""

    def __init__(self, rng, n_channels: int, n_steps: int, dt: float):
        self.dt = dt
        self.increments = rng.standard_normal((n_channels, n_steps)) * np.sqrt(dt)


def _as_constant_matrix(op, name):
    ev = op if isinstance(op, QobjEvo) else QobjEvo(op)
    if not ev.isconstant:
        raise SolverError(f"smesolve requires time-independent {name}")
    return ev(0.0).full()


def smesolve(H, rho0: Qobj, tlist, c_ops=(), sc_ops=(), e_ops=None, options=None) -> MultiTrajResult:
    """Trajectories of a homodyne-monitored system.

    ``sc_ops`` are the monitored channels (one Wiener process each);
    ``c_ops`` add unmonitored deterministic dissipation.  ``tlist`` must be
    uniform and the substep ``dt_sub`` (options) must divide its spacing;
    the default substep is spacing/100.
    """
    t_start = time.perf_counter()
    opts = McOptions.coerce(options).validated()
    tlist = np.asarray(tlist, dtype=float)
    if tlist.size < 2:
        raise ValueError("tlist needs at least two points")
    spacings = np.diff(tlist)
    dt_out = spacings[0]
    if np.any(np.abs(spacings - dt_out) > 1e-10 * max(dt_out, 1.0)):
        raise ValueError("smesolve requires a uniform tlist")
    dt_sub = opts.dt_sub if opts.dt_sub is not None else dt_out / 100.0
    n_sub = dt_out / dt_sub
    if abs(n_sub - round(n_sub)) > 1e-8:
        raise ValueError(
            f"dt_sub={dt_sub} does not divide the tlist spacing {dt_out}"
        )
    n_sub = int(round(n_sub))
    dt = dt_out / n_sub

    if not sc_ops and not c_ops:
        raise ValueError("smesolve needs at least one collapse or monitored operator")

    H_evo = H if isinstance(H, QobjEvo) else QobjEvo(H)
    if rho0.isket:
        rho0 = rho0.proj()
    if rho0.dims.ket != H_evo.dims.ket:
        raise DimensionMismatchError("initial state dims do not match H")
    dims = Dimensions(rho0.dims.ket, rho0.dims.bra)

    Hmat = None if not H_evo.isconstant else _as_constant_matrix(H_evo, "H")
    cs = [_as_constant_matrix(c, "c_ops") for c in c_ops]
    ss = [_as_constant_matrix(s, "sc_ops") for s in sc_ops]
    cs_dag = [m.conj().T for m in cs]
    ss_dag = [m.conj().T for m in ss]
    cdc = [md @ m for m, md in zip(cs, cs_dag)]
    sds = [md @ m for m, md in zip(ss, ss_dag)]

    # For constant generators the deterministic part of the substep is applied
    # exactly through a precomputed propagator exp(L dt); only the measurement
    # term is then left to the Euler-Maruyama increment.  This keeps the
    # deterministic truncation error out of the trajectory average.
    det_prop = None
    if Hmat is not None:
        from .superop import liouvillian
        import scipy.linalg

        Hq = Qobj(Hmat)
        L = liouvillian(Hq, [Qobj(m) for m in cs] + [Qobj(m) for m in ss])
        det_prop = scipy.linalg.expm(L.full() * dt)

    labels, ops = normalize_e_ops(e_ops)
    e_rows = [op.full().flatten(order="C") for op in ops]
    real_flags = [op.isherm for op in ops]

    rho_init = rho0.full()
    rho_init = rho_init / np.trace(rho_init).real
    n_channels = len(ss)
    n_total_sub = n_sub * (tlist.size - 1)

    def lindblad_part(t, rho):
        if Hmat is not None:
            h = Hmat
        else:
            h = H_evo(t).full()
        out = -1j * (h @ rho - rho @ h)
        for m, md, mdm in zip(cs, cs_dag, cdc):
            out += m @ rho @ md - 0.5 * (mdm @ rho + rho @ mdm)
        for m, md, mdm in zip(ss, ss_dag, sds):
            out += m @ rho @ md - 0.5 * (mdm @ rho + rho @ mdm)
        return out

    def run_one(i):
        rng = trajectory_rng(opts.seed, i)
        path = WienerPath(rng, n_channels, n_total_sub, dt)
        rho = rho_init.copy()
        expect = [np.empty(tlist.size, dtype=complex) for _ in e_rows]
        record = np.zeros((n_channels, tlist.size - 1))
        states = [] if opts.store_states else None

        def collect(j):
            flat = rho.flatten(order="F")
            for series, row in zip(expect, e_rows):
                series[j] = complex(row @ flat)
            if states is not None:
                states.append(rho.copy())

        collect(0)
        ptr = 0
        for j in range(tlist.size - 1):
            t = tlist[j]
            x_start = [
                float(np.trace((m + md) @ rho).real) for m, md in zip(ss, ss_dag)
            ]
            dW_sum = np.zeros(n_channels)
            for _ in range(n_sub):
                dW = path.increments[:, ptr]
                ptr += 1
                if det_prop is not None:
                    rho = (det_prop @ rho.flatten(order="F")).reshape(
                        rho.shape, order="F"
                    )
                else:
                    rho = rho + lindblad_part(t, rho) * dt
                for k, (m, md) in enumerate(zip(ss, ss_dag)):
                    hrho = m @ rho + rho @ md
                    hrho = hrho - np.trace(hrho) * rho
                    rho = rho + hrho * dW[k]
                rho = rho / np.trace(rho).real
                t += dt
                dW_sum += dW
            for k in range(n_channels):
                record[k, j] = x_start[k] + dW_sum[k] / dt_out
            collect(j + 1)
        return expect, record, states

    results = run_map(run_one, range(opts.ntraj), opts.map, timeout=opts.timeout)
    ntraj_used = len(results)

    stats = WeightedStats(len(e_rows), tlist.size)
    for expect, _, _ in results:
        stats.add(1.0, expect)
    avg, std = stats.finalize()
    avg = [a.real if flag else a for a, flag in zip(avg, real_flags)]

    measurements = [rec for _, rec, _ in results]

    average_states = None
    if opts.store_states:
        acc = [np.zeros_like(rho_init) for _ in tlist]
        for _, _, states in results:
            for j, s in enumerate(states):
                acc[j] += s
        average_states = [Qobj(a / ntraj_used, dims=dims) for a in acc]

    runs_expect = None
    if opts.keep_runs_results:
        runs_expect = [
            np.array([
                (res[0][k].real if real_flags[k] else res[0][k]) for res in results
            ])
            for k in range(len(e_rows))
        ]

    return MultiTrajResult(
        tlist,
        labels,
        avg,
        std,
        runs_expect=runs_expect,
        average_states=average_states,
        final_state=average_states[-1] if average_states else None,
        measurements=measurements,
        ntraj_used=ntraj_used,
        seeds=[(opts.seed, i) for i in range(ntraj_used)],
        weights=[1.0] * ntraj_used,
        stats={
            "solver": "smesolve",
            "dt_sub": dt,
            "run_time": time.perf_counter() - t_start,
            "map": opts.map,
        },
    )
