"""Deterministic evolution with a unified solver-class pattern.

A solver is built once from the generator (Hamiltonian and collapse
operators); evolutions are then launched with :meth:`Solver.run`, or stepped
manually through :meth:`Solver.start` / :meth:`Solver.step`.  The functions
:func:`sesolve` and :func:`mesolve` are one-shot wrappers.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .dimensions import Dimensions
from .exceptions import DimensionMismatchError, MethodError
from .integrator import DP54Stepper, IntegratorOptions, propagate_diag
from .qobj import Qobj
from .qobjevo import QobjEvo, liouvillian_evo
from .result import SolveResult, normalize_e_ops

__all__ = ["SolverOptions", "Solver", "SESolver", "MESolver", "sesolve", "mesolve"]


@dataclass
class SolverOptions:
    """Output and integrator options shared by the deterministic solvers.

    ``store_states=None`` resolves to True exactly when no expectation
    operators are requested (so the run always returns something useful).
    """

    store_states: bool | None = None
    store_final_state: bool = False
    integrator: IntegratorOptions = field(default_factory=IntegratorOptions)
    progress: bool = False

    @classmethod
    def coerce(cls, options) -> "SolverOptions":
        if options is None:
            return cls()
        if isinstance(options, cls):
            return options
        if isinstance(options, dict):
            opts = dict(options)
            integ = IntegratorOptions()
            for name in ("atol", "rtol", "nsteps", "max_step", "first_step", "method"):
                if name in opts:
                    setattr(integ, name, opts.pop(name))
            return cls(integrator=integ, **opts)
        raise TypeError(f"cannot interpret {type(options)} as SolverOptions")


class _StepSession:
    """Mutable state for a start()/step() evolution."""

    def __init__(self, stepper: DP54Stepper, args_holder: dict):
        self.stepper = stepper
        self.args_holder = args_holder
        self.t = stepper.t


class Solver:
    """Base class: owns the packed right-hand side and result assembly."""

    name = "solver"

    def __init__(self, rhs_evo: QobjEvo, options=None):
        self.rhs_evo = rhs_evo
        self.options = SolverOptions.coerce(options)
        self._session: _StepSession | None = None

    # Subclasses define how Qobj states map to flat vectors.
    def _pack(self, state: Qobj) -> np.ndarray:
        raise NotImplementedError

    def _unpack(self, y: np.ndarray) -> Qobj:
        raise NotImplementedError

    def _check_state(self, state: Qobj) -> Qobj:
        return state

    def _expect_row(self, e_op: Qobj):
        """Return a closure evaluating <e_op> on a packed state vector."""
        raise NotImplementedError

    def _rhs(self, args_holder):
        def rhs(t, y):
            return self.rhs_evo.matvec(t, y, args_holder.get("args"))

        return rhs

    def run(self, state0: Qobj, tlist, e_ops=None, args=None) -> SolveResult:
        """Propagate ``state0`` over ``tlist`` and collect the requested output."""
        t_start = time.perf_counter()
        state0 = self._check_state(state0)
        tlist = np.asarray(tlist, dtype=float)
        if tlist.ndim != 1 or tlist.size < 1:
            raise ValueError("tlist must be a non-empty 1D array")
        if np.any(np.diff(tlist) < 0):
            raise ValueError("tlist must be ascending")

        labels, ops = normalize_e_ops(e_ops)
        opts = self.options
        store_states = opts.store_states if opts.store_states is not None else not ops
        evaluators = [self._expect_row(op) for op in ops]
        expect_out = [np.empty(tlist.size, dtype=complex) for _ in ops]
        real_flags = [op.isherm for op in ops]
        states_out = [] if store_states else None

        y0 = self._pack(state0)
        integ = opts.integrator
        nfev = 0
        if integ.method == "diag_expm":
            if not self.rhs_evo.isconstant:
                raise MethodError("diag_expm requires a time-independent generator")
            ys = propagate_diag(
                self.rhs_evo(tlist[0]).full(), y0, tlist, t0=float(tlist[0])
            )
            for j, y in enumerate(ys):
                self._collect(j, y, evaluators, expect_out, states_out)
        else:
            holder = {"args": args}
            stepper = DP54Stepper(self._rhs(holder), float(tlist[0]), y0, integ, float(tlist[-1]))
            from .exceptions import StepLimitError

            progress_mark = 0
            for j, target in enumerate(tlist):
                count = 0
                eps_t = 4 * np.finfo(float).eps * max(1.0, abs(target))
                while stepper.t < target - eps_t:
                    if count >= integ.nsteps:
                        raise StepLimitError(
                            f"exceeded {integ.nsteps} steps before t={target:.6g}"
                        )
                    stepper.step()
                    count += 1
                y = stepper.y if stepper.segment is None else stepper.interpolate(
                    min(target, stepper.segment.t_new)
                )
                self._collect(j, y, evaluators, expect_out, states_out)
                if opts.progress and 10 * j // max(1, tlist.size - 1) > progress_mark:
                    progress_mark = 10 * j // (tlist.size - 1)
                    print(".", end="", file=sys.stderr, flush=True)
            nfev = stepper.nfev
            if opts.progress:
                print("", file=sys.stderr)

        expect_final = [
            series.real if flag else series for series, flag in zip(expect_out, real_flags)
        ]
        final_state = None
        if opts.store_final_state or store_states:
            final_state = states_out[-1] if store_states else self._unpack(np.asarray(y))
        stats = {
            "solver": self.name,
            "rhs_evaluations": nfev,
            "run_time": time.perf_counter() - t_start,
        }
        return SolveResult(
            tlist,
            labels,
            expect_final,
            states=states_out,
            final_state=final_state,
            stats=stats,
        )

    def _collect(self, j, y, evaluators, expect_out, states_out):
        for series, ev in zip(expect_out, evaluators):
            series[j] = ev(y)
        if states_out is not None:
            states_out.append(self._unpack(np.asarray(y)))

    # -- manual stepping ------------------------------------------------------

    def start(self, state0: Qobj, t0: float, args=None) -> None:
        """Initialize a manual step() session at time ``t0``."""
        state0 = self._check_state(state0)
        holder = {"args": args}
        # The session integrates on demand; the domain end is unknown, so use
        # a far horizon and clamp steps per step() target instead.
        stepper = DP54Stepper(
            self._rhs(holder), float(t0), self._pack(state0), self.options.integrator, np.inf
        )
        self._session = _StepSession(stepper, holder)

    def step(self, t: float, args=None) -> Qobj:
        """Advance the session to time ``t`` and return the state there."""
        if self._session is None:
            raise RuntimeError("call start() before step()")
        sess = self._session
        if args is not None:
            sess.args_holder["args"] = args
            # Changed parameters invalidate the cached FSAL derivative.
            sess.stepper._f0 = sess.stepper._eval(sess.stepper.t, sess.stepper.y)
        if t < sess.t - 1e-12:
            raise ValueError(f"cannot step backwards from t={sess.t} to t={t}")
        stepper = sess.stepper
        saved_end = stepper.t_end
        stepper.t_end = max(float(t), stepper.t)
        try:
            eps_t = 4 * np.finfo(float).eps * max(1.0, abs(t))
            while stepper.t < t - eps_t:
                stepper.step()
        finally:
            stepper.t_end = saved_end
        sess.t = max(sess.t, float(t))
        if stepper.segment is None or t <= stepper.segment.t_old:
            y = stepper.y if stepper.segment is None else stepper.interpolate(t)
        else:
            y = stepper.interpolate(min(t, stepper.segment.t_new))
        return self._unpack(np.asarray(y))


class SESolver(Solver):
    """Schrodinger equation solver: ``d psi/dt = -i H(t) psi`` (hbar = 1)."""

    name = "sesolve"

    def __init__(self, H, options=None):
        H_evo = H if isinstance(H, QobjEvo) else QobjEvo(H)
        if H_evo.shape[0] != H_evo.shape[1]:
            raise DimensionMismatchError("Hamiltonian must be square")
        super().__init__(-1j * H_evo, options)
        self._dims = Dimensions(
            H_evo.dims.ket, [1] * len(H_evo.dims.ket), enr=H_evo.dims.enr
        )

    def _check_state(self, state):
        if not state.isket:
            raise DimensionMismatchError("sesolve needs a ket initial state")
        if state.dims.ket != self.rhs_evo.dims.bra or state.dims.enr != self.rhs_evo.dims.enr:
            raise DimensionMismatchError("initial state dims do not match the Hamiltonian")
        return state

    def _pack(self, state):
        return state.full().ravel()

    def _unpack(self, y):
        return Qobj(y.reshape(-1, 1), dims=self._dims)

    def _expect_row(self, e_op: Qobj):
        if e_op.dims.bra != self.rhs_evo.dims.bra:
            raise DimensionMismatchError("e_op dims do not match the Hamiltonian")
        mat = e_op.data.scipy_matrix()
        return lambda y: complex(np.vdot(y, mat @ y))


class MESolver(Solver):
    """Master equation solver over the vectorized density operator."""

    name = "mesolve"

    def __init__(self, H, c_ops=(), options=None):
        if isinstance(H, (Qobj, QobjEvo)) and not c_ops:
            evo = H if isinstance(H, QobjEvo) else QobjEvo(H)
            if evo.terms[0][0].issuper:
                L = evo
            else:
                L = liouvillian_evo(H, ())
        else:
            L = liouvillian_evo(H, c_ops)
        super().__init__(L, options)
        op_dims = L.dims.ket  # nested [ket_dims, bra_dims] of the operator space
        self._op_dims = Dimensions(op_dims[0], op_dims[1], enr=L.dims.enr)
        self._n = self._op_dims.shape[0]

    def _check_state(self, state):
        if state.isket:
            state = state.proj()
        if not state.isoper:
            raise DimensionMismatchError("mesolve needs a ket or density operator")
        if state.dims.ket != self._op_dims.ket or state.dims.enr != self._op_dims.enr:
            raise DimensionMismatchError("initial state dims do not match the generator")
        return state

    def _pack(self, state):
        return state.full().flatten(order="F")

    def _unpack(self, y):
        return Qobj(y.reshape((self._n, self._n), order="F"), dims=self._op_dims)

    def _expect_row(self, e_op: Qobj):
        if e_op.dims.ket != self._op_dims.ket:
            raise DimensionMismatchError("e_op dims do not match the generator")
        row = e_op.full().flatten(order="C")  # vec of E^T, so tr(E rho) = row . vec(rho)
        return lambda y: complex(row @ y)


def sesolve(H, psi0: Qobj, tlist, e_ops=None, options=None, args=None) -> SolveResult:
    """Integrate the Schrodinger equation for a (possibly driven) system."""
    return SESolver(H, options).run(psi0, tlist, e_ops=e_ops, args=args)


def mesolve(H, rho0: Qobj, tlist, c_ops=(), e_ops=None, options=None, args=None) -> SolveResult:
    """Integrate a Lindblad (or custom superoperator) master equation.

    With no collapse operators, a ket initial state and an operator-valued
    ``H``, the problem is pure Schrodinger evolution and is delegated to
    :func:`sesolve`.
    """
    is_super = (H.terms[0][0].issuper if isinstance(H, QobjEvo) else H.issuper)
    if not c_ops and rho0.isket and not is_super:
        return sesolve(H, rho0, tlist, e_ops=e_ops, options=options, args=args)
    return MESolver(H, c_ops, options).run(rho0, tlist, e_ops=e_ops, args=args)
