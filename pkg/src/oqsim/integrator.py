"""Adaptive ODE integration of complex state vectors with dense output.

The default method is an explicit Dormand-Prince 5(4) embedded pair with the
standard quartic dense-output interpolant and a PI step-size controller
(safety 0.9, growth clamped to [0.2, 5]).  The integrator is agnostic to
quantum structure: right-hand sides are plain callables ``(t, y) -> dy`` on
flat complex arrays.  For constant generators, :func:`propagate_diag` offers a
one-shot diagonalization route.

Integration is deterministic: identical inputs produce bit-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import MethodError, StepLimitError, StiffnessError

__all__ = ["IntegratorOptions", "DenseSegment", "DP54Stepper", "integrate", "propagate_diag"]


@dataclass
class IntegratorOptions:
    """Tolerances and limits for the adaptive integrator.

    ``nsteps`` bounds the number of accepted steps between two requested
    output times; ``max_step`` guards against stepping over short features
    such as narrow pulses.
    """

    atol: float = 1e-8
    rtol: float = 1e-6
    nsteps: int = 2048
    max_step: float | None = None
    first_step: float | None = None
    method: str = "rk45_adaptive"

    def validated(self) -> "IntegratorOptions":
        if self.atol <= 0 or self.rtol <= 0:
            raise ValueError("atol and rtol must be positive")
        if self.nsteps < 1:
            raise ValueError("nsteps must be at least 1")
        if self.max_step is not None and self.max_step <= 0:
            raise ValueError("max_step must be positive when set")
        if self.method not in ("rk45_adaptive", "diag_expm"):
            raise ValueError(f"unknown integrator method {self.method!r}")
        return self


# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# Difference between the 5th- and embedded 4th-order weights.
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# Quartic dense-output coefficients (Shampine's interpolant for this pair).
_P = np.array(
    [
        [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0, 0, 0, 0],
        [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)


class DenseSegment:
    """Polynomial interpolant of the solution over one accepted step."""

    __slots__ = ("t_old", "t_new", "y_old", "_q")

    def __init__(self, t_old, t_new, y_old, K):
        self.t_old = t_old
        self.t_new = t_new
        self.y_old = y_old
        self._q = K.T @ _P  # shape (n, 4)

    def __call__(self, t: float) -> np.ndarray:
        h = self.t_new - self.t_old
        x = (t - self.t_old) / h
        p = np.array([x, x**2, x**3, x**4])
        return self.y_old + h * (self._q @ p)


class DP54Stepper:
    """Stateful stepper: one accepted Dormand-Prince step per :meth:`step`.

    ``t_end`` clamps steps so the right-hand side is never evaluated beyond
    the integration domain (important for spline-backed coefficients).
    """

    def __init__(self, rhs, t0: float, y0: np.ndarray, opts: IntegratorOptions, t_end: float):
        self.rhs = rhs
        self.opts = opts.validated()
        self.t = float(t0)
        self.y = np.asarray(y0, dtype=np.complex128).copy()
        self.t_end = float(t_end)
        self.nfev = 0
        self.segment: DenseSegment | None = None
        self._f0 = self._eval(self.t, self.y)
        self._err_prev = 1e-4
        self._h = self._initial_step() if opts.first_step is None else float(opts.first_step)
        self._clamp_h()

    def _eval(self, t, y):
        self.nfev += 1
        return np.asarray(self.rhs(t, y), dtype=np.complex128)

    def _scale(self, y0, y1):
        return self.opts.atol + self.opts.rtol * np.maximum(np.abs(y0), np.abs(y1))

    def _initial_step(self) -> float:
        # Hairer-style heuristic from the magnitudes of y and f.
        span = self.t_end - self.t
        if span <= 0:
            return 0.0
        scale = self.opts.atol + self.opts.rtol * np.abs(self.y)
        d0 = _rms(self.y / scale)
        d1 = _rms(self._f0 / scale)
        h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
        h0 = min(h0, span)
        y1 = self.y + h0 * self._f0
        f1 = self._eval(self.t + h0, y1)
        d2 = _rms((f1 - self._f0) / scale) / h0
        if max(d1, d2) <= 1e-15:
            h1 = max(1e-6, h0 * 1e-3)
        else:
            h1 = (0.01 / max(d1, d2)) ** 0.2
        return min(100 * h0, h1, span)

    def _clamp_h(self):
        if self.opts.max_step is not None:
            self._h = min(self._h, self.opts.max_step)
        self._h = min(self._h, self.t_end - self.t) if self.t_end > self.t else self._h

    def step(self) -> DenseSegment:
        """Advance by one accepted step; returns the dense segment covering it."""
        if self.t >= self.t_end:
            raise RuntimeError("stepper already reached the end of its domain")
        while True:
            self._clamp_h()
            h = self._h
            if h <= 16 * np.finfo(float).eps * max(abs(self.t), 1.0):
                raise StiffnessError(
                    f"step size underflow at t={self.t:.6g}; the problem is likely stiff"
                )
            K = np.empty((7,) + self.y.shape, dtype=np.complex128)
            K[0] = self._f0
            for i in range(1, 7):
                a = _A[i]
                yi = self.y + (h * a[0]) * K[0]
                for j in range(1, i):
                    if a[j] != 0.0:
                        yi += (h * a[j]) * K[j]
                K[i] = self._eval(self.t + _C[i] * h, yi)
            y_new = self.y + (h * _B[0]) * K[0]
            for j in range(2, 6):
                y_new += (h * _B[j]) * K[j]
            err_vec = (h * _E[0]) * K[0]
            for j in range(2, 7):
                err_vec += (h * _E[j]) * K[j]
            err = _rms(err_vec / self._scale(self.y, y_new))
            if err <= 1.0:
                # PI controller (accepted): grow within [0.2, 5].
                if err == 0.0:
                    factor = 5.0
                else:
                    factor = min(
                        5.0, max(0.2, 0.9 * err ** (-0.17) * self._err_prev**0.04)
                    )
                seg = DenseSegment(self.t, self.t + h, self.y.copy(), _flatten_stages(K))
                self.t = self.t + h
                self.y = y_new
                self._f0 = K[6]  # FSAL
                self._err_prev = max(err, 1e-4)
                self._h = h * factor
                self.segment = seg
                return seg
            self._h = h * max(0.2, 0.9 * err ** (-0.2))

    def interpolate(self, t: float) -> np.ndarray:
        """Evaluate the solution inside the most recent step."""
        if self.segment is None:
            if t == self.t:
                return self.y.copy()
            raise RuntimeError("no dense segment available yet")
        slack = 1e-9 * max(1.0, abs(self.segment.t_new))
        if not (self.segment.t_old - slack <= t <= self.segment.t_new + slack):
            raise RuntimeError(
                f"t={t} outside the last step [{self.segment.t_old}, {self.segment.t_new}]"
            )
        return self.segment(t)


def _rms(v) -> float:
    v = np.asarray(v)
    if v.size == 0:
        return 0.0
    return float(np.sqrt(np.mean(np.abs(v) ** 2)))


def _flatten_stages(K: np.ndarray) -> np.ndarray:
    # Dense output only needs the stage matrix with flattened state axes.
    return K.reshape(7, -1) if K.ndim > 2 else K


def integrate(rhs, y0, t0: float, t_targets, opts: IntegratorOptions | None = None):
    """Integrate ``y' = rhs(t, y)`` and report ``y`` at each target time.

    Targets must be ascending with ``t_targets[0] >= t0``.  Dense output is
    used to hit the targets without restarting steps.  Returns
    ``(states, final_segment)`` where ``states`` is a list of ndarrays.

    Raises
    ------
    StepLimitError
        More than ``opts.nsteps`` accepted steps were needed between two
        consecutive targets.
    StiffnessError
        The adaptive step size underflowed.
    """
    opts = (opts or IntegratorOptions()).validated()
    t_targets = np.asarray(t_targets, dtype=float)
    if t_targets.size == 0:
        return [], None
    if np.any(np.diff(t_targets) < 0):
        raise ValueError("t_targets must be ascending")
    if t_targets[0] < t0:
        raise ValueError(f"first target {t_targets[0]} precedes t0={t0}")

    y0 = np.asarray(y0, dtype=np.complex128)
    flat = y0.ndim == 1
    stepper = DP54Stepper(
        rhs if flat else _wrap_matrix_rhs(rhs, y0.shape),
        t0,
        y0.reshape(-1) if not flat else y0,
        opts,
        t_end=float(t_targets[-1]),
    )
    out = []
    t_prev = t0
    for target in t_targets:
        count = 0
        eps_t = 4 * np.finfo(float).eps * max(1.0, abs(target))
        while stepper.t < target - eps_t:
            if count >= opts.nsteps:
                raise StepLimitError(
                    f"exceeded {opts.nsteps} steps in output interval [{t_prev:.6g}, {target:.6g}]"
                )
            stepper.step()
            count += 1
        if stepper.segment is None:
            y = stepper.y.copy()
        else:
            y = stepper.interpolate(min(target, stepper.segment.t_new))
        out.append(y if flat else y.reshape(y0.shape))
        t_prev = target
    return out, stepper.segment


def _wrap_matrix_rhs(rhs, shape):
    def wrapped(t, yflat):
        return np.asarray(rhs(t, yflat.reshape(shape)), dtype=np.complex128).reshape(-1)

    return wrapped


def propagate_diag(L, y0, t_targets, t0: float = 0.0):
    """Propagate ``y' = L y`` for constant L by one-time eigendecomposition.

    Returns the states at ``t_targets`` as a list of ndarrays.  Raises
    :class:`MethodError` when L is defective within tolerance (ill-conditioned
    eigenvector matrix); use the adaptive rk45 method in that case.
    """
    mat = L.full() if hasattr(L, "full") else np.asarray(L, dtype=np.complex128)
    if mat.shape[0] != mat.shape[1]:
        raise ValueError("propagate_diag requires a square generator")
    w, v = np.linalg.eig(mat)
    cond = np.linalg.cond(v)
    if not np.isfinite(cond) or cond > 1e12:
        raise MethodError(
            f"generator is defective within tolerance (eigenvector condition {cond:.2e});"
            " use the rk45_adaptive integrator instead"
        )
    y0 = np.asarray(y0, dtype=np.complex128).reshape(-1)
    c = np.linalg.solve(v, y0)
    out = []
    for t in np.asarray(t_targets, dtype=float):
        out.append(v @ (np.exp(w * (t - t0)) * c))
    return out
