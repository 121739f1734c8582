"""Floquet basis for time-periodic Hamiltonians and the stroboscopic solver.

For ``H(t + T) = H(t)`` the propagator over one period determines quasienergies
(folded into ``(-pi/T, pi/T]``) and periodic Floquet modes; states at any later
time follow from one period of integration plus phase factors.
"""

from __future__ import annotations

import numpy as np

from .dimensions import Dimensions
from .exceptions import DimensionMismatchError
from .integrator import IntegratorOptions, integrate
from .qobj import Qobj
from .qobjevo import QobjEvo
from .result import SolveResult, normalize_e_ops

__all__ = ["FloquetBasis", "floquet_basis", "fsesolve"]


class FloquetBasis:
    """Quasienergies and Floquet modes tabulated on one period.

    Attributes
    ----------
    T : float
        Driving period.
    n_steps : int
        Number of time steps the period is discretized into (the mode table
        holds ``n_steps + 1`` points including both endpoints).
    quasienergies : ndarray
        Ascending, folded into ``(-pi/T, pi/T]``.
    modes : ndarray, shape (n_steps + 1, dim, dim)
        ``modes[j][:, k]`` is the k-th Floquet mode at grid time ``j T / n_steps``.
    propagator : ndarray
        ``U(T, 0)``.
    """

    def __init__(self, T, grid, quasienergies, modes, propagator, dims):
        self.T = float(T)
        self.grid = grid
        self.n_steps = len(grid) - 1
        self.quasienergies = quasienergies
        self.modes = modes
        self.propagator = propagator
        self.dims = dims

    def mode_at(self, t: float) -> np.ndarray:
        """Mode matrix at time ``t`` (reduced mod T, linear between grid points)."""
        tau = t - self.T * np.floor(t / self.T)
        # Guard the wrap: a stroboscopic time can land a rounding error below T.
        if tau >= self.T:
            tau -= self.T
        x = tau / (self.T / self.n_steps)
        j0 = min(int(np.floor(x)), self.n_steps - 1)
        frac = x - j0
        return (1.0 - frac) * self.modes[j0] + frac * self.modes[j0 + 1]

    def expand(self, psi0: Qobj) -> np.ndarray:
        """Expansion coefficients of ``psi0`` in the t=0 Floquet modes."""
        return np.linalg.solve(self.modes[0], psi0.full().ravel())

    def state_at(self, t: float, coeffs: np.ndarray) -> np.ndarray:
        phases = np.exp(-1j * self.quasienergies * t)
        return self.mode_at(t) @ (coeffs * phases)


def floquet_basis(H, T: float, n_t: int = 64, options: IntegratorOptions | None = None) -> FloquetBasis:
    """Compute the Floquet basis of a T-periodic Hamiltonian.

    The propagator is integrated over one period (the caller is responsible
    for ``H(t + T) = H(t)``); its eigenphases give the quasienergies and its
    eigenvectors the modes at t = 0, which are then propagated across an
    ``n_t``-step grid covering the period.
    """
    if n_t < 2:
        raise ValueError("need at least two grid steps per period")
    H_evo = H if isinstance(H, QobjEvo) else QobjEvo(H)
    if H_evo.shape[0] != H_evo.shape[1]:
        raise DimensionMismatchError("Hamiltonian must be square")
    dim = H_evo.shape[0]
    opts = options or IntegratorOptions(atol=1e-12, rtol=1e-12)

    grid = np.linspace(0.0, T, n_t + 1)
    eye = np.eye(dim, dtype=np.complex128)

    def rhs(t, u):
        return H_evo.matvec(t, u.reshape(dim, dim)).reshape(-1) * (-1j)

    us, _ = integrate(rhs, eye.reshape(-1), 0.0, grid, opts)
    props = [u.reshape(dim, dim) for u in us]
    U_T = props[-1]

    eta, phi0 = np.linalg.eig(U_T)
    eps = -np.angle(eta) / T  # in [-pi/T, pi/T)
    two_pi_over_T = 2 * np.pi / T
    eps = np.where(eps <= -np.pi / T + 1e-15, eps + two_pi_over_T, eps)
    order = np.argsort(eps)
    eps = eps[order]
    phi0 = phi0[:, order]
    phi0 = phi0 / np.linalg.norm(phi0, axis=0, keepdims=True)

    modes = np.empty((n_t + 1, dim, dim), dtype=np.complex128)
    for j, (tj, Uj) in enumerate(zip(grid, props)):
        modes[j] = (Uj @ phi0) * np.exp(1j * eps * tj)[None, :]

    return FloquetBasis(T, grid, eps, modes, U_T, H_evo.dims)


def fsesolve(fb: FloquetBasis, psi0: Qobj, tlist, e_ops=None) -> SolveResult:
    """Closed-system evolution reconstructed from a Floquet basis.

    ``psi(t) = sum_a c_a exp(-i eps_a t) Phi_a(t mod T)`` with coefficients
    fixed by the initial state.  Times must be non-negative.
    """
    if not psi0.isket:
        raise DimensionMismatchError("fsesolve needs a ket initial state")
    if psi0.dims.ket != fb.dims.ket:
        raise DimensionMismatchError("initial state dims do not match the Floquet basis")
    tlist = np.asarray(tlist, dtype=float)
    if np.any(tlist < 0):
        raise ValueError("fsesolve times must be non-negative")

    coeffs = fb.expand(psi0)
    labels, ops = normalize_e_ops(e_ops)
    mats = [op.data.scipy_matrix() for op in ops]
    real_flags = [op.isherm for op in ops]
    expect_out = [np.empty(tlist.size, dtype=complex) for _ in ops]
    store_states = not ops
    states = [] if store_states else None
    ket_dims = Dimensions(fb.dims.ket, [1] * len(fb.dims.ket))

    for j, t in enumerate(tlist):
        psi = fb.state_at(t, coeffs)
        for series, m in zip(expect_out, mats):
            series[j] = complex(np.vdot(psi, m @ psi))
        if store_states:
            states.append(Qobj(psi.reshape(-1, 1), dims=ket_dims))

    expect_final = [s.real if flag else s for s, flag in zip(expect_out, real_flags)]
    final_state = states[-1] if states else None
    return SolveResult(
        tlist,
        labels,
        expect_final,
        states=states,
        final_state=final_state,
        stats={"solver": "fsesolve"},
    )
