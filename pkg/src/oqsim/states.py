"""Factory functions for commonly used quantum states.

All factories return normalized kets or unit-trace density operators.  The
storage format defaults to the global state default (dense) and can be
overridden per call with ``dtype``.
"""

from __future__ import annotations

import math

import numpy as np

from . import data as _d
from .dimensions import Dimensions
from .exceptions import RangeError
from .qobj import Qobj, tensor
from .settings import default_dtype

__all__ = [
    "basis",
    "fock",
    "fock_dm",
    "coherent",
    "coherent_dm",
    "thermal_dm",
    "maximally_mixed_dm",
    "projection",
    "bell_state",
    "singlet_state",
    "triplet_states",
    "ghz_state",
    "w_state",
    "spin_state",
    "spin_coherent",
    "ket_from_string",
    "make_state",
]


def _state_fmt(dtype):
    return dtype or default_dtype("state")


def basis(N: int, n: int = 0, dtype: str | None = None) -> Qobj:
    """Ket |n> in an N-dimensional Hilbert space."""
    if N < 1:
        raise RangeError(f"Hilbert space dimension must be positive, got {N}")
    if not 0 <= n < N:
        raise RangeError(f"state index {n} outside [0, {N})")
    vec = np.zeros((N, 1), dtype=np.complex128)
    vec[n, 0] = 1.0
    return Qobj(_d.from_array(vec, _state_fmt(dtype)), dims=Dimensions([N], [1]))


def fock(N: int, n: int = 0, dtype: str | None = None) -> Qobj:
    """Bosonic Fock state; same as :func:`basis`."""
    return basis(N, n, dtype=dtype)


def fock_dm(N: int, n: int = 0, dtype: str | None = None) -> Qobj:
    psi = basis(N, n)
    return Qobj(psi.proj().to(_state_fmt(dtype)))


def coherent(N: int, alpha: complex, dtype: str | None = None) -> Qobj:
    """Coherent state |alpha> from its normalized Fock expansion.

    The truncated series is renormalized, so the returned ket has unit norm
    even when the truncation N is tight for the given |alpha|.
    """
    if N < 1:
        raise RangeError(f"Hilbert space dimension must be positive, got {N}")
    n = np.arange(N)
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, N, dtype=float)))))
    with np.errstate(divide="ignore"):
        log_amp = n * np.log(complex(alpha)) if alpha != 0 else np.where(n == 0, 0.0, -np.inf)
    amps = np.exp(log_amp - 0.5 * log_fact)
    amps = amps / np.linalg.norm(amps)
    return Qobj(_d.from_array(amps.reshape(-1, 1), _state_fmt(dtype)), dims=Dimensions([N], [1]))


def coherent_dm(N: int, alpha: complex, dtype: str | None = None) -> Qobj:
    psi = coherent(N, alpha)
    return Qobj(psi.proj().to(_state_fmt(dtype)))


def thermal_dm(N: int, nbar: float, dtype: str | None = None) -> Qobj:
    """Thermal density matrix with mean occupation ``nbar``, renormalized over
    the truncated space."""
    if nbar < 0:
        raise RangeError(f"mean occupation must be non-negative, got {nbar}")
    if nbar == 0:
        return fock_dm(N, 0, dtype=dtype)
    n = np.arange(N)
    p = (nbar / (nbar + 1.0)) ** n
    p = p / p.sum()
    return Qobj(_d.from_array(np.diag(p), _state_fmt(dtype)), dims=Dimensions([N], [N]))


def maximally_mixed_dm(N: int, dtype: str | None = None) -> Qobj:
    return Qobj(_d.identity_data(N, _state_fmt(dtype), 1.0 / N), dims=Dimensions([N], [N]))


def projection(N: int, n: int, m: int, dtype: str | None = None) -> Qobj:
    """The operator |n><m| on an N-dimensional space."""
    if not (0 <= n < N and 0 <= m < N):
        raise RangeError(f"projection indices ({n}, {m}) outside [0, {N})")
    arr = np.zeros((N, N), dtype=np.complex128)
    arr[n, m] = 1.0
    return Qobj(_d.from_array(arr, _state_fmt(dtype)), dims=Dimensions([N], [N]))


def ket_from_string(bits: str, dtype: str | None = None) -> Qobj:
    """Computational-basis ket of qubits from a bit string like ``\"01\"``."""
    return tensor([basis(2, int(b), dtype=dtype) for b in bits])


def bell_state(which: str = "00", dtype: str | None = None) -> Qobj:
    """One of the four Bell states, selected by ``'00' | '01' | '10' | '11'``."""
    table = {
        "00": ("00", "11", 1.0),
        "01": ("00", "11", -1.0),
        "10": ("01", "10", 1.0),
        "11": ("01", "10", -1.0),
    }
    if which not in table:
        raise RangeError(f"unknown Bell state label {which!r}")
    a, b, sign = table[which]
    psi = (ket_from_string(a, dtype=dtype) + sign * ket_from_string(b, dtype=dtype)).unit()
    return psi


def singlet_state(dtype: str | None = None) -> Qobj:
    """(|01> - |10>)/sqrt(2)."""
    return bell_state("11", dtype=dtype)


def triplet_states(dtype: str | None = None):
    """The triplet kets [|11>, (|01>+|10>)/sqrt(2), |00>]."""
    return [
        ket_from_string("11", dtype=dtype),
        bell_state("10", dtype=dtype),
        ket_from_string("00", dtype=dtype),
    ]


def ghz_state(n_qubits: int = 3, dtype: str | None = None) -> Qobj:
    if n_qubits < 1:
        raise RangeError("GHZ state needs at least one qubit")
    return (
        ket_from_string("0" * n_qubits, dtype=dtype)
        + ket_from_string("1" * n_qubits, dtype=dtype)
    ).unit()


def w_state(n_qubits: int = 3, dtype: str | None = None) -> Qobj:
    if n_qubits < 1:
        raise RangeError("W state needs at least one qubit")
    out = None
    for k in range(n_qubits):
        bits = ["0"] * n_qubits
        bits[k] = "1"
        term = ket_from_string("".join(bits), dtype=dtype)
        out = term if out is None else out + term
    return out.unit()


def spin_state(j: float, m: float, dtype: str | None = None) -> Qobj:
    """|j, m> as a ket in the 2j+1 dimensional spin space (m descending)."""
    twoj = int(round(2 * j))
    idx = int(round(j - m))
    if twoj < 0 or not 0 <= idx <= twoj:
        raise RangeError(f"invalid spin quantum numbers j={j}, m={m}")
    return basis(twoj + 1, idx, dtype=dtype)


def spin_coherent(j: float, theta: float, phi: float, dtype: str | None = None) -> Qobj:
    """Spin coherent state: rotation of the highest-weight state |j, j>.

    Defined as ``exp(-i theta (Jx sin(phi) - Jy cos(phi))) |j, j>``.
    """
    from .operators import jmat

    rot = (-1j * theta * (jmat(j, "x") * math.sin(phi) - jmat(j, "y") * math.cos(phi))).expm()
    psi = rot @ spin_state(j, j)
    return Qobj(psi.to(_state_fmt(dtype)))


_STATE_KINDS = {
    "basis": basis,
    "fock": fock,
    "fock_dm": fock_dm,
    "coherent": coherent,
    "coherent_dm": coherent_dm,
    "thermal_dm": thermal_dm,
    "maximally_mixed_dm": maximally_mixed_dm,
    "projection": projection,
    "bell_state": bell_state,
    "singlet_state": singlet_state,
    "triplet_states": triplet_states,
    "ghz_state": ghz_state,
    "w_state": w_state,
    "spin_state": spin_state,
    "spin_coherent": spin_coherent,
    "ket": ket_from_string,
}


def make_state(kind: str, *args, **kwargs) -> Qobj:
    """Dispatch to a state factory by name."""
    try:
        fn = _STATE_KINDS[kind]
    except KeyError:
        raise RangeError(f"unknown state kind {kind!r}") from None
    return fn(*args, **kwargs)
