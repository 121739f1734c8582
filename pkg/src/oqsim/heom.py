"""Hierarchical equations of motion over auxiliary density operators.

For each bath exponent the hierarchy carries one non-negative integer index;
the stack of all multi-indices ``n`` with ``sum n_jk <= N_c`` evolves under

    d rho^n/dt = -i[H, rho^n] - (sum_jk n_jk v_jk) rho^n
                 - i sum_jk [Q_j, rho^(n_jk +)]
                 - i sum_(real k) n_jk cR_jk [Q_j, rho^(n_jk -)]
                 + sum_(imag k) n_jk cI_jk {Q_j, rho^(n_jk -)}

in column-stacked form.  The bracket structure of the down-coupling terms
(commutator for the real-part exponents, anticommutator for the
imaginary-part ones) is the one validated by the exact pure-dephasing
solution; see the package README for a note on the convention.
"""

from __future__ import annotations

import math
import time
from itertools import combinations_with_replacement

import numpy as np
import scipy.sparse as sp

from . import data as _d
from .dimensions import Dimensions
from .environment import BosonicEnvironment, ExponentSet, matsubara_decompose
from .exceptions import DimensionMismatchError, NotHermitianError, RangeError
from .qobj import Qobj
from .qobjevo import QobjEvo
from .result import SolveResult, normalize_e_ops
from .solver import SolverOptions
from .integrator import DP54Stepper
from .superop import spost, spre

__all__ = ["AdoIndexSet", "HEOMResult", "hierarchy_build", "heomsolve", "heom_cutoff_hint"]


class AdoIndexSet:
    """Enumeration of hierarchy multi-indices with ``sum(n) <= cutoff``.

    Ordering is graded lexicographic (total excitation first, then
    lexicographic), so index 0 is the zero multi-index -- the system density
    matrix -- and each truncation level is a contiguous prefix.
    """

    def __init__(self, n_exponents: int, cutoff: int):
        if cutoff < 0:
            raise RangeError("hierarchy cutoff must be non-negative")
        if n_exponents < 0:
            raise RangeError("exponent count must be non-negative")
        self.n_exponents = n_exponents
        self.cutoff = cutoff
        labels = []
        for total in range(cutoff + 1):
            labels.extend(sorted(_compositions(total, n_exponents)))
        self.labels = labels
        self._index = {lab: i for i, lab in enumerate(labels)}

    def __len__(self):
        return len(self.labels)

    def index(self, label) -> int:
        return self._index[tuple(label)]

    def up(self, label, k: int):
        """Multi-index with entry k raised, or None when it leaves the cutoff."""
        if sum(label) + 1 > self.cutoff:
            return None
        out = list(label)
        out[k] += 1
        return tuple(out)

    def down(self, label, k: int):
        """Multi-index with entry k lowered, or None when already zero."""
        if label[k] == 0:
            return None
        out = list(label)
        out[k] -= 1
        return tuple(out)


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` non-negative ints summing to ``total``."""
    if parts == 0:
        return [()] if total == 0 else []
    out = []
    for slots in combinations_with_replacement(range(parts), total):
        lab = [0] * parts
        for s in slots:
            lab[s] += 1
        out.append(tuple(lab))
    return out


class HEOMResult(SolveResult):
    """SolveResult plus access to the final auxiliary-density-operator stack."""

    def __init__(self, *args, final_ados=None, ado_index=None, **kwargs):
        super().__init__(*args, **kwargs)
        self.final_ados = final_ados
        self.ado_index = ado_index


def _exponent_records(exps: ExponentSet):
    recs = [("R", c, v) for c, v in zip(exps.ck_real, exps.vk_real)]
    recs += [("I", c, v) for c, v in zip(exps.ck_imag, exps.vk_imag)]
    return recs


def _build_generator(H: Qobj, couplings, n_c: int):
    """Assemble the sparse hierarchy generator for [(Q, exponent records)...]."""
    d = H.shape[0]
    d2 = d * d
    records = []
    per_bath_ops = []
    for Q, recs in couplings:
        if Q.dims != H.dims:
            raise DimensionMismatchError("coupling operator dims do not match H")
        if not Q.isherm:
            raise NotHermitianError("HEOM coupling operators must be Hermitian")
        comm = sp.csr_matrix((spre(Q) - spost(Q)).data.scipy_matrix())
        anti = sp.csr_matrix((spre(Q) + spost(Q)).data.scipy_matrix())
        for kind, c, v in recs:
            records.append((kind, c, v))
            per_bath_ops.append((comm, anti))

    ados = AdoIndexSet(len(records), n_c)
    n_ado = len(ados)

    from .superop import liouvillian

    L_sys = sp.csr_matrix(liouvillian(H, ()).data.scipy_matrix())
    eye = sp.identity(d2, dtype=np.complex128, format="csr")

    rows, cols, vals = [], [], []

    def put(a: int, b: int, block):
        block = block.tocoo()
        rows.append(block.row + a * d2)
        cols.append(block.col + b * d2)
        vals.append(block.data)

    rates = np.array([v for _, _, v in records])
    for a, label in enumerate(ados.labels):
        damp = complex(np.dot(np.asarray(label, dtype=float), rates)) if records else 0.0
        put(a, a, L_sys - damp * eye)
        for k, (kind, c, v) in enumerate(records):
            comm, anti = per_bath_ops[k]
            up = ados.up(label, k)
            if up is not None:
                put(a, ados.index(up), -1j * comm)
            down = ados.down(label, k)
            if down is not None:
                n_k = label[k]
                if kind == "R":
                    put(a, ados.index(down), (-1j * n_k * c) * comm)
                else:
                    put(a, ados.index(down), (n_k * c) * anti)

    size = n_ado * d2
    gen = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, size),
    ).tocsr()
    return _d.DataMatrix(gen, "csr"), ados


def hierarchy_build(H: Qobj, Q: Qobj, exps: ExponentSet, n_c: int):
    """Hierarchy generator for a single bath: ``(generator, AdoIndexSet)``.

    The generator is a CSR DataMatrix over the stacked vec-space of all ADOs;
    its stack dimension is ``d^2 * binomial(n_c + N, n_c)`` with
    ``N = n_real + n_imag``.
    """
    return _build_generator(H, [(Q, _exponent_records(exps))], n_c)


def heom_cutoff_hint(exps: ExponentSet, w_s: float) -> int:
    """Heuristic lower bound for the hierarchy cutoff: ceil(w_s / min Re v)."""
    if w_s <= 0:
        raise RangeError("the system frequency must be positive")
    rates = np.concatenate([exps.vk_real, exps.vk_imag])
    if rates.size == 0:
        raise RangeError("exponent set is empty")
    return int(math.ceil(w_s / float(np.min(rates.real))))


def heomsolve(
    H: Qobj,
    baths,
    rho0: Qobj,
    tlist,
    n_c: int,
    e_ops=None,
    n_k: int = 5,
    options=None,
) -> HEOMResult:
    """Integrate the HEOM for one or more bosonic baths.

    ``baths`` is a ``(bath, Q)`` pair or a list of them, where each bath is an
    :class:`ExponentSet` or a :class:`BosonicEnvironment` (decomposed with
    ``n_k`` Matsubara terms).  Expectation values are taken on the level-0
    slice of the stack.
    """
    t_start = time.perf_counter()
    if isinstance(H, QobjEvo):
        if not H.isconstant:
            raise DimensionMismatchError("heomsolve supports time-independent H only")
        H = H(0.0)
    if isinstance(baths, tuple) and len(baths) == 2 and not isinstance(baths[0], (list, tuple)):
        baths = [baths]
    couplings = []
    for bath, Q in baths:
        if isinstance(bath, BosonicEnvironment):
            bath = matsubara_decompose(bath, n_k)
        if not isinstance(bath, ExponentSet):
            raise TypeError("each bath must be an ExponentSet or BosonicEnvironment")
        couplings.append((Q, _exponent_records(bath)))

    gen, ados = _build_generator(H, couplings, n_c)
    mat = gen.scipy_matrix()
    d = H.shape[0]
    d2 = d * d

    if rho0.isket:
        rho0 = rho0.proj()
    if rho0.dims.ket != H.dims.ket:
        raise DimensionMismatchError("initial state dims do not match H")

    opts = SolverOptions.coerce(options)
    tlist = np.asarray(tlist, dtype=float)
    labels, ops = normalize_e_ops(e_ops)
    e_rows = [op.full().flatten(order="C") for op in ops]
    real_flags = [op.isherm for op in ops]
    store_states = opts.store_states if opts.store_states is not None else not ops

    y0 = np.zeros(len(ados) * d2, dtype=np.complex128)
    y0[:d2] = rho0.full().flatten(order="F")

    def rhs(t, y):
        return mat @ y

    stepper = DP54Stepper(rhs, float(tlist[0]), y0, opts.integrator, float(tlist[-1]))
    expect_out = [np.empty(tlist.size, dtype=complex) for _ in e_rows]
    states = [] if store_states else None
    dm_dims = Dimensions(rho0.dims.ket, rho0.dims.bra)

    from .exceptions import StepLimitError

    y = y0
    for j, target in enumerate(tlist):
        count = 0
        eps_t = 4 * np.finfo(float).eps * max(1.0, abs(target))
        while stepper.t < target - eps_t:
            if count >= opts.integrator.nsteps:
                raise StepLimitError(f"exceeded {opts.integrator.nsteps} steps before t={target:.6g}")
            stepper.step()
            count += 1
        y = stepper.y if stepper.segment is None else stepper.interpolate(
            min(target, stepper.segment.t_new)
        )
        level0 = y[:d2]
        for series, row in zip(expect_out, e_rows):
            series[j] = complex(row @ level0)
        if store_states:
            states.append(Qobj(level0.reshape((d, d), order="F"), dims=dm_dims))

    expect_final = [s.real if flag else s for s, flag in zip(expect_out, real_flags)]
    final_state = states[-1] if states else Qobj(
        np.asarray(y)[:d2].reshape((d, d), order="F"), dims=dm_dims
    )
    return HEOMResult(
        tlist,
        labels,
        expect_final,
        states=states,
        final_state=final_state,
        stats={
            "solver": "heomsolve",
            "n_ados": len(ados),
            "rhs_evaluations": stepper.nfev,
            "run_time": time.perf_counter() - t_start,
        },
        final_ados=np.asarray(y).reshape(len(ados), d2),
        ado_index=ados,
    )
