"""Tour of quantum objects and the multi-format data layer.

States and operators are Qobj instances: a complex matrix tagged with a
storage format (dense / csr / dia) plus subsystem dimensions.  Mixed-format
arithmetic converts automatically and the result format follows the
denser operand.
"""

import numpy as np

import oqsim as q

# Operators default to sparse CSR, states to dense.
sz = q.sigmaz()
print("sigmaz:", sz.dtype, sz.kind, sz.dims.as_list())
print(sz.full().real)

# The & operator is the tensor product; dims track the composite structure.
H = 0.5 * (q.sigmaz() & q.qeye(2)) + 0.5 * (q.qeye(2) & q.sigmaz()) + 0.1 * (
    q.sigmax() & q.sigmax()
)
print("\ntwo-qubit H:", H.dims.as_list(), "dtype:", H.dtype)

# Conversion between formats is lossless; mixed-format products just work.
H_dense = H.to("dense")
H_dia = H.to("dia")
print("round trip exact:", np.array_equal(H_dense.full(), H_dia.full()))

psi = q.basis(2, 0) & q.basis(2, 1)          # |e g>
print("matvec (csr @ dense ket):", (H @ psi).dtype)

# Spectral tools run on any format.
evals, ekets = H.eigenstates()
print("\neigenvalues:", np.round(evals, 6))
print("ground state overlap with |gg>:",
      abs((q.basis(2, 1) & q.basis(2, 1)).overlap(ekets[0])) ** 2)

# Coherent states, displacement operators, Fock bookkeeping.
alpha = 1.0
vac = q.basis(20, 0)
psi_coh = q.displace(20, alpha) @ vac
print("\ndisplace|0> vs coherent():",
      np.max(np.abs(psi_coh.full() - q.coherent(20, alpha).full())))
n = np.arange(8)
print("Poisson weights |<n|alpha>|^2:", np.round(np.abs(psi_coh.full().ravel()[:8]) ** 2, 4))

# Entanglement measures on a Bell state.
bell = q.bell_state("00")
print("\nconcurrence(B00) =", q.concurrence(bell.proj()))
print("negativity(B00)  =", q.negativity(bell.proj()))
print("vn entropy of reduced state =", q.entropy_vn(q.ptrace(bell, [0])), "(ln 2 =", np.log(2), ")")
