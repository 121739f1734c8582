"""Lindblad dynamics three ways: local, global (dressed) and Bloch-Redfield.

Two resonant qubits with an exchange coupling decay into independent
zero-temperature baths.  At weak qubit-qubit coupling a local Lindblad
description is fine; at strong coupling only the dressed-basis descriptions
satisfy detailed balance, and the local master equation relaxes to the wrong
steady state.
"""

import numpy as np

import oqsim as q

eps, gamma = 1.0, 0.1
I2 = q.qeye(2)
sz1 = q.sigmaz() & I2
sx1, sx2 = q.sigmax() & I2, I2 & q.sigmax()
sm1, sm2 = q.sigmam() & I2, I2 & q.sigmam()
psi0 = q.basis(2, 0) & q.basis(2, 0)
tlist = np.linspace(0, 40, 201)


def spectrum(w):
    """Flat zero-temperature bath: J = gamma/2, S(w) = gamma for w > 0."""
    return gamma if w > 0 else (gamma / 2 if w == 0 else 0.0)


def dressed_collapse_ops(H):
    w, kets = H.eigenstates()
    ops = []
    for A in (sx1, sx2):
        for i in range(4):
            for j in range(4):
                rate = abs((kets[i].dag() @ A @ kets[j]).full()[0, 0]) ** 2 * spectrum(
                    w[j] - w[i]
                )
                if rate > 1e-14:
                    ops.append(np.sqrt(rate) * (kets[i] @ kets[j].dag()))
    return ops


for g in (0.1 * eps, 2.0 * eps):
    H = 0.5 * eps * (q.sigmaz() & I2) + 0.5 * eps * (I2 & q.sigmaz()) + g * (
        q.sigmax() & q.sigmax()
    )
    local = q.mesolve(H, psi0, tlist, c_ops=[np.sqrt(gamma) * sm1, np.sqrt(gamma) * sm2],
                      e_ops=[sz1])
    dressed = q.mesolve(H, psi0, tlist, c_ops=dressed_collapse_ops(H), e_ops=[sz1])
    redfield = q.brmesolve(H, [(sx1, spectrum), (sx2, spectrum)], psi0, tlist,
                           e_ops=[sz1], sec_cutoff=0.1)

    print(f"\ng = {g:.1f} eps")
    print("  local vs dressed  max dev:", np.max(np.abs(local.expect[0] - dressed.expect[0])))
    print("  dressed vs BR     max dev:", np.max(np.abs(dressed.expect[0] - redfield.expect[0])))

    _, ground = H.groundstate()
    rho_ss_dressed = q.steadystate(H, dressed_collapse_ops(H))
    rho_ss_local = q.steadystate(H, [np.sqrt(gamma) * sm1, np.sqrt(gamma) * sm2])
    print("  ground-state overlap: dressed", round(q.expect(ground.proj(), rho_ss_dressed), 4),
          "| local", round(q.expect(ground.proj(), rho_ss_local), 4))

# A master equation that is not in Lindblad form can be passed as a manually
# built superoperator; here the ordinary Lindbladian, built by hand.
H = 0.5 * eps * q.sigmaz()
c = np.sqrt(gamma) * q.sigmam()
L = -1j * (q.spre(H) - q.spost(H)) + q.sprepost(c, c.dag()) \
    - 0.5 * q.spre(c.dag() @ c) - 0.5 * q.spost(c.dag() @ c)
res = q.mesolve(L, q.basis(2, 0).proj(), np.linspace(0, 20, 11), e_ops=[q.sigmaz()])
print("\nmanual Liouvillian decay tail:", np.round(res.expect[0][-3:], 5))
