"""Floquet propagation and steady-state solvers.

For a periodically driven two-level system the propagator over one period
fixes quasienergies and Floquet modes; states at stroboscopic times then cost
a couple of phase factors instead of a long integration.  Steady states of
master equations come from direct null-space solves, inverse power iteration
or an SVD.
"""

import numpy as np

import oqsim as q

two_pi = 2 * np.pi
eps, Delta, A, wd = two_pi, 0.2 * two_pi, 2.5 * two_pi, two_pi
T = two_pi / wd

H = q.QobjEvo([
    -0.5 * eps * q.sigmaz() - 0.5 * Delta * q.sigmax(),
    (0.5 * A * q.sigmax(), lambda t: np.sin(wd * t)),
])

fb = q.floquet_basis(H, T, n_t=128)
print("quasienergies (zone (-pi/T, pi/T]):", np.round(fb.quasienergies, 6))

psi0 = q.basis(2, 0)
stroboscopic = np.arange(0, 51) * T
r_f = q.fsesolve(fb, psi0, stroboscopic, e_ops=[q.sigmaz()])
r_s = q.sesolve(H, psi0, stroboscopic, e_ops=[q.sigmaz()],
                options={"atol": 1e-12, "rtol": 1e-11})
print("fsesolve vs sesolve at t = nT, max dev:",
      np.max(np.abs(r_f.expect[0] - r_s.expect[0])))

# Between grid points the modes are interpolated linearly.
dense_times = np.linspace(0, 3 * T, 20)
r_mid = q.fsesolve(fb, psi0, dense_times, e_ops=[q.sigmaz()])
print("<sz> over three periods:", np.round(r_mid.expect[0][:7], 4))

# Steady states: a driven, damped cavity in the thermal regime.
N, nbar, kappa = 15, 2.0, 1.0
a = q.destroy(N)
Hc = a.dag() @ a
c_ops = [np.sqrt(kappa * (nbar + 1)) * a, np.sqrt(kappa * nbar) * a.dag()]
for method in ("direct", "power", "svd"):
    rho = q.steadystate(Hc, c_ops, method=method)
    print(f"steadystate[{method:6s}] <n> =", round(q.expect(a.dag() @ a, rho), 10))

# Cross-check against brute-force time evolution.
rho_t = q.mesolve(Hc, q.basis(N, 0), [0, 50 / kappa], c_ops=c_ops,
                  options={"atol": 1e-10, "rtol": 1e-9}).states[-1]
rho_ss = q.steadystate(Hc, c_ops)
print("|rho(50/kappa) - rho_ss| max:", np.max(np.abs(rho_t.full() - rho_ss.full())))
