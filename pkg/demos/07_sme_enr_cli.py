"""Homodyne monitoring, restricted excitation spaces, and the batch runner.

smesolve conditions a cavity state on a continuous homodyne record; ENR
spaces compress excitation-conserving problems; and the oqsim CLI runs the
same solvers from declarative YAML files.
"""

import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

import oqsim as q

# --- stochastic master equation -------------------------------------------
kappa = 1.0
N = 16
a = q.destroy(N)
H = 10 * np.pi * kappa * (a.dag() @ a)
x = a + a.dag()
psi0 = q.coherent(N, 2.0)
tlist = np.linspace(0, 1.0, 101)

res = q.smesolve(H, psi0, tlist, sc_ops=[np.sqrt(kappa) * a], e_ops=[x],
                 options={"ntraj": 20, "seed": 5})
ref = q.mesolve(H, psi0, tlist, c_ops=[np.sqrt(kappa) * a], e_ops=[x])
print("trajectory-averaged <x> vs mesolve, max dev:",
      round(float(np.max(np.abs(res.expect[0] - ref.expect[0]))), 4))
J = np.mean([rec[0] for rec in res.measurements], axis=0)
print("homodyne record mean (first bins):", np.round(J[:5], 3))

# --- excitation number restricted states -----------------------------------
C = 10
space = q.enr_space([2, C], 1)
print(f"\nENR space [2, {C}] with one excitation: {space.size} states "
      f"(full product space: {2 * C})")
a_qb, a_cav = q.enr_destroy([2, C], 1)
H_jc = a_qb.dag() @ a_qb + a_cav.dag() @ a_cav + 0.1 * (
    (a_qb.dag() @ a_cav) + (a_cav.dag() @ a_qb)
)
res = q.sesolve(H_jc, q.enr_fock([2, C], 1, (1, 0)), np.linspace(0, 40, 9),
                e_ops=[a_qb.dag() @ a_qb])
print("vacuum Rabi oscillation:", np.round(res.expect[0], 3))

# --- batch CLI ---------------------------------------------------------------
model = """
parameters: {eps: 1.0, gamma: 0.25}
hamiltonian:
  - op: "0.5*eps*sigmaz"
c_ops:
  - op: "sqrt(gamma)*sigmam"
initial_state: "basis(2,0)"
tlist: {start: 0.0, stop: 10.0, num: 6}
e_ops:
  - {label: sz, op: "sigmaz"}
solver: mesolve
"""
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "decay.yaml"
    path.write_text(model)
    out = subprocess.run(
        [sys.executable, "-m", "oqsim.cli", "run", str(path)],
        capture_output=True, text=True, check=True,
    )
    print("\nCLI output:")
    print(out.stdout)
