"""Following trajectories and watching the integrals stay put.

Run: python3 demos/05_trajectories.py
"""

import math

import numpy as np

from koalint import sl2_core as c
from koalint import sl2_deformed as d
from koalint import numkit as nk
from koalint.dynamics import drift_report, integrate

osc = c.sw_hamiltonian(c.Sl2Params(1, 1.0))
print("rk4 on q' = 2p, p' = -2q over one period:")
prev = None
for dt in (0.04, 0.02, 0.01, 0.005):
    err = np.abs(integrate(osc, [1.0, 0.0], math.pi, dt).states[-1] - [1.0, 0.0]).max()
    print(f"  dt={dt:<6g} error={err:.3e}" + (f"  ratio={prev / err:.1f}" if prev else ""))
    prev = err

D = d.DeformedParams.make(3, 1.0, (1.0, 1.0, 1.0), 0.2)
H = d.deformed_sw_hamiltonian(D)
ints = [H, d.deformed_left_integral(D, 2), d.deformed_left_integral(D, 3), d.deformed_right_integral(D, 2)]
traj = integrate(H, [1.0, -0.7, 1.3, 0.2, 0.4, -0.3], 10.0, 0.05, "adaptive")
print(f"\nDeformed chain, adaptive 8th-order pair, {traj.meta['nfev']} evaluations:")
for k, val in drift_report(traj, ints + [nk.position(3, 1)]).items():
    print(f"  drift of {k:<16} {val:.2e}")
