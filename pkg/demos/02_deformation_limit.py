"""Deforming the chain: long-range exponential couplings that fade as z -> 0.

Run: python3 demos/02_deformation_limit.py
"""

import numpy as np

from koalint import sl2_core as c
from koalint import sl2_deformed as d
from koalint import verify as v

base = c.Sl2Params(3, 1.0, (1.0, 1.0, 1.0))
x = np.array([1.1, -0.7, 1.4, 0.3, 0.8, -0.5])

print("C_z(3) at one point as z shrinks, against the undeformed C(3):")
ref = c.left_integral(base, 3)(x)
for z in (0.3, 0.1, 1e-2, 1e-3, 1e-4, 0.0):
    val = d.deformed_left_integral(d.DeformedParams(base, z), 3)(x)
    print(f"  z={z:<7g} C_z={val: .12f}  diff={abs(val - ref):.3e}")

rep = v.check_limit_order(
    lambda z: d.deformed_left_integral(d.DeformedParams(base, z), 3), c.left_integral(base, 3), (1e-2, 1e-3, 1e-4, 0.0)
)
print(f"\nFitted convergence order {rep.order:.3f}; difference at z=0 is {rep.zero_diff}")

D = d.DeformedParams(base, 0.3)
H = d.deformed_sw_hamiltonian(D)
ints = [d.deformed_left_integral(D, 2), d.deformed_left_integral(D, 3), d.deformed_right_integral(D, 2)]
print("\nDeformed integrals stay conserved at z = 0.3:")
for r in v.check_conservation(H, ints):
    print(f"  {{H_z, {r.labels[1]}}}  {r.max_scaled:.1e}")
