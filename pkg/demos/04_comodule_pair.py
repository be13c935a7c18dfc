"""Two particles glued by a deformed Schroedinger coaction.

Run: python3 demos/04_comodule_pair.py
"""

import numpy as np

from koalint import comodule as cm
from koalint import numkit as nk
from koalint import verify as v

p = cm.ComoduleParams(sigma=0.1)
H, C = cm.h_sigma_2(p), cm.c_sigma_2(p)
acc = cm.sampling_accept(p)

rep = v.check_conservation(H, [C], accept=acc)[0]
print(f"{{H_sigma, C_sigma}} over 100 points: {rep.max_scaled:.1e}")

wrong = cm.c_sigma_2_printed(p)
x = np.array([1.2, -0.7, 0.4, 0.9])
print(f"{{H_sigma, phi(D)^2/4 - phi(H)}} at one point: {nk.poisson_bracket(H, wrong, x):.3f} (not conserved)")

print("\nApproach to the undeformed pair:")
zero = cm.ComoduleParams(0.0)
for s in (0.1, 1e-2, 1e-3, 0.0):
    ps = cm.ComoduleParams(s)
    dh = abs(cm.h_sigma_2(ps)(x) - cm.h_sigma_limit(zero)(x))
    dc = abs(cm.c_sigma_2(ps)(x) - cm.c_sigma_limit(zero)(x))
    print(f"  sigma={s:<6g} |dH|={dh:.2e}  |dC|={dc:.2e}")
print(f"\nRank of {{H_sigma, C_sigma}}: {v.independence_rank([H, C], accept=acc).median_rank}")
