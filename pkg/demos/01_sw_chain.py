"""The N-site SW chain: two towers of integrals and how many are independent.

Run: python3 demos/01_sw_chain.py
"""

from koalint import sl2_core as c
from koalint import verify as v

N = 4
P = c.Sl2Params(N, omega2=1.0, b=(1.0, 0.5, 2.0, 1.0))
H = c.sw_hamiltonian(P)
C = [c.left_integral(P, m) for m in range(2, N + 1)]
I = [c.right_integral(P, m) for m in range(2, N + 1)]

print("Every integral Poisson-commutes with H (scaled residual over 100 points):")
for r in v.check_conservation(H, C + I):
    print(f"  {{H, {r.labels[1]}}}  {r.max_scaled:.1e}")

print("\nWithin a tower the integrals commute; across towers only when the site")
print("windows are disjoint or nested:")
rep = v.check_involution(C + I, n_points=20)
for r in rep.pairs:
    if r.labels[0].startswith("C") and r.labels[1].startswith("I"):
        print(f"  {r.labels[0]:>5} vs {r.labels[1]:<5} {'commute' if r.passed else 'do NOT commute'}")

base = [H, *C, *I[:-1]]
print(f"\nRank of {{H, C(2..{N}), I(2..{N - 1})}}: {v.independence_rank(base).median_rank} (= 2N-2)")
M1 = c.liouville_integral(P, 1)
print(f"Adding the one-site integral M1:  {v.independence_rank(base + [M1]).median_rank} (= 2N-1, maximal)")
print(f"C({N}) and I({N}) agree pointwise: {v.check_left_right([P])[0].passed}")
