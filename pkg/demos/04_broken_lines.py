"""Broken lines: partial-sum paths, Wiener interpolants, bridge refinement.

Normalized partial sums and Wiener increments both live here as piecewise
linear paths on the grid k/n.  Brownian-bridge refinement inserts exact
conditional Gaussians between the knots, which is how the sup-distance
between a Wiener path and its broken-line interpolant gets Monte Carlo'd and
checked against the explicit tail bound n E|Z|^3 / (sqrt(n) b)^3.
"""

import numpy as np

from robustclt import (
    basis_e,
    bridge_exceedance_mc,
    build_sn_classical,
    maximal_ineq_bound,
    refine_wiener,
    simulate_wiener_broken,
    sup_norm_distance,
)

rng = np.random.default_rng(42)

xs = rng.uniform(-1.7320508, 1.7320508, size=16)
sn = build_sn_classical(xs, mu=0.0, sigma=1.0)
bn = simulate_wiener_broken(16, rng)
print("S_16 endpoint:", sn.knots[-1], " B_16 endpoint:", bn.knots[-1])
print("sup-norm distance S_16 vs B_16:", sup_norm_distance(sn, bn))

t = np.linspace(0, 1, 9)
print("\nramp basis e_3 on a coarse grid:", np.round(basis_e(3, 8, t), 3))
tele = sum(np.abs(basis_e(k, 8, t) - basis_e(k + 1, 8, t)) for k in range(9))
print("telescoping sum (max over t)   :", tele.max(), " (never exceeds 1)")

fine = refine_wiener(bn, 8, rng)
print("\nbridge refinement: coarse n =", bn.n, "-> fine n =", fine.n)
print("coarse knots preserved:", np.allclose(fine.knots[::8], bn.knots))

print("\nbridge-deviation tails vs the explicit bound (10^4 paths, depth 16):")
print(f"{'n':>4} {'b':>5} {'MC estimate':>12} {'3*SE':>9} {'bound':>9}")
for n in (4, 16):
    est = bridge_exceedance_mc(n, [0.5, 1.0], 10_000, depth=16, rng=rng)
    for b, (p, se) in est.items():
        print(f"{n:4d} {b:5.2f} {p:12.5f} {3*se:9.5f} {maximal_ineq_bound(n, b, 3.0):9.4f}")
