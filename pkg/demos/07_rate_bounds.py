"""Every explicit-constant rate bound, tabulated across n.

Bounds above 1 are vacuous for probability differences; the table makes the
regimes visible.  The truncated moments feeding the bounds come from the
scenario family itself.
"""

import math

from robustclt import (
    c2,
    classical_fclt_bound,
    cor1_bound,
    cor2_bound,
    gamma_p_sup,
    kp_lower,
    moment_envelope,
    parse_family,
    pi_bar_bound,
    thm1_b22_bound,
    thm1_bound,
    thm2_bound,
)

family = parse_family("gaussian 0 0.8; gaussian 0 1.2")
env = moment_envelope(family)
eps, p = 0.75, 3.0
print("family:", family.label(), " eps:", eps, " p:", p)
print("constant c2(p):", c2(p), " (min of 184 and 4.7^(p+1))")

gamma3 = gamma_p_sup(family, math.inf, 3.0, envelope=env)
print("untruncated gamma_3:", round(gamma3, 4))

header = f"{'n':>6} {'gamma(eps*sqrt(n))':>18} {'1d gap':>10} {'1d gap v2':>10} {'fun gap':>10} {'1d prok':>9} {'fun prok':>9}"
print("\n" + header)
for n in (4, 16, 64, 256, 1024, 4096):
    g = gamma_p_sup(family, eps * math.sqrt(n), p, envelope=env)
    gs = gamma_p_sup(family, math.sqrt(n), p, envelope=env)
    row = (
        n,
        g,
        thm1_bound(n, eps, p, g),
        thm1_b22_bound(n, eps, gamma3),
        thm2_bound(n, eps, p, g),
        pi_bar_bound(n, gamma3),
        cor1_bound(n, p, gs),
    )
    print("{:6d} {:18.4f} {:10.4f} {:10.4f} {:10.4f} {:9.4f} {:9.4f}".format(*row))

print("\nuniversal floor for truncated moments: gamma_p(C) >= min(1, 2C^(p-2)/p)")
for C in (0.1, 1.0, 10.0):
    print(f"  C={C:>5}: floor {kp_lower(C, p):.4f}, family value "
          f"{gamma_p_sup(family, C, p, envelope=env):.4f}")

print("\nLipschitz-functional transfer: cdf gap <= (K*L + 1) * distance")
print("  K=2, L=3, distance=0.1 ->", cor2_bound(2.0, 3.0, 0.1))

print("\nclassical specialization (unit-variance increments, truncated moment 1):")
for n in (256, 4096, 65536):
    print(f"  n={n:6d}: distance bound {classical_fclt_bound(n, 3.0, 1.0):.4f}")
