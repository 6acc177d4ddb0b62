"""The compact smoothing kernel and its sharp Taylor-remainder envelope.

The density g_r lives on [-r, r], is C^1 with a piecewise-linear derivative,
and its second-order Taylor remainder has an exactly computable L1 size
eps_bar_r(y).  The envelope 16*min(|y|^3/(2r)^3, y^2/(2r)^2) is *sharp*: for
|y| <= r/2 the remainder concentrates in windows around the four curvature
knots and the inequality is an equality.
"""

import numpy as np

from robustclt import (
    CompactKernel,
    g_eval,
    gaussian_third_deriv_l1,
    taylor_error_g_l1,
    taylor_error_g_l1_bound,
)

r = 1.0
kern = CompactKernel(r)
print("kernel half-width:", r, " knots:", kern.knots)
print("g(0), g'(0), g''(0):", g_eval(r, 0.0)[:3])
print("value at the curvature knot r/2:", g_eval(r, 0.5))

xs = np.linspace(-1.2, 1.2, 13)
print("\nx grid     :", np.round(xs, 2))
print("density    :", np.round(kern.pdf(xs), 4))

print("\nremainder L1 vs the envelope (r = 1):")
print(f"{'y':>8} {'eps_bar':>12} {'envelope':>12} {'ratio':>8}")
for y in (0.001, 0.01, 0.1, 0.25, 0.5, 0.9, 1.5, 3.0):
    e = taylor_error_g_l1(r, y)
    b = taylor_error_g_l1_bound(r, y)
    print(f"{y:8.3f} {e:12.6g} {b:12.6g} {e / b:8.4f}")
print("ratio -> 1 as y -> 0: the factor 16 cannot be improved.")

print("\nscale invariance: eps_bar_r(y) = eps_bar_{1/2}(y / 2r)")
for rr, y in [(0.25, 0.1), (2.0, 0.8)]:
    print(f"  r={rr}: {taylor_error_g_l1(rr, y):.10f} vs {taylor_error_g_l1(0.5, y/(2*rr)):.10f}")

print("\nGaussian smoothing constant: L1 norm of the third normal derivative")
c = gaussian_third_deriv_l1()
print(f"  value  = {c:.6f} (< 2.4)")
print(f"  /6     = {c/6:.6f} -> certifies the 0.4*|y/b|^3 remainder envelope")
