"""Shared Gauss-Legendre quadrature helpers.

All integrals in this package are over finite panels on which the integrand
is smooth; panels are split at every known breakpoint of the integrand, so a
fixed-order rule per panel reaches near machine precision.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=64)
def gl_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1], cached per order."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def panel_rule(a: float, b: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for a single panel [a, b]."""
    x, w = gl_rule(order)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * x, half * w


def split_points(lo: float, hi: float, breakpoints) -> np.ndarray:
    """Sorted panel edges: lo, hi and every breakpoint strictly inside."""
    pts = [lo, hi]
    for p in breakpoints:
        if lo < p < hi:
            pts.append(float(p))
    return np.array(sorted(set(pts)))


def integrate(f, lo: float, hi: float, breakpoints=(), order: int = 256) -> float:
    """Integrate a vectorized callable over [lo, hi], splitting at breakpoints."""
    if hi <= lo:
        return 0.0
    edges = split_points(lo, hi, breakpoints)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        x, w = panel_rule(a, b, order)
        total += float(np.dot(w, f(x)))
    return total
