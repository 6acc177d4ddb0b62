"""Smoothing kernels and their Taylor-remainder functionals.

The compact kernel of half-width r,

    g_r(x) = (2*((r-|x|)+)^2 - ((r-2|x|)+)^2) / r^3,

is a continuous density supported on [-r, r] with an absolutely continuous
first derivative; its second derivative is piecewise constant with jumps at
+-r/2 and +-r.  Expanded on the smooth pieces:

    |x| <= r/2:        g = (r^2 - 2 x^2)/r^3
    r/2 <= |x| <= r:   g = 2 (r - |x|)^2 / r^3

Everything here is evaluated as exact piecewise polynomials (no sampling), so
the second-order Taylor remainder

    eps_r(x, y) = g_r(x-y) - g_r(x) + y g_r'(x) - y^2 g_r''(x)/2

is piecewise quadratic in x, and its L1 size

    eps_bar_r(y) = 1/2 * integral of |eps_r(x, y)| dx

is integrated *exactly* by splitting at the kernel knots and their y-shifts
and root-splitting each quadratic panel.  This keeps quadrature error out of
the factor-16 envelope check

    eps_bar_r(y) <= 16 * min(|y|^3/(2r)^3, y^2/(2r)^2),

whose small-y regime is an exact equality (the envelope is sharp).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "CompactKernel",
    "GaussianKernel",
    "GEval",
    "g_eval",
    "taylor_error_g",
    "taylor_error_g_l1",
    "taylor_error_g_l1_bound",
    "taylor_error_g_signed_integral",
    "gaussian_third_deriv_l1",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class CompactKernel:
    """The compact smoothing density of half-width r (vectorized evaluators)."""

    r: float

    def __post_init__(self):
        if not (self.r > 0 and math.isfinite(self.r)):
            raise ValueError(f"kernel half-width must be positive, got {self.r}")

    @property
    def knots(self) -> tuple[float, float, float, float]:
        r = self.r
        return (-r, -r / 2.0, r / 2.0, r)

    def _regions(self, x):
        x = np.asarray(x, dtype=float)
        r = self.r
        # left-closed bins, so knot values take their right-hand limits
        return x, [x < -r, x < -r / 2.0, x < r / 2.0, x < r]

    def pdf(self, x):
        x, conds = self._regions(x)
        r3 = self.r**3
        r = self.r
        vals = [
            np.zeros_like(x),
            2.0 * (r + x) ** 2 / r3,
            (r * r - 2.0 * x * x) / r3,
            2.0 * (r - x) ** 2 / r3,
        ]
        return np.select(conds, vals, default=0.0)

    def d1(self, x):
        x, conds = self._regions(x)
        r3 = self.r**3
        r = self.r
        vals = [
            np.zeros_like(x),
            4.0 * (r + x) / r3,
            -4.0 * x / r3,
            -4.0 * (r - x) / r3,
        ]
        return np.select(conds, vals, default=0.0)

    def d2(self, x):
        x, conds = self._regions(x)
        r3 = self.r**3
        four = 4.0 / r3
        vals = [np.zeros_like(x), np.full_like(x, four), np.full_like(x, -four), np.full_like(x, four)]
        return np.select(conds, vals, default=0.0)

    def cdf(self, x):
        x, conds = self._regions(x)
        r = self.r
        r3 = r**3
        vals = [
            np.zeros_like(x),
            (2.0 / 3.0) * (r + x) ** 3 / r3,
            0.5 + x / r - (2.0 / 3.0) * x**3 / r3,
            1.0 - (2.0 / 3.0) * (r - x) ** 3 / r3,
        ]
        return np.select(conds, vals, default=1.0)


@dataclass(frozen=True)
class GaussianKernel:
    """Scaled Gaussian kernel: the density of b*Z, all derivatives closed form."""

    b: float

    def __post_init__(self):
        if self.b == 0 or not math.isfinite(self.b):
            raise ValueError(f"gaussian kernel scale must be nonzero, got {self.b}")

    @property
    def scale(self) -> float:
        return abs(self.b)

    def pdf(self, x):
        s = self.scale
        z = np.asarray(x, dtype=float) / s
        return np.exp(-0.5 * z * z) / (s * _SQRT_2PI)

    def d1(self, x):
        s = self.scale
        z = np.asarray(x, dtype=float) / s
        return -z * np.exp(-0.5 * z * z) / (s * s * _SQRT_2PI)

    def d2(self, x):
        s = self.scale
        z = np.asarray(x, dtype=float) / s
        return (z * z - 1.0) * np.exp(-0.5 * z * z) / (s**3 * _SQRT_2PI)


class GEval(NamedTuple):
    value: float
    d1: float
    d2: float
    #: True when x sits on a knot of g'' (+-r, +-r/2); d2 is the right-hand limit there
    d2_one_sided: bool


def g_eval(r: float, x: float) -> GEval:
    """Evaluate g_r and its first two derivatives at a point."""
    k = CompactKernel(r)
    on_knot = abs(x) in (r, r / 2.0)
    return GEval(
        float(k.pdf(x)), float(k.d1(x)), float(k.d2(x)), bool(on_knot)
    )


def taylor_error_g(r: float, x, y):
    """Second-order Taylor remainder of g_r: g(x-y) - g(x) + y g'(x) - y^2 g''(x)/2."""
    k = CompactKernel(r)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = k.pdf(x - y) - k.pdf(x) + y * k.d1(x) - 0.5 * y * y * k.d2(x)
    return float(out) if out.ndim == 0 else out


def _abs_quadratic_integral(c0: float, c1: float, c2: float, half: float, keep_sign: bool) -> float:
    """Integral of |c0 + c1 t + c2 t^2| over [-half, half] (signed if keep_sign)."""
    scale = abs(c0) + abs(c1) * half + abs(c2) * half * half
    if scale == 0.0:
        return 0.0

    def anti(t: float) -> float:
        return ((c2 / 3.0 * t + c1 / 2.0) * t + c0) * t

    if keep_sign:
        return anti(half) - anti(-half)

    roots: list[float] = []
    if abs(c2) * half * half > 1e-14 * scale:
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc > 0.0:
            sq = math.sqrt(disc)
            q = -0.5 * (c1 + math.copysign(sq, c1)) if c1 != 0.0 else 0.5 * sq
            r1 = q / c2
            r2 = c0 / q if q != 0.0 else r1
            roots = [t for t in (r1, r2) if -half < t < half]
    elif abs(c1) * half > 1e-14 * scale:
        t = -c0 / c1
        if -half < t < half:
            roots = [t]
    pts = [-half] + sorted(roots) + [half]
    return sum(abs(anti(b) - anti(a)) for a, b in zip(pts, pts[1:]))


def _panelled_taylor_integral(r: float, y: float, keep_sign: bool) -> float:
    kern = CompactKernel(r)
    knots = np.array(kern.knots)
    edges = np.unique(np.concatenate([knots, knots + y]))
    lo = min(-r, -r + y)
    hi = max(r, r + y)
    edges = edges[(edges >= lo) & (edges <= hi)]
    edges = np.unique(np.concatenate([[lo], edges, [hi]]))

    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        h = b - a
        if h <= 0.0:
            continue
        mid = 0.5 * (a + b)
        half = 0.5 * h
        # exact quadratic reconstruction; samples stay strictly inside the panel
        # (g'' jumps at the panel edges, so edge samples would mix pieces)
        s = 0.5 * half
        qa, qm, qb = (float(taylor_error_g(r, mid + t, y)) for t in (-s, 0.0, s))
        c0 = qm
        c1 = (qb - qa) / (2.0 * s)
        c2 = (qb + qa - 2.0 * qm) / (2.0 * s * s)
        total += _abs_quadratic_integral(c0, c1, c2, half, keep_sign)
    return total


def taylor_error_g_l1(r: float, y: float) -> float:
    """eps_bar_r(y) = half the L1 norm in x of the Taylor remainder, exact."""
    if not r > 0:
        raise ValueError(f"kernel half-width must be positive, got {r}")
    if y == 0.0:
        return 0.0
    return 0.5 * _panelled_taylor_integral(r, float(y), keep_sign=False)


def taylor_error_g_signed_integral(r: float, y: float) -> float:
    """integral of eps_r(x, y) dx (identically zero; exposed for invariant checks)."""
    return _panelled_taylor_integral(r, float(y), keep_sign=True)


def taylor_error_g_l1_bound(r: float, y: float, factor: float = 16.0) -> float:
    """The envelope factor * min(|y|^3/(2r)^3, y^2/(2r)^2) that dominates eps_bar_r."""
    u = abs(y) / (2.0 * r)
    return factor * min(u**3, u**2)


def gaussian_third_deriv_l1() -> float:
    """L1 norm of the third derivative of the standard normal density.

    p1'''(x) = (3x - x^3) p1(x) changes sign at 0 and +-sqrt(3); integrating
    piece by piece gives the closed form

        integral |p1'''| = 2*(4*p1(sqrt(3)) + p1(0)) = (2/sqrt(2*pi))(1 + 4 e^(-3/2))
                         ~= 1.51001,

    so dividing by 6 certifies the Gaussian-smoothing remainder envelope
    0.4*|y/b|^3 with room to spare (the sharp constant would be ~0.2517).
    """
    return 2.0 / _SQRT_2PI * (1.0 + 4.0 * math.exp(-1.5))
