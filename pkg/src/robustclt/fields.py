"""Twice-differentiable smoothed set-probability fields and adaptive selectors.

A *smooth field* is a function h with 0 <= h <= 1 and closed-form first and
second derivatives.  The fields built here are probabilities that a point,
jittered by smoothing noise, lands in a target interval union A:

* ``GaussianSetField``   h(x) = P(x + b*Z in A)          (Gaussian jitter)
* ``NuSetField``         h(x) = P(x + nu_r in A)         (compact kernel jitter)
* ``NuGaussianSetField`` h(x) = P(x + nu_r + b*Z in A)   (both)

where nu_r has the compact density of half-width r and Z is standard normal.
``smoothed_indicator_field(A, eps, k, n)`` assembles the field used by the
k-th step of the one-dimensional worst-case CLT construction: the target is
enlarged by eps/2, the kernel half-width is r = eps/2 and the Gaussian scale
is b = sqrt(1 - k/n) (the variance of the not-yet-replaced Wiener tail).

Derivatives differentiate the Gaussian cdf / compact-kernel cdf in closed
form; the only quadrature is the compact-kernel average in the combined
field, done with Gauss-Legendre panels split at the kernel knots (the
integrand is polynomial x analytic there, so the panel rule is effectively
exact).  Closed-form second derivatives matter: the volatility selector feeds
on h'' and numerically differentiated probabilities are too noisy.

The selectors interpolate the mean interval and the variance interval of a
scenario family, driven by h' and h'':

    alpha(x)  = clip(mid_mu    + half_mu    * h'(x)/kappa1,  mu_low,  mu_high)
    beta(x)^2 = clip(mid_sig2  + half_sig2  * h''(x)/kappa2, sig2_low(alpha), sig2_high(alpha))

which is exactly the clipped-linear rule: linear while |h'| <= kappa1
(resp. |h''| <= kappa2), saturated at the interval ends beyond.  Both are
continuous, and always

    mu_low <= alpha <= mu_high,
    sigma_low <= sigma_low(alpha) <= beta <= sigma_high(alpha) <= sigma_high.

``choose_smoothing_params`` picks (kappa1, kappa2) so that the selector bias

    kappa1*(mu_high-mu_low)/(2*sqrt(n)*sigma_low)
        + kappa2/(2n)*(sd_ratio^2 - 1)  <=  rho0 * delta_floor,   rho0 = 0.001

is a thousandth of the dominant Taylor-remainder term, splitting the budget
equally between the two addends (a degenerate addend donates its half).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from ._quadrature import panel_rule
from .kernels import CompactKernel
from .scenarios import MomentEnvelope
from .sets import IntervalUnionSet

__all__ = [
    "SmoothField",
    "GaussianSetField",
    "NuSetField",
    "NuGaussianSetField",
    "smoothed_indicator_field",
    "SelectorParams",
    "alpha_selector",
    "beta_selector",
    "taylor_error_field",
    "choose_smoothing_params",
    "AdaptiveRules",
    "ConstantRules",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _phi(z):
    return np.exp(-0.5 * z * z) / _SQRT_2PI


class SmoothField:
    """Base: value/d1/d2 evaluators, vectorized over x."""

    params: dict

    def value(self, x):
        raise NotImplementedError

    def d1(self, x):
        raise NotImplementedError

    def d2(self, x):
        raise NotImplementedError

    def evaluate(self, x):
        return self.value(x), self.d1(x), self.d2(x)


class GaussianSetField(SmoothField):
    """h(x) = P(x + b*Z in A) as a sum of Gaussian cdf differences."""

    def __init__(self, target: IntervalUnionSet, b: float):
        if not (b != 0 and math.isfinite(b)):
            raise ValueError(f"gaussian scale must be nonzero, got {b}")
        self.target = target
        self.b = abs(b)
        self.params = {"target": target, "b": self.b}

    def _edges(self, x):
        x = np.asarray(x, dtype=float)
        za = [(a - x) / self.b for a, _ in self.target.intervals]
        zb = [(b - x) / self.b for _, b in self.target.intervals]
        return x, za, zb

    def value(self, x):
        x, za, zb = self._edges(x)
        out = np.zeros_like(x)
        for lo, hi in zip(za, zb):
            out += ndtr(hi) - ndtr(lo)
        return out

    def d1(self, x):
        x, za, zb = self._edges(x)
        out = np.zeros_like(x)
        for lo, hi in zip(za, zb):
            out += (_phi(lo) - _phi(hi)) / self.b
        return out

    def d2(self, x):
        x, za, zb = self._edges(x)
        out = np.zeros_like(x)
        for lo, hi in zip(za, zb):
            # phi'(z) = -z phi(z)
            out += (-hi * _phi(hi) + lo * _phi(lo)) / (self.b * self.b)
        return out


class NuSetField(SmoothField):
    """h(x) = P(x + nu_r in A) via the compact kernel's closed-form cdf."""

    def __init__(self, target: IntervalUnionSet, r: float):
        self.target = target
        self.kernel = CompactKernel(r)
        self.params = {"target": target, "r": r}

    def value(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for a, b in self.target.intervals:
            out += self.kernel.cdf(b - x) - self.kernel.cdf(a - x)
        return out

    def d1(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for a, b in self.target.intervals:
            out += self.kernel.pdf(a - x) - self.kernel.pdf(b - x)
        return out

    def d2(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for a, b in self.target.intervals:
            out += self.kernel.d1(b - x) - self.kernel.d1(a - x)
        return out


class NuGaussianSetField(SmoothField):
    """h(x) = P(x + nu_r + b*Z in A): compact-kernel average of a Gaussian field."""

    def __init__(self, target: IntervalUnionSet, r: float, b: float, order: int = 64):
        self.target = target
        self.kernel = CompactKernel(r)
        self.inner = GaussianSetField(target, b)
        self.params = {"target": target, "r": r, "b": abs(b)}
        nodes, weights = [], []
        for a_, b_ in zip(self.kernel.knots[:-1], self.kernel.knots[1:]):
            u, w = panel_rule(a_, b_, order)
            nodes.append(u)
            weights.append(w * self.kernel.pdf(u))
        self._u = np.concatenate(nodes)
        self._w = np.concatenate(weights)

    def _average(self, x, inner_eval):
        x = np.asarray(x, dtype=float)
        pts = x[..., None] + self._u
        return np.tensordot(inner_eval(pts), self._w, axes=([-1], [0]))

    def value(self, x):
        return self._average(x, self.inner.value)

    def d1(self, x):
        return self._average(x, self.inner.d1)

    def d2(self, x):
        return self._average(x, self.inner.d2)


def smoothed_indicator_field(
    A: IntervalUnionSet, eps: float, k: int, n: int
) -> SmoothField:
    """Field for step k of n: target A^(eps/2), kernel r=eps/2, Gaussian b=sqrt(1-k/n).

    k = n drops the Gaussian part (zero remaining Wiener variance) and needs
    eps > 0 to stay twice differentiable.
    """
    if n < 1 or not (0 <= k <= n):
        raise ValueError(f"need 0 <= k <= n with n >= 1, got k={k}, n={n}")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    b = math.sqrt(1.0 - k / n)
    target = A.enlarge(eps / 2.0) if eps > 0 else A
    if eps == 0.0:
        if k == n:
            raise ValueError("k = n with eps = 0 gives a raw indicator, not a C^2 field")
        fld: SmoothField = GaussianSetField(target, b)
    elif k == n:
        fld = NuSetField(target, eps / 2.0)
    else:
        fld = NuGaussianSetField(target, eps / 2.0, b)
    fld.params = dict(fld.params, A=A, eps=eps, k=k, n=n, b=b)
    return fld


@dataclass(frozen=True)
class SelectorParams:
    """Clipping thresholds for the drift (kappa1) and volatility (kappa2) selectors."""

    kappa1: float
    kappa2: float
    rho0: float = 0.001

    def __post_init__(self):
        if not (self.kappa1 > 0 and self.kappa2 > 0):
            raise ValueError("selector thresholds must be positive")


def alpha_selector(field: SmoothField, x, params: SelectorParams, env: MomentEnvelope):
    """Drift selector: clipped-linear in h'(x), valued in [mu_low, mu_high]."""
    d1 = field.d1(x)
    mid = 0.5 * (env.mu_high + env.mu_low)
    half = 0.5 * (env.mu_high - env.mu_low)
    out = np.clip(mid + half * (np.asarray(d1) / params.kappa1), env.mu_low, env.mu_high)
    return float(out) if np.ndim(x) == 0 else out


def beta_selector(field: SmoothField, x, params: SelectorParams, env: MomentEnvelope):
    """Volatility selector: clipped-linear in h''(x) between the sd curves at alpha."""
    alpha = alpha_selector(field, x, params, env)
    d2 = np.asarray(field.d2(x))
    s2_low = np.asarray(env.sigma_low_curve(alpha)) ** 2
    s2_high = np.asarray(env.sigma_high_curve(alpha)) ** 2
    mid = 0.5 * (s2_high + s2_low)
    half = 0.5 * (s2_high - s2_low)
    beta2 = np.clip(mid + half * (d2 / params.kappa2), s2_low, s2_high)
    out = np.sqrt(beta2)
    return float(out) if np.ndim(x) == 0 else out


def taylor_error_field(field: SmoothField, x, y):
    """Second-order Taylor remainder h(x+y) - h(x) - y h'(x) - y^2 h''(x)/2."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = field.value(x + y) - field.value(x) - y * field.d1(x) - 0.5 * y * y * field.d2(x)
    return float(out) if out.ndim == 0 else out


def choose_smoothing_params(
    n: int, env: MomentEnvelope, delta_floor: float, rho0: float = 0.001
) -> SelectorParams:
    """Pick (kappa1, kappa2) meeting the selector-bias budget rho0 * delta_floor.

    The budget is split equally between the mean addend and the variance
    addend; a degenerate addend (mu_high = mu_low, or sd_ratio = 1) donates
    its half to the other and gets the sentinel threshold 1.0.
    """
    if not delta_floor > 0:
        raise ValueError("delta_floor must be strictly positive")
    budget = rho0 * delta_floor
    coeff_mu = (env.mu_high - env.mu_low) / (2.0 * math.sqrt(n) * env.sigma_low)
    coeff_sig = (env.sd_ratio**2 - 1.0) / (2.0 * n)
    if coeff_mu == 0.0 and coeff_sig == 0.0:
        return SelectorParams(1.0, 1.0, rho0)
    if coeff_mu == 0.0:
        return SelectorParams(1.0, budget / coeff_sig, rho0)
    if coeff_sig == 0.0:
        return SelectorParams(budget / coeff_mu, 1.0, rho0)
    return SelectorParams(0.5 * budget / coeff_mu, 0.5 * budget / coeff_sig, rho0)


class ConstantRules:
    """Per-step rules frozen to one (mu, sigma) pair (the classical case)."""

    def __init__(self, mu: float, sigma: float):
        if not sigma > 0:
            raise ValueError("sigma must be positive")
        self.mu = mu
        self.sigma = sigma

    def mu_sigma(self, k: int, w):
        w = np.asarray(w, dtype=float)
        return np.full_like(w, self.mu), np.full_like(w, self.sigma)


class AdaptiveRules:
    """The worst-case CLT selector wiring for a target set A and accuracy eps.

    Step 1 plays the constant pair (mu_low, sigma_low(mu_low)); step k >= 2
    applies the drift/volatility selectors to the step-k smoothed field at the
    running broken-line value w.
    """

    def __init__(
        self,
        A: IntervalUnionSet,
        eps: float,
        n: int,
        env: MomentEnvelope,
        params: SelectorParams,
    ):
        self.A = A
        self.eps = eps
        self.n = n
        self.env = env
        self.params = params
        self._fields: dict[int, SmoothField] = {}
        self._grid_cache: dict = {}

    def field(self, k: int) -> SmoothField:
        if k not in self._fields:
            self._fields[k] = smoothed_indicator_field(self.A, self.eps, k, self.n)
        return self._fields[k]

    def mu_sigma(self, k: int, w):
        w = np.asarray(w, dtype=float)
        if k == 1:
            mu1 = self.env.mu_low
            sig1 = float(self.env.sigma_low_curve(mu1))
            return np.full_like(w, mu1), np.full_like(w, sig1)
        # DP sweeps re-evaluate the same state grid once per eta; memoize on it
        key = None
        if w.ndim == 1 and w.size > 8:
            key = (k, w.size, float(w[0]), float(w[-1]))
            if key in self._grid_cache:
                return self._grid_cache[key]
        fld = self.field(k)
        mu = np.asarray(alpha_selector(fld, w, self.params, self.env))
        sigma = np.asarray(beta_selector(fld, w, self.params, self.env))
        if key is not None:
            self._grid_cache[key] = (mu, sigma)
        return mu, sigma
