"""Scenario families: worst-case expectations over finite sets of classical laws.

A *scenario family* is a finite collection of classical one-dimensional laws.
The upper expectation of a function f is the maximum of the classical
expectations of f over the family; the matching lower expectation is the
minimum.  An adversary who may re-pick the law before every draw generates a
sublinear expectation (monotone, constant preserving, sub-additive and
positively homogeneous), and the family's *moment envelope* summarizes the
attainable means and standard deviations:

    mu_low  <= mu <= mu_high            (range of means)
    sigma_low(mu) <= sigma <= sigma_high(mu)   (sd about a reference mean mu)
    sigma_low = inf over mu of sigma_low(mu),  sigma_high = sup of sigma_high(mu)

The truncated third-moment functionals gamma_p drive every convergence-rate
bound in :mod:`robustclt.bounds`:

    gamma_p(mu, C) = upper expectation of min(|xi0|^p, C^(p-2) * xi0^2),
    xi0 = (X - mu) / sigma_low(mu),
    gamma_p_sup(C) = sup over mu in [mu_low, mu_high] of gamma_p(mu, C).

Absolutely continuous laws are integrated by panelled Gauss-Legendre rules on
a truncated support (12 standard deviations by default); discrete laws are
summed exactly.  Integrand breakpoints (kinks of min(), |.|^p, ...) are passed
down so every panel sees a smooth integrand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._quadrature import integrate, panel_rule

__all__ = [
    "ScenarioLaw",
    "GaussianLaw",
    "UniformLaw",
    "TwoPointLaw",
    "DiscreteLaw",
    "ScenarioFamily",
    "MomentEnvelope",
    "QuadratureError",
    "upper_expectation",
    "lower_expectation",
    "moment_envelope",
    "gamma_p",
    "gamma_p_sup",
    "parse_law",
    "parse_family",
]

#: width of the truncated integration support, in standard deviations
SUPPORT_SDS = 12.0


class QuadratureError(RuntimeError):
    """Quadrature failed to converge (integrand too wild for the law's tails)."""


class ScenarioLaw:
    """One classical law inside a scenario family."""

    is_discrete = False
    #: True when support() truncates genuinely unbounded tails
    tail_truncated = False

    @property
    def mean(self) -> float:
        raise NotImplementedError

    @property
    def variance(self) -> float:
        raise NotImplementedError

    @property
    def sd(self) -> float:
        return math.sqrt(self.variance)

    def second_moment_about(self, mu: float) -> float:
        """E (X - mu)^2, exact (bias-variance identity)."""
        return self.variance + (self.mean - mu) ** 2

    def pdf(self, x):
        raise NotImplementedError

    def support(self) -> tuple[float, float]:
        raise NotImplementedError

    def expect(self, f, breakpoints=(), order: int = 256, check: bool = True) -> float:
        """E f(X) by panelled quadrature (exact summation for discrete laws).

        `f` must accept numpy arrays.  With `check`, the integral is recomputed
        at a lower order and a disagreement beyond 1e-8 (relative to scale)
        raises :class:`QuadratureError`.
        """
        lo, hi = self.support()
        g = lambda x: np.asarray(f(x)) * self.pdf(x)
        val = integrate(g, lo, hi, breakpoints, order)
        if not math.isfinite(val):
            raise QuadratureError("integrand produced a non-finite value")
        if check:
            probe = integrate(g, lo, hi, breakpoints, max(24, order // 2))
            tol = 1e-8 * max(1.0, abs(val))
            if abs(val - probe) > tol:
                raise QuadratureError(
                    f"quadrature did not converge: {val!r} vs {probe!r} at half order"
                )
            if self.tail_truncated:
                # the truncated support is only sound if the integrand has
                # stopped contributing well before the cut
                shrink = (SUPPORT_SDS - 1.0) / SUPPORT_SDS
                mid = 0.5 * (lo + hi)
                inner = integrate(
                    g,
                    mid + shrink * (lo - mid),
                    mid + shrink * (hi - mid),
                    breakpoints,
                    order,
                )
                if abs(val - inner) > tol:
                    raise QuadratureError(
                        "integrand grows faster than the law's tail control: "
                        f"{val!r} with tails vs {inner!r} without"
                    )
        return val

    def quad_nodes(self, order: int = 128) -> tuple[np.ndarray, np.ndarray]:
        """Density-weighted nodes for fast repeated expectations (DP inner loop).

        Returns (points, weights) with sum(weights) ~= 1; E f(X) ~= weights @ f(points).
        """
        lo, hi = self.support()
        x, w = panel_rule(lo, hi, order)
        return x, w * self.pdf(x)

    def label(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class GaussianLaw(ScenarioLaw):
    mu: float
    sigma: float

    tail_truncated = True

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma) and math.isfinite(self.mu)):
            raise ValueError(f"gaussian law needs finite mean and sd > 0, got {self}")

    @property
    def mean(self) -> float:
        return self.mu

    @property
    def variance(self) -> float:
        return self.sigma**2

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        return np.exp(-0.5 * z * z) / (self.sigma * math.sqrt(2 * math.pi))

    def support(self) -> tuple[float, float]:
        return self.mu - SUPPORT_SDS * self.sigma, self.mu + SUPPORT_SDS * self.sigma

    def sample(self, rng, size=None):
        return rng.normal(self.mu, self.sigma, size=size)

    def label(self) -> str:
        return f"gaussian {self.mu:g} {self.sigma:g}"


@dataclass(frozen=True)
class UniformLaw(ScenarioLaw):
    a: float
    b: float

    def __post_init__(self):
        if not (self.b > self.a and math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"uniform law needs b > a, got {self}")

    @property
    def mean(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def variance(self) -> float:
        return (self.b - self.a) ** 2 / 12.0

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.a) & (x <= self.b), 1.0 / (self.b - self.a), 0.0)

    def support(self) -> tuple[float, float]:
        return self.a, self.b

    def sample(self, rng, size=None):
        return rng.uniform(self.a, self.b, size=size)

    def label(self) -> str:
        return f"uniform {self.a:g} {self.b:g}"


class _DiscreteBase(ScenarioLaw):
    is_discrete = True

    @property
    def atoms(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def weights(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def mean(self) -> float:
        return float(np.dot(self.weights, self.atoms))

    @property
    def variance(self) -> float:
        m = self.mean
        return float(np.dot(self.weights, (self.atoms - m) ** 2))

    def expect(self, f, breakpoints=(), order: int = 256, check: bool = True) -> float:
        val = float(np.dot(self.weights, np.asarray(f(self.atoms), dtype=float)))
        if not math.isfinite(val):
            raise QuadratureError("integrand produced a non-finite value")
        return val

    def quad_nodes(self, order: int = 128) -> tuple[np.ndarray, np.ndarray]:
        return self.atoms, self.weights

    def support(self) -> tuple[float, float]:
        return float(self.atoms[0]), float(self.atoms[-1])

    def sample(self, rng, size=None):
        return rng.choice(self.atoms, size=size, p=self.weights)


@dataclass(frozen=True)
class TwoPointLaw(_DiscreteBase):
    """Symmetric two-point law on {-scale, +scale} with equal weights."""

    scale: float

    def __post_init__(self):
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError(f"two-point law needs scale > 0, got {self}")

    @property
    def atoms(self) -> np.ndarray:
        return np.array([-self.scale, self.scale])

    @property
    def weights(self) -> np.ndarray:
        return np.array([0.5, 0.5])

    def label(self) -> str:
        return f"two_point {self.scale:g}"


@dataclass(frozen=True)
class DiscreteLaw(_DiscreteBase):
    points: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        ws = np.asarray(self.probs, dtype=float)
        if pts.ndim != 1 or pts.shape != ws.shape or len(pts) == 0:
            raise ValueError("discrete law needs matching nonempty atoms and weights")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("discrete atoms must be strictly sorted")
        if np.any(ws <= 0) or abs(ws.sum() - 1.0) > 1e-12:
            raise ValueError("discrete weights must be positive and sum to 1 (1e-12)")
        if np.dot(ws, (pts - np.dot(ws, pts)) ** 2) <= 0:
            raise ValueError("discrete law must have strictly positive variance")

    @property
    def atoms(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)

    @property
    def weights(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)

    def label(self) -> str:
        return "discrete " + " ".join(f"{x:g}:{w:g}" for x, w in zip(self.points, self.probs))


@dataclass(frozen=True)
class ScenarioFamily:
    """Nonempty tuple of scenario laws; the adversary's menu."""

    laws: tuple[ScenarioLaw, ...]

    def __post_init__(self):
        if len(self.laws) == 0:
            raise ValueError("scenario family must be nonempty")
        for law in self.laws:
            if not math.isfinite(law.variance) or law.variance <= 0:
                raise ValueError(f"law {law} must have finite positive variance")

    def __iter__(self):
        return iter(self.laws)

    def __len__(self):
        return len(self.laws)

    def upper_expectation(self, f, breakpoints=(), order: int = 256, check: bool = True) -> float:
        return max(law.expect(f, breakpoints, order, check) for law in self.laws)

    def lower_expectation(self, f, breakpoints=(), order: int = 256, check: bool = True) -> float:
        return -self.upper_expectation(lambda x: -np.asarray(f(x)), breakpoints, order, check)

    def label(self) -> str:
        return "; ".join(law.label() for law in self.laws)


@dataclass(frozen=True)
class MomentEnvelope:
    """Mean interval and sd curves of a scenario family.

    `sigma_low_curve(mu)` / `sigma_high_curve(mu)` accept scalars or arrays.
    """

    mu_low: float
    mu_high: float
    sigma_low_curve: Callable[[np.ndarray], np.ndarray]
    sigma_high_curve: Callable[[np.ndarray], np.ndarray]
    sigma_low: float
    sigma_high: float

    @property
    def sd_ratio(self) -> float:
        return self.sigma_high / self.sigma_low

    @property
    def degenerate_mean(self) -> bool:
        return self.mu_high == self.mu_low


def upper_expectation(f, family: ScenarioFamily, breakpoints=(), order: int = 256) -> float:
    """max over the family of E f(X).  `f` must be numpy-vectorized."""
    return family.upper_expectation(f, breakpoints, order)


def lower_expectation(f, family: ScenarioFamily, breakpoints=(), order: int = 256) -> float:
    """-upper_expectation(-f) = min over the family of E f(X)."""
    return family.lower_expectation(f, breakpoints, order)


def _golden_min(fn, lo: float, hi: float, tol: float = 1e-10) -> tuple[float, float]:
    """Golden-section minimum of a scalar callable on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def _grid_refine_extremum(fn, lo: float, hi: float, n_grid: int, minimize: bool) -> float:
    """Grid scan plus golden-section refinement of a continuous curve."""
    if hi <= lo:
        return fn(lo)
    grid = np.linspace(lo, hi, max(2, n_grid))
    vals = np.array([fn(x) for x in grid])
    idx = int(np.argmin(vals) if minimize else np.argmax(vals))
    a = grid[max(0, idx - 1)]
    b = grid[min(len(grid) - 1, idx + 1)]
    sign = 1.0 if minimize else -1.0
    _, v = _golden_min(lambda x: sign * fn(x), a, b)
    best = sign * v
    return min(best, vals[idx]) if minimize else max(best, vals[idx])


def moment_envelope(family: ScenarioFamily, mu_grid_size: int = 1024) -> MomentEnvelope:
    """Compute the family's moment envelope.

    Means and E(X-mu)^2 are closed-form per law; the global sd extrema over
    [mu_low, mu_high] come from a grid scan with golden-section refinement
    (each per-law curve is a quadratic in mu, so this converges).

    Raises ValueError for degenerate families (sigma_low <= 0).
    """
    means = np.array([law.mean for law in family.laws])
    variances = np.array([law.variance for law in family.laws])
    mu_low, mu_high = float(means.min()), float(means.max())

    def _sd_curve(mu, reduce):
        flat = np.atleast_1d(np.asarray(mu, dtype=float))
        m2 = variances[:, None] + (means[:, None] - flat[None, :]) ** 2
        out = np.sqrt(reduce(m2, axis=0))
        return float(out[0]) if np.ndim(mu) == 0 else out.reshape(np.shape(mu))

    def sigma_low_curve(mu):
        return _sd_curve(mu, np.min)

    def sigma_high_curve(mu):
        return _sd_curve(mu, np.max)

    sigma_low = _grid_refine_extremum(
        lambda m: float(sigma_low_curve(m)), mu_low, mu_high, mu_grid_size, minimize=True
    )
    sigma_high = _grid_refine_extremum(
        lambda m: float(sigma_high_curve(m)), mu_low, mu_high, mu_grid_size, minimize=False
    )
    if not sigma_low > 0:
        raise ValueError("degenerate family: sigma_low must be strictly positive")
    return MomentEnvelope(
        mu_low=mu_low,
        mu_high=mu_high,
        sigma_low_curve=sigma_low_curve,
        sigma_high_curve=sigma_high_curve,
        sigma_low=float(sigma_low),
        sigma_high=float(sigma_high),
    )


def _check_gamma_args(C: float, p: float) -> None:
    if not C > 0:
        raise ValueError(f"truncation level C must be positive, got {C}")
    if not (2.0 <= p <= 3.0):
        raise ValueError(f"p must lie in [2, 3], got {p}")


def gamma_p(
    family: ScenarioFamily,
    mu: float,
    C: float,
    p: float,
    envelope: MomentEnvelope | None = None,
    order: int = 256,
) -> float:
    """Truncated p-th moment gamma_p(mu, C) of the normalized variable.

    xi0 = (X - mu)/sigma_low(mu); the integrand min(|xi0|^p, C^(p-2)*xi0^2)
    has kinks at xi0 = 0 and |xi0| = C, which become quadrature breakpoints.
    `C = math.inf` disables the truncation (plain upper p-th moment).
    """
    _check_gamma_args(C, p)
    env = envelope if envelope is not None else moment_envelope(family)
    if not (env.mu_low - 1e-12 <= mu <= env.mu_high + 1e-12):
        raise ValueError(f"mu={mu} outside the mean interval [{env.mu_low}, {env.mu_high}]")
    s = float(env.sigma_low_curve(mu))
    if not s > 0:
        raise ValueError("sigma_low(mu) must be strictly positive")

    if math.isinf(C):

        def integrand(x):
            return np.abs((np.asarray(x) - mu) / s) ** p

        breaks = (mu,)
    else:
        cap = C ** (p - 2.0)

        def integrand(x):
            xi = (np.asarray(x) - mu) / s
            a = np.abs(xi) ** p
            return np.minimum(a, cap * xi * xi)

        breaks = (mu, mu - C * s, mu + C * s)
    return family.upper_expectation(integrand, breakpoints=breaks, order=order)


def gamma_p_sup(
    family: ScenarioFamily,
    C: float,
    p: float,
    mu_grid_size: int = 1024,
    envelope: MomentEnvelope | None = None,
    order: int = 256,
) -> float:
    """sup over mu in [mu_low, mu_high] of gamma_p(mu, C); grid scan + refinement."""
    _check_gamma_args(C, p)
    env = envelope if envelope is not None else moment_envelope(family)
    if env.degenerate_mean:
        return gamma_p(family, env.mu_low, C, p, env, order)
    fn = lambda m: gamma_p(family, float(m), C, p, env, order)
    return _grid_refine_extremum(fn, env.mu_low, env.mu_high, mu_grid_size, minimize=False)


# ---------------------------------------------------------------------------
# text form: one record per law, "kind param param ..."
# ---------------------------------------------------------------------------

def parse_law(text: str) -> ScenarioLaw:
    """Parse a one-line law record.

    Formats: ``gaussian MEAN SD`` | ``uniform A B`` | ``two_point SCALE`` |
    ``discrete x:w x:w ...``
    """
    parts = text.replace(",", " ").split()
    if not parts:
        raise ValueError("empty law record")
    kind = parts[0].lower().replace("-", "_")
    args = parts[1:]
    try:
        if kind == "gaussian":
            return GaussianLaw(float(args[0]), float(args[1]))
        if kind == "uniform":
            return UniformLaw(float(args[0]), float(args[1]))
        if kind in ("two_point", "twopoint"):
            return TwoPointLaw(float(args[0]))
        if kind == "discrete":
            pairs = [a.split(":") for a in args]
            pts = tuple(float(p[0]) for p in pairs)
            ws = tuple(float(p[1]) for p in pairs)
            return DiscreteLaw(pts, ws)
    except (IndexError, ValueError) as exc:
        raise ValueError(f"malformed law record {text!r}: {exc}") from exc
    raise ValueError(f"unknown law kind {kind!r}")


def parse_family(records: Sequence[str] | str) -> ScenarioFamily:
    """Parse a scenario family from law records (lines or ';'-separated)."""
    if isinstance(records, str):
        records = [r for r in (s.strip() for s in records.replace(";", "\n").splitlines()) if r]
    return ScenarioFamily(tuple(parse_law(r) for r in records))
