"""Broken-line processes on [0, 1]: normalized partial sums and Wiener interpolants.

A broken line with n steps is stored by its n+1 knot values at t = k/n and
evaluated elsewhere by linear interpolation.  It is the finite expansion

    S(t) = sum_i z_i * e_i(t)

in the ramp basis e_i (0 before (i-1)/n, linear up to i/n, 1 after), which is
also why the sup-norm distance of two broken lines is attained on the merged
knot grid: their difference is piecewise linear.

Provided constructions:

* ``build_sn_classical``  - knots are normalized partial sums (x_i - mu)/(sigma*sqrt(n));
* ``build_sn_adaptive``   - per-step (mu_k, sigma_k) chosen by continuous rules of the
  running value, the worst-case CLT construction;
* ``simulate_wiener_broken`` - knots are cumulative N(0, 1/n) increments;
* ``refine_wiener``       - conditional Brownian-bridge insertion of m-1 points per
  interval, exactly distributed given the coarse values; used to Monte Carlo the
  sup-distance between a Wiener path and its broken-line interpolant.

Per-path sampling uses independent child seeds spawned from a master seed, so
samples are reproducible and order-independent.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .scenarios import MomentEnvelope

__all__ = [
    "BrokenLine",
    "PathSample",
    "basis_e",
    "sup_norm_distance",
    "simulate_wiener_broken",
    "simulate_wiener_sample",
    "refine_wiener",
    "build_sn_classical",
    "build_sn_adaptive",
    "sample_sn_classical",
    "bridge_exceedance_mc",
]


class InvariantBreachError(RuntimeError):
    """A construction produced values outside its guaranteed envelope."""


@dataclass(frozen=True)
class BrokenLine:
    """Piecewise-linear path with knots at t = k/n."""

    knots: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.knots, dtype=float)
        if arr.ndim != 1 or len(arr) < 2:
            raise ValueError("broken line needs at least two knot values")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "knots", arr)

    @property
    def n(self) -> int:
        return len(self.knots) - 1

    @property
    def t_grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n + 1)

    def __call__(self, t):
        return np.interp(np.asarray(t, dtype=float), self.t_grid, self.knots)


@dataclass(frozen=True)
class PathSample:
    """Homogeneous bundle of broken lines: one row of knots per path."""

    knots: np.ndarray  # shape (count, n+1)
    provenance: str

    def __post_init__(self):
        arr = np.asarray(self.knots, dtype=float)
        if arr.ndim != 2 or arr.shape[1] < 2:
            raise ValueError("path sample must be a (count, n+1) knot matrix")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "knots", arr)

    @property
    def count(self) -> int:
        return self.knots.shape[0]

    @property
    def n(self) -> int:
        return self.knots.shape[1] - 1

    def line(self, i: int) -> BrokenLine:
        return BrokenLine(self.knots[i])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"n={self.n}", f"provenance={self.provenance}"])
            for row in self.knots:
                writer.writerow([repr(float(v)) for v in row])

    @classmethod
    def from_csv(cls, path) -> "PathSample":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            meta = dict(item.split("=", 1) for item in header)
            rows = [[float(v) for v in row] for row in reader if row]
        sample = cls(np.array(rows), meta.get("provenance", "unknown"))
        if sample.n != int(meta["n"]):
            raise ValueError("CSV header n does not match the knot columns")
        return sample


def basis_e(i: int, n: int, t):
    """Ramp basis: e_0 = 1, e_(n+1) = 0, else 0 -> linear on [(i-1)/n, i/n] -> 1."""
    if n < 1 or not (0 <= i <= n + 1):
        raise ValueError(f"need 0 <= i <= n+1 with n >= 1, got i={i}, n={n}")
    t = np.asarray(t, dtype=float)
    if i == 0:
        out = np.ones_like(t)
    elif i == n + 1:
        out = np.zeros_like(t)
    else:
        out = np.clip(n * t - (i - 1), 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def sup_norm_distance(x: BrokenLine, y: BrokenLine) -> float:
    """Exact sup-norm distance; the maximum sits on the merged knot grid."""
    if x.n == y.n:
        return float(np.abs(x.knots - y.knots).max())
    grid = np.union1d(x.t_grid, y.t_grid)
    return float(np.abs(x(grid) - y(grid)).max())


def simulate_wiener_broken(n: int, rng) -> BrokenLine:
    """Broken line through Wiener values at k/n: cumulative N(0, 1/n) increments."""
    rng = np.random.default_rng(rng)
    steps = rng.normal(0.0, 1.0 / math.sqrt(n), size=n)
    return BrokenLine(np.concatenate([[0.0], np.cumsum(steps)]))


def simulate_wiener_sample(n: int, count: int, rng) -> PathSample:
    rng = np.random.default_rng(rng)
    steps = rng.normal(0.0, 1.0 / math.sqrt(n), size=(count, n))
    knots = np.concatenate([np.zeros((count, 1)), np.cumsum(steps, axis=1)], axis=1)
    return PathSample(knots, "wiener-Bn")


def _bridge_fill(coarse: np.ndarray, m: int, rng) -> np.ndarray:
    """Insert m-1 conditionally Gaussian points per knot interval (rows = paths)."""
    count, cols = coarse.shape
    n = cols - 1
    h = 1.0 / n
    fine = np.empty((count, n * m + 1))
    fine[:, 0] = coarse[:, 0]
    for k in range(n):
        left = coarse[:, k]
        right = coarse[:, k + 1]
        cur = left
        # sequential conditional sampling within the interval; remaining gap shrinks
        for j in range(1, m):
            remaining = (m - j + 1) * (h / m)
            step = h / m
            mean = cur + (step / remaining) * (right - cur)
            var = step * (remaining - step) / remaining
            cur = mean + math.sqrt(var) * rng.standard_normal(count)
            fine[:, k * m + j] = cur
        fine[:, (k + 1) * m] = right
    return fine


def refine_wiener(line: BrokenLine, m: int, rng) -> BrokenLine:
    """Brownian-bridge refinement: a finer broken line exactly distributed as the
    Wiener path on the m-times finer grid, given the coarse knot values."""
    if m < 2:
        raise ValueError("refinement multiple must be at least 2")
    rng = np.random.default_rng(rng)
    fine = _bridge_fill(line.knots[None, :], m, rng)
    return BrokenLine(fine[0])


def build_sn_classical(xs, mu: float, sigma: float) -> BrokenLine:
    """Knots (1/sqrt(n)) * partial sums of (x_i - mu)/sigma."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    xs = np.asarray(xs, dtype=float)
    n = len(xs)
    increments = (xs - mu) / (sigma * math.sqrt(n))
    return BrokenLine(np.concatenate([[0.0], np.cumsum(increments)]))


def sample_sn_classical(law, n: int, count: int, rng) -> PathSample:
    """Bundle of classical normalized partial-sum paths drawn from one law."""
    rng = np.random.default_rng(rng)
    xs = law.sample(rng, size=(count, n))
    increments = (xs - law.mean) / (law.sd * math.sqrt(n))
    knots = np.concatenate([np.zeros((count, 1)), np.cumsum(increments, axis=1)], axis=1)
    return PathSample(knots, "classical-Sn")


def build_sn_adaptive(xs, rules, env: MomentEnvelope | None = None) -> BrokenLine:
    """Adaptive normalized partial sums: step k adds (x_k - mu_k(w))/(sigma_k(w)*sqrt(n)).

    `rules.mu_sigma(k, w)` supplies the per-step pair as a function of the
    running value w (1-based k).  With an envelope, every realized pair is
    checked against the admissible box; violations abort.
    """
    xs = np.asarray(xs, dtype=float)
    n = len(xs)
    knots = np.zeros(n + 1)
    w = 0.0
    for k in range(1, n + 1):
        mu_k, sigma_k = rules.mu_sigma(k, np.asarray(w))
        mu_k = float(mu_k)
        sigma_k = float(sigma_k)
        if not sigma_k > 0:
            raise InvariantBreachError(f"step {k}: sigma {sigma_k} is not positive")
        if env is not None:
            lo_mu, hi_mu = env.mu_low - 1e-12, env.mu_high + 1e-12
            if not (lo_mu <= mu_k <= hi_mu):
                raise InvariantBreachError(f"step {k}: mu {mu_k} outside [{lo_mu}, {hi_mu}]")
            s_lo = float(env.sigma_low_curve(mu_k)) - 1e-12
            s_hi = float(env.sigma_high_curve(mu_k)) + 1e-12
            if not (s_lo <= sigma_k <= s_hi):
                raise InvariantBreachError(
                    f"step {k}: sigma {sigma_k} outside [{s_lo}, {s_hi}] at mu={mu_k}"
                )
        w = w + (xs[k - 1] - mu_k) / (sigma_k * math.sqrt(n))
        knots[k] = w
    return BrokenLine(knots)


def bridge_exceedance_mc(
    n: int,
    b_values,
    n_paths: int,
    depth: int = 32,
    rng=None,
    batch: int = 10_000,
) -> dict[float, tuple[float, float]]:
    """Monte Carlo estimates of P(sup-distance between B_n and B >= b).

    Simulates coarse Wiener broken lines, bridge-refines them `depth`-fold and
    measures the max deviation of the fine path from the coarse interpolant
    (an underestimate of the true sup, which is the conservative direction for
    upper-bound checks).  Returns {b: (estimate, standard_error)}.
    """
    rng = np.random.default_rng(rng)
    b_values = [float(b) for b in b_values]
    hits = {b: 0 for b in b_values}
    done = 0
    while done < n_paths:
        size = min(batch, n_paths - done)
        steps = rng.normal(0.0, 1.0 / math.sqrt(n), size=(size, n))
        coarse = np.concatenate([np.zeros((size, 1)), np.cumsum(steps, axis=1)], axis=1)
        fine = _bridge_fill(coarse, depth, rng)
        frac = np.arange(depth) / depth
        seg = coarse[:, :-1, None] * (1.0 - frac) + coarse[:, 1:, None] * frac
        interp = np.concatenate([seg.reshape(size, n * depth), coarse[:, -1:]], axis=1)
        dev = np.abs(fine - interp).max(axis=1)
        for b in b_values:
            hits[b] += int(np.count_nonzero(dev >= b))
        done += size
    out = {}
    for b in b_values:
        p = hits[b] / n_paths
        se = math.sqrt(max(p * (1.0 - p), 1.0 / n_paths) / n_paths)
        out[b] = (p, se)
    return out
