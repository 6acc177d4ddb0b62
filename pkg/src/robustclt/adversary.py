"""Worst-case expectations of adaptive normalized sums by backward recursion.

An adversary re-picks a law from the scenario family before every step, after
seeing the running value; independence in the sublinear sense makes the
worst-case expectation a nested supremum, i.e. a finite-horizon dynamic
program over the one-dimensional state w = current broken-line value:

    V_n(w)    = terminal(w)
    V_{k-1}(w) = max over laws of E_law[ V_k( w + (X - mu_k(w)) / (sigma_k(w) sqrt(n)) ) ]

with the per-step (mu_k, sigma_k) supplied by continuous selector rules.  The
returned value V_0(0) approximates the sublinear expectation of
terminal(W_{n,n}); discretization error is controlled by refining the state
grid (linear interpolation, clamped at the edges, with clamped-mass
diagnostics).

Upper probabilities of a target interval union A are certified from above by
feeding a mollified indicator: the continuous ramp majorant

    psi_eta = 1 on A, 0 outside the eta-neighborhood, linear in between,

so  V_0(0) >= worst-case P(W_{n,n} in A)  for every eta > 0, while also
V_0(0) <= worst-case P(W_{n,n} in A^eta).  Running a decreasing eta schedule
and taking the smallest value tightens the certificate.

A brute-force evaluator enumerates the full adversary tree for small discrete
families; it is the exactness oracle for the grid engine.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .scenarios import ScenarioFamily
from .sets import IntervalUnionSet

__all__ = [
    "GridValueFunction",
    "DPDiagnostics",
    "default_grid",
    "mollified_indicator",
    "upper_expectation_dp",
    "nested_upper_expectation_bruteforce",
    "upper_probability",
    "DiagnosticWarning",
]


class DiagnosticWarning(UserWarning):
    """Numerical-diagnostics warning (grid clamping, vacuous regimes, ...)."""


@dataclass(frozen=True)
class GridValueFunction:
    """Values on a uniform grid; evaluation clamps to the nearest edge value."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if g.ndim != 1 or len(g) < 2 or g.shape != v.shape:
            raise ValueError("grid and values must be matching 1-d arrays, length >= 2")
        if not np.all(np.isfinite(v)):
            raise ValueError("value function must be finite")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    def __call__(self, x):
        return np.interp(np.asarray(x, dtype=float), self.grid, self.values)


@dataclass(frozen=True)
class DPDiagnostics:
    clamped_mass_max: float
    value_function: GridValueFunction


def default_grid(sd_ratio: float = 1.0, m: int = 4097, halfwidth: float = 8.0) -> np.ndarray:
    """Uniform state grid [-8, 8] * max(1, sd_ratio) with m points."""
    w = halfwidth * max(1.0, sd_ratio)
    return np.linspace(-w, w, m)


def mollified_indicator(A: IntervalUnionSet, eta: float):
    """Continuous piecewise-linear majorant of the indicator of A, supported in A^eta."""
    if not eta > 0:
        raise ValueError("ramp width eta must be positive")

    def psi(x):
        d = A.distance_to(x)
        with np.errstate(invalid="ignore"):
            out = np.clip(1.0 - d / eta, 0.0, 1.0)
        return np.where(np.isinf(d), 0.0, out)

    return psi


def _run_sweep(family, rules, n, terminal, grid, quad_order, clamp_threshold):
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(terminal(grid), dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("terminal function must be finite and bounded on the grid")
    sqrt_n = math.sqrt(n)
    lo, hi = grid[0], grid[-1]
    # clamping from near-edge states is structural and harmless; clamping from
    # the core half of the grid signals a misconfigured (too narrow) grid
    core = np.abs(grid) <= 0.5 * max(abs(lo), abs(hi))
    nodes = [law.quad_nodes(quad_order) for law in family.laws]
    clamped_max = 0.0
    snapshots = [values]
    for k in range(n, 0, -1):
        mu_k, sigma_k = rules.mu_sigma(k, grid)
        mu_k = np.broadcast_to(np.asarray(mu_k, dtype=float), grid.shape)
        sigma_k = np.broadcast_to(np.asarray(sigma_k, dtype=float), grid.shape)
        if np.any(sigma_k <= 0):
            raise ValueError(f"selector rules produced nonpositive sigma at step {k}")
        vf = GridValueFunction(grid, values)
        best = None
        for points, weights in nodes:
            shifted = grid[:, None] + (points[None, :] - mu_k[:, None]) / (
                sigma_k[:, None] * sqrt_n
            )
            outside = (shifted[core] < lo) | (shifted[core] > hi)
            if np.any(outside):
                mass = float((np.where(outside, weights[None, :], 0.0)).sum(axis=1).max())
                clamped_max = max(clamped_max, mass)
            integral = vf(shifted) @ weights
            best = integral if best is None else np.maximum(best, integral)
        values = best
        snapshots.append(values)
    if clamped_max > clamp_threshold:
        warnings.warn(
            f"state grid too narrow: up to {clamped_max:.3e} quadrature mass clamped "
            f"(threshold {clamp_threshold:.1e})",
            DiagnosticWarning,
            stacklevel=3,
        )
    return grid, values, clamped_max, snapshots


def upper_expectation_dp(
    family: ScenarioFamily,
    rules,
    n: int,
    terminal,
    grid=None,
    quad_order: int = 128,
    clamp_threshold: float = 1e-6,
    return_diagnostics: bool = False,
    snapshot_csv=None,
):
    """Worst-case expectation of terminal(W_{n,n}) by the backward grid sweep.

    `rules.mu_sigma(k, w_array)` must return the step-k selector pair on the
    grid.  Returns V_0(0); with `return_diagnostics`, also a
    :class:`DPDiagnostics` carrying the clamped-mass maximum and the final
    value function.  `snapshot_csv` dumps one row of grid values per step.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if grid is None:
        grid = default_grid()
    grid, values, clamped, snapshots = _run_sweep(
        family, rules, n, terminal, grid, quad_order, clamp_threshold
    )
    if snapshot_csv is not None:
        import csv as _csv

        with open(snapshot_csv, "w", newline="") as fh:
            writer = _csv.writer(fh)
            writer.writerow(["step"] + [repr(float(g)) for g in grid])
            for idx, row in enumerate(snapshots):
                writer.writerow([n - idx] + [repr(float(v)) for v in row])
    value = float(np.interp(0.0, grid, values))
    if return_diagnostics:
        return value, DPDiagnostics(clamped, GridValueFunction(grid, values))
    return value


def nested_upper_expectation_bruteforce(
    family: ScenarioFamily,
    rules,
    n: int,
    terminal,
    max_leaves: int = 4_194_304,
) -> float:
    """Exact nested worst-case value by full tree enumeration (discrete laws only).

    Every law must be discrete with at most 4 atoms; the recursion tree has
    (atoms * laws)^n leaves and is rejected beyond `max_leaves`.
    """
    atoms = []
    for law in family.laws:
        if not law.is_discrete:
            raise ValueError("brute force needs discrete laws only")
        pts, ws = law.quad_nodes()
        if len(pts) > 4:
            raise ValueError("brute force allows at most 4 atoms per law")
        atoms.append((pts, ws))
    total_branch = sum(len(p) for p, _ in atoms)
    if total_branch**n > max_leaves:
        raise ValueError(
            f"recursion tree with about {total_branch}^{n} leaves exceeds the "
            f"{max_leaves} leaf budget"
        )
    sqrt_n = math.sqrt(n)

    def value(k: int, w: float) -> float:
        if k > n:
            return float(terminal(np.asarray(w)))
        mu_k, sigma_k = rules.mu_sigma(k, np.asarray(w))
        mu_k = float(mu_k)
        sigma_k = float(sigma_k)
        best = -math.inf
        for pts, ws in atoms:
            acc = 0.0
            for x, p in zip(pts, ws):
                acc += p * value(k + 1, w + (x - mu_k) / (sigma_k * sqrt_n))
            best = max(best, acc)
        return best

    return value(1, 0.0)


def upper_probability(
    A: IntervalUnionSet,
    eta: float,
    family: ScenarioFamily,
    rules,
    n: int,
    grid=None,
    quad_order: int = 128,
    return_diagnostics: bool = False,
):
    """Certified-from-above worst-case probability that W_{n,n} lands in A.

    Computes the DP value of the ramp majorant psi_eta; the result dominates
    the worst-case probability of A and is itself dominated by the worst-case
    probability of A^eta.
    """
    return upper_expectation_dp(
        family,
        rules,
        n,
        mollified_indicator(A, eta),
        grid=grid,
        quad_order=quad_order,
        return_diagnostics=return_diagnostics,
    )
