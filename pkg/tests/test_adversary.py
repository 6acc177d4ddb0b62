import math

import numpy as np
import pytest

from robustclt.adversary import (
    DiagnosticWarning,
    GridValueFunction,
    default_grid,
    mollified_indicator,
    nested_upper_expectation_bruteforce,
    upper_expectation_dp,
    upper_probability,
)
from robustclt.fields import ConstantRules
from robustclt.scenarios import moment_envelope, parse_family
from robustclt.sets import IntervalUnionSet

TWO = parse_family("gaussian 0 0.8; gaussian 0 1.2")
A = IntervalUnionSet.from_text("0.5,1.5")


class SmoothRules:
    """Continuous synthetic selector rules respecting the admissible box."""

    def __init__(self, env, tilt=0.3):
        self.env = env
        self.tilt = tilt

    def mu_sigma(self, k, w):
        w = np.asarray(w, dtype=float)
        t = 0.5 * (1 + np.tanh(w + 0.1 * k))
        mu = self.env.mu_low + t * (self.env.mu_high - self.env.mu_low)
        lo = self.env.sigma_low_curve(mu)
        hi = self.env.sigma_high_curve(mu)
        return mu, lo + self.tilt * (hi - lo)


def test_grid_value_function_clamps():
    vf = GridValueFunction(np.linspace(-1, 1, 5), np.array([5.0, 1.0, 0.0, 1.0, 7.0]))
    assert vf(-3.0) == 5.0 and vf(3.0) == 7.0
    assert vf(0.25) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        GridValueFunction(np.array([0.0]), np.array([1.0]))


def test_constant_terminal_preserved():
    rules = ConstantRules(0.0, 1.0)
    val = upper_expectation_dp(TWO, rules, 4, lambda w: np.full_like(np.asarray(w, float), 0.37))
    assert val == pytest.approx(0.37, abs=1e-9)


def test_mollified_indicator_ramp():
    psi = mollified_indicator(A, 0.5)
    assert psi(np.array([1.0]))[0] == 1.0
    assert psi(np.array([0.25]))[0] == pytest.approx(0.5)
    assert psi(np.array([-2.0]))[0] == 0.0
    assert psi(np.array([1.75]))[0] == pytest.approx(0.5)
    empty = mollified_indicator(IntervalUnionSet(()), 0.5)
    assert np.all(empty(np.linspace(-2, 2, 9)) == 0.0)
    with pytest.raises(ValueError):
        mollified_indicator(A, 0.0)


def test_bruteforce_matches_dp_on_discrete_families():
    rng = np.random.default_rng(8)
    for trial in range(6):
        n = int(rng.integers(1, 4))
        laws = []
        for _ in range(int(rng.integers(1, 3))):
            k = int(rng.integers(2, 4))
            atoms = np.sort(rng.uniform(-1.5, 1.5, k))
            while np.any(np.diff(atoms) < 0.1):
                atoms = np.sort(rng.uniform(-1.5, 1.5, k))
            w = rng.uniform(0.2, 1.0, k)
            w /= w.sum()
            w = np.round(w, 6)
            w[-1] = 1.0 - w[:-1].sum()
            laws.append(
                "discrete " + " ".join(f"{a:.6f}:{p:.6f}" for a, p in zip(atoms, w))
            )
        fam = parse_family("; ".join(laws))
        env = moment_envelope(fam)
        rules = SmoothRules(env)
        terminal = lambda w: np.cos(np.asarray(w, dtype=float))
        exact = nested_upper_expectation_bruteforce(fam, rules, n, terminal)
        reach = 1.05 * n * max(
            (abs(law.atoms).max() + 1.0) / (env.sigma_low * math.sqrt(n)) for law in fam
        )
        grid = np.linspace(-reach - 1, reach + 1, 2**17 + 1)
        approx = upper_expectation_dp(fam, rules, n, terminal, grid=grid)
        assert approx == pytest.approx(exact, abs=1e-5)


def test_bruteforce_guards():
    rules = ConstantRules(0.0, 1.0)
    with pytest.raises(ValueError):
        nested_upper_expectation_bruteforce(TWO, rules, 2, lambda w: w)
    fam = parse_family("discrete -1:0.5 1:0.5")
    with pytest.raises(ValueError):
        nested_upper_expectation_bruteforce(fam, rules, 2, lambda w: w, max_leaves=2)


def test_single_law_dp_matches_monte_carlo():
    fam = parse_family("gaussian 0.3 1.1")
    rules = ConstantRules(0.3, 1.1)
    terminal = lambda w: np.cos(np.asarray(w, dtype=float))
    for n in (4, 16):
        dp = upper_expectation_dp(fam, rules, n, terminal)
        rng = np.random.default_rng(100 + n)
        draws = rng.normal(0.3, 1.1, size=(200_000, n))
        w = ((draws - 0.3) / 1.1).sum(axis=1) / math.sqrt(n)
        mc = np.cos(w)
        se = mc.std() / math.sqrt(len(mc))
        assert abs(dp - mc.mean()) <= 3 * se


def test_dp_sublinearity_on_random_terminals():
    rng = np.random.default_rng(4)
    env = moment_envelope(TWO)
    rules = SmoothRules(env)
    for _ in range(3):
        a1, b1, a2, b2 = rng.uniform(-1, 1, 4)
        f = lambda w: a1 * np.tanh(np.asarray(w) + b1)
        g = lambda w: a2 * np.cos(2 * np.asarray(w) + b2)
        vf = upper_expectation_dp(TWO, rules, 3, f)
        vg = upper_expectation_dp(TWO, rules, 3, g)
        vfg = upper_expectation_dp(TWO, rules, 3, lambda w: f(w) + g(w))
        assert vfg <= vf + vg + 1e-8
        lam = float(rng.uniform(0, 2))
        vlf = upper_expectation_dp(TWO, rules, 3, lambda w: lam * f(w))
        assert vlf == pytest.approx(lam * vf, abs=1e-8)


def test_grid_refinement_convergence():
    env = moment_envelope(TWO)
    rules = SmoothRules(env)
    psi = mollified_indicator(A, 0.25)
    coarse = upper_expectation_dp(TWO, rules, 6, psi, grid=default_grid(env.sd_ratio, 4097))
    fine = upper_expectation_dp(TWO, rules, 6, psi, grid=default_grid(env.sd_ratio, 8193))
    assert abs(coarse - fine) < 1e-4


def test_upper_probability_extremes_and_monotonicity():
    env = moment_envelope(TWO)
    rules = SmoothRules(env)
    huge = IntervalUnionSet.from_text("-1e5,1e5")
    assert upper_probability(huge, 0.3, TWO, rules, 4) == pytest.approx(1.0, abs=1e-9)
    empty = IntervalUnionSet(())
    assert upper_probability(empty, 0.3, TWO, rules, 4) == pytest.approx(0.0, abs=1e-12)

    small = IntervalUnionSet.from_text("0.6,1.2")
    bigger = IntervalUnionSet.from_text("0.4,1.5")
    v_small = upper_probability(small, 0.25, TWO, rules, 4)
    v_big = upper_probability(bigger, 0.25, TWO, rules, 4)
    assert v_small <= v_big + 1e-10
    v_eta_small = upper_probability(small, 0.1, TWO, rules, 4)
    assert v_eta_small <= v_small + 1e-10


def test_upper_probability_single_law_sandwich():
    fam = parse_family("gaussian 0 1")
    rules = ConstantRules(0.0, 1.0)
    eta = 0.3
    value = upper_probability(A, eta, fam, rules, 8)
    rng = np.random.default_rng(17)
    draws = rng.normal(0, 1, size=(400_000, 8))
    w = draws.sum(axis=1) / math.sqrt(8)
    inside = ((w >= 0.5) & (w <= 1.5)).mean()
    inside_eta = ((w >= 0.5 - eta) & (w <= 1.5 + eta)).mean()
    se = math.sqrt(0.25 / len(w))
    assert value >= inside - 3 * se
    assert value <= inside_eta + 3 * se


def test_terminal_validation_and_warnings():
    rules = ConstantRules(0.0, 1.0)
    with pytest.raises(ValueError):
        upper_expectation_dp(TWO, rules, 2, lambda w: np.where(w == 0, np.nan, 1.0))
    with pytest.warns(DiagnosticWarning):
        narrow = np.linspace(-0.5, 0.5, 129)
        upper_expectation_dp(TWO, rules, 2, lambda w: np.cos(np.asarray(w)), grid=narrow)


def test_snapshot_csv(tmp_path):
    rules = ConstantRules(0.0, 1.0)
    target = tmp_path / "values.csv"
    upper_expectation_dp(
        TWO, rules, 3, lambda w: np.cos(np.asarray(w)), snapshot_csv=target
    )
    lines = target.read_text().strip().splitlines()
    assert len(lines) == 1 + 3 + 1  # header + terminal + one per step
