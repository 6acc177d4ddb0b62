import math

import numpy as np
import pytest
from scipy import stats

from robustclt.bounds import maximal_ineq_bound
from robustclt.fields import ConstantRules
from robustclt.paths import (
    BrokenLine,
    InvariantBreachError,
    PathSample,
    basis_e,
    bridge_exceedance_mc,
    build_sn_adaptive,
    build_sn_classical,
    refine_wiener,
    sample_sn_classical,
    simulate_wiener_broken,
    simulate_wiener_sample,
    sup_norm_distance,
)
from robustclt.scenarios import GaussianLaw, moment_envelope, parse_family


def test_basis_ramp_values():
    n = 6
    for i in range(1, n + 1):
        assert basis_e(i, n, (i - 1) / n) == 0.0
        assert basis_e(i, n, i / n) == 1.0
    t = np.linspace(0, 1, 101)
    assert np.all(basis_e(0, n, t) == 1.0)
    assert np.all(basis_e(n + 1, n, t) == 0.0)
    with pytest.raises(ValueError):
        basis_e(8, 6, 0.5)


def test_basis_telescoping_bound():
    n = 9
    # evaluate at all breakpoints and midpoints; the telescoping sum never exceeds 1
    t = np.sort(np.concatenate([np.linspace(0, 1, n + 1), np.linspace(0, 1, 2 * n + 1)]))
    total = sum(np.abs(basis_e(k, n, t) - basis_e(k + 1, n, t)) for k in range(n + 1))
    assert total.max() <= 1.0 + 1e-12
    assert total.max() == pytest.approx(1.0)


def test_sup_norm_identity_and_single_knot():
    x = BrokenLine([0.0, 0.5, 1.0])
    assert sup_norm_distance(x, x) == 0.0
    y = BrokenLine([0.0, 0.5 + 0.3, 1.0])
    assert sup_norm_distance(x, y) == pytest.approx(0.3)


def test_sup_norm_merged_grid_matches_dense_oracle():
    rng = np.random.default_rng(3)
    x = BrokenLine(np.concatenate([[0.0], rng.normal(size=5)]))
    y = BrokenLine(np.concatenate([[0.0], rng.normal(size=7)]))
    t = np.linspace(0, 1, 10_001)
    oracle = np.abs(x(t) - y(t)).max()
    exact = sup_norm_distance(x, y)
    assert exact >= oracle - 1e-12
    assert exact == pytest.approx(oracle, abs=1e-3)


def test_sup_norm_metric_axioms():
    rng = np.random.default_rng(11)
    for _ in range(25):
        a, b, c = (BrokenLine(np.concatenate([[0.0], rng.normal(size=6)])) for _ in range(3))
        assert sup_norm_distance(a, b) == sup_norm_distance(b, a)
        assert sup_norm_distance(a, c) <= sup_norm_distance(a, b) + sup_norm_distance(b, c) + 1e-12


def test_wiener_marginals():
    rng = np.random.default_rng(7)
    sample = simulate_wiener_sample(16, 100_000, rng)
    assert np.all(sample.knots[:, 0] == 0.0)
    assert sample.knots[:, -1].var() == pytest.approx(1.0, abs=0.02)
    cov = float(np.mean(sample.knots[:, 4] * sample.knots[:, 8]))
    assert cov == pytest.approx(4 / 16, abs=0.01)
    line = simulate_wiener_broken(16, np.random.default_rng(0))
    assert line.knots[0] == 0.0 and line.n == 16


def test_refinement_pins_coarse_knots():
    line = simulate_wiener_broken(8, np.random.default_rng(5))
    fine = refine_wiener(line, 4, np.random.default_rng(6))
    assert fine.n == 32
    assert np.allclose(fine.knots[::4], line.knots)
    with pytest.raises(ValueError):
        refine_wiener(line, 1, np.random.default_rng(0))


def test_bridge_midpoint_law():
    n = 4
    zero = BrokenLine(np.zeros(n + 1))
    rng = np.random.default_rng(9)
    mids = np.array(
        [refine_wiener(zero, 2, rng).knots[1] for _ in range(30_000)]
    )
    assert mids.var() == pytest.approx(1 / (4 * n), rel=0.05)
    # Kolmogorov-Smirnov against the exact conditional law
    stat = stats.kstest(mids, "norm", args=(0.0, math.sqrt(1 / (4 * n))))
    assert stat.pvalue > 1e-3


def test_build_sn_classical_examples():
    assert np.allclose(build_sn_classical([2.0, 2.0, 2.0], 2.0, 1.0).knots, 0.0)
    assert np.allclose(build_sn_classical([1.5], 0.5, 1.0).knots, [0.0, 1.0])
    xs = np.array([0.3, -0.2, 0.9])
    base = build_sn_classical(xs, 0.1, 1.0).knots
    scaled = build_sn_classical(0.1 + 3 * (xs - 0.1), 0.1, 1.0).knots
    assert np.allclose(scaled, 3 * base)
    with pytest.raises(ValueError):
        build_sn_classical(xs, 0.0, -1.0)


def test_adaptive_reduces_to_classical_for_single_law():
    fam = parse_family("gaussian 0.4 1.3")
    env = moment_envelope(fam)
    rules = ConstantRules(0.4, 1.3)
    xs = np.array([0.1, -0.7, 2.0, 0.4])
    adaptive = build_sn_adaptive(xs, rules, env)
    classical = build_sn_classical(xs, 0.4, 1.3)
    assert np.allclose(adaptive.knots, classical.knots)


def test_adaptive_increment_bound():
    env = moment_envelope(parse_family("gaussian -0.2 0.8; gaussian 0.3 1.2"))

    class MidRules:
        def mu_sigma(self, k, w):
            w = np.asarray(w, dtype=float)
            mu = np.full_like(w, 0.05)
            return mu, env.sigma_low_curve(mu)

    xs = np.array([1.0, -2.0, 0.5, 0.0, 3.0])
    line = build_sn_adaptive(xs, MidRules(), env)
    n = len(xs)
    caps = (np.abs(xs) + max(abs(env.mu_low), abs(env.mu_high))) / (env.sigma_low * math.sqrt(n))
    assert np.all(np.abs(np.diff(line.knots)) <= caps + 1e-12)


def test_adaptive_two_point_enumeration_oracle():
    # n = 2, symmetric two-point draws: enumerate all four trajectories by hand
    env = moment_envelope(parse_family("two_point 1"))

    class Rules:
        def mu_sigma(self, k, w):
            w = np.asarray(w, dtype=float)
            return np.zeros_like(w), np.ones_like(w)

    for x1 in (-1.0, 1.0):
        for x2 in (-1.0, 1.0):
            line = build_sn_adaptive([x1, x2], Rules(), env)
            expected = [0.0, x1 / math.sqrt(2), (x1 + x2) / math.sqrt(2)]
            assert np.allclose(line.knots, expected)


def test_adaptive_rejects_rule_violations():
    env = moment_envelope(parse_family("gaussian 0 1"))

    class BadMu:
        def mu_sigma(self, k, w):
            w = np.asarray(w, dtype=float)
            return np.full_like(w, 0.5), np.ones_like(w)  # mean outside {0}

    with pytest.raises(InvariantBreachError):
        build_sn_adaptive([0.1, 0.2], BadMu(), env)

    class BadSigma:
        def mu_sigma(self, k, w):
            w = np.asarray(w, dtype=float)
            return np.zeros_like(w), np.zeros_like(w)

    with pytest.raises(InvariantBreachError):
        build_sn_adaptive([0.1, 0.2], BadSigma())


def test_bridge_exceedance_against_tail_bound():
    rng = np.random.default_rng(21)
    estimates = bridge_exceedance_mc(4, [1.0], 20_000, depth=16, rng=rng)
    p_hat, se = estimates[1.0]
    assert p_hat <= maximal_ineq_bound(4, 1.0, 3.0) + 3 * se


def test_path_sample_csv_roundtrip(tmp_path):
    sample = sample_sn_classical(GaussianLaw(0.0, 1.0), 4, 5, np.random.default_rng(2))
    target = tmp_path / "paths.csv"
    sample.to_csv(target)
    loaded = PathSample.from_csv(target)
    assert loaded.provenance == "classical-Sn"
    assert np.allclose(loaded.knots, sample.knots)
