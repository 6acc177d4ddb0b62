import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from robustclt.scenarios import (
    DiscreteLaw,
    GaussianLaw,
    QuadratureError,
    ScenarioFamily,
    TwoPointLaw,
    UniformLaw,
    gamma_p,
    gamma_p_sup,
    lower_expectation,
    moment_envelope,
    parse_family,
    parse_law,
    upper_expectation,
)

E_ABS_Z3 = 4.0 / math.sqrt(2.0 * math.pi)

STD = parse_family("gaussian 0 1")
TWO = parse_family("gaussian 0 0.8; gaussian 0 1.2")


def test_upper_expectation_second_moments():
    assert upper_expectation(lambda x: x * x, STD) == pytest.approx(1.0, abs=1e-10)
    assert upper_expectation(lambda x: x * x, TWO) == pytest.approx(1.44, abs=1e-10)


def test_upper_expectation_abs_third_moment():
    got = upper_expectation(lambda x: np.abs(x) ** 3, STD, breakpoints=(0.0,))
    assert got == pytest.approx(E_ABS_Z3, abs=1e-10)


def test_lower_expectation_examples():
    assert lower_expectation(lambda x: x * x, TWO) == pytest.approx(0.64, abs=1e-10)
    assert lower_expectation(lambda x: np.full_like(x, 0.3), TWO) == pytest.approx(0.3)
    fam = parse_family("gaussian -0.1 1; gaussian 0.2 1")
    assert lower_expectation(lambda x: x, fam) == pytest.approx(-0.1, abs=1e-10)


def test_single_law_matches_classical_quadrature_oracle():
    law = GaussianLaw(0.3, 1.1)
    fam = ScenarioFamily((law,))
    f = lambda x: np.cos(x) + 0.2 * x
    oracle, _ = quad(lambda x: (math.cos(x) + 0.2 * x) * float(law.pdf(x)), -14, 14)
    assert upper_expectation(f, fam) == pytest.approx(oracle, abs=1e-10)
    assert lower_expectation(f, fam) == pytest.approx(oracle, abs=1e-10)


def test_quadrature_divergence_diagnostic():
    law = GaussianLaw(0.0, 1.0)
    with pytest.raises(QuadratureError):
        law.expect(lambda x: np.exp(x * x))


def test_moment_envelope_single_standard():
    env = moment_envelope(STD)
    assert env.mu_low == env.mu_high == 0.0
    assert env.sigma_low == pytest.approx(1.0, abs=1e-12)
    assert env.sigma_high == pytest.approx(1.0, abs=1e-12)
    # bias-variance identity at mu = 0.5
    assert env.sigma_low_curve(0.5) == pytest.approx(math.sqrt(1.25), abs=1e-12)
    assert env.sigma_high_curve(0.5) == pytest.approx(math.sqrt(1.25), abs=1e-12)


def test_moment_envelope_two_laws():
    env = moment_envelope(TWO)
    assert env.sigma_low_curve(0.0) == pytest.approx(0.8, abs=1e-12)
    assert env.sigma_high_curve(0.0) == pytest.approx(1.2, abs=1e-12)
    assert env.sigma_low == pytest.approx(0.8, abs=1e-10)
    assert env.sigma_high == pytest.approx(1.2, abs=1e-10)


def test_moment_envelope_interior_minimum():
    # two unit-variance laws with different means: sigma_high peaks at the ends,
    # sigma_low dips between the means
    fam = parse_family("gaussian -0.5 1; gaussian 0.5 1")
    env = moment_envelope(fam)
    assert env.mu_low == -0.5 and env.mu_high == 0.5
    assert env.sigma_low == pytest.approx(1.0, abs=1e-9)
    assert env.sigma_high == pytest.approx(math.sqrt(2.0), abs=1e-9)


def test_envelope_rejects_degenerate_family():
    with pytest.raises(ValueError):
        DiscreteLaw((0.0,), (1.0,))


def test_gamma_p_examples():
    assert gamma_p(STD, 0.0, 5.0, 2.0) == pytest.approx(1.0, abs=1e-10)
    assert gamma_p(STD, 0.0, 1e6, 3.0) == pytest.approx(E_ABS_Z3, abs=1e-9)
    assert gamma_p(STD, 0.0, 1e-4, 3.0) <= 2e-4


def test_gamma_p_truncation_against_scipy_oracle():
    law = GaussianLaw(0.0, 1.2)
    fam = ScenarioFamily((law,))
    C, p = 1.0, 3.0
    env = moment_envelope(fam)
    s = env.sigma_low_curve(0.0)

    def integrand(x):
        xi = abs(x) / s
        return min(xi**p, C ** (p - 2) * xi * xi) * float(law.pdf(x))

    oracle, _ = quad(integrand, -15, 15, points=[-C * s, 0.0, C * s], limit=200)
    assert gamma_p(fam, 0.0, C, p) == pytest.approx(oracle, abs=1e-9)


def test_gamma_p_argument_validation():
    with pytest.raises(ValueError):
        gamma_p(STD, 0.0, -1.0, 3.0)
    with pytest.raises(ValueError):
        gamma_p(STD, 0.0, 1.0, 3.5)
    with pytest.raises(ValueError):
        gamma_p(STD, 2.0, 1.0, 3.0)  # mu outside the mean interval


def test_gamma_p_sup_degenerate_interval_equals_pointwise():
    assert gamma_p_sup(STD, 1e6, 3.0) == pytest.approx(E_ABS_Z3, abs=1e-9)


def test_gamma_p_sup_p2_reduction():
    # truncation void at p = 2: the sup is the worst variance ratio
    got = gamma_p_sup(TWO, 7.3, 2.0)
    assert got == pytest.approx(1.44 / 0.64, abs=1e-9)


def test_gamma_p_sup_ceiling_two_law():
    got = gamma_p_sup(TWO, 1.0, 3.0, mu_grid_size=65)
    assert got <= 1.44 / 0.512 + 1e-9
    # sharp ceiling C^(p-2) * (sigma_high/sigma_low)^2 holds in general
    assert got <= 1.0 * (1.2 / 0.8) ** 2 + 1e-9


def test_gamma_monotone_in_C():
    fam = parse_family("gaussian 0.1 0.9; uniform -1.5 1.2")
    env = moment_envelope(fam)
    values = [gamma_p(fam, 0.0, C, 2.5, env) for C in (0.1, 0.5, 1.0, 5.0, 50.0)]
    assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))


@settings(max_examples=30, deadline=None)
@given(
    a1=st.floats(-1, 1),
    b1=st.floats(0.1, 2),
    a2=st.floats(-1, 1),
    b2=st.floats(0.1, 2),
    lam=st.floats(0, 3),
)
def test_sublinearity_axioms(a1, b1, a2, b2, lam):
    f = lambda x: a1 * np.tanh(b1 * x)
    g = lambda x: a2 * np.cos(b2 * x)
    fam = TWO
    uf = upper_expectation(f, fam)
    ug = upper_expectation(g, fam)
    ufg = upper_expectation(lambda x: f(x) + g(x), fam)
    # sub-additivity
    assert ufg <= uf + ug + 1e-10
    # positive homogeneity
    assert upper_expectation(lambda x: lam * f(x), fam) == pytest.approx(
        lam * uf, abs=1e-9
    )
    # monotonicity: f <= f + g^2 pointwise (kept smooth for the quadrature check)
    assert uf <= upper_expectation(lambda x: f(x) + g(x) ** 2, fam) + 1e-10
    # lower never exceeds upper
    assert lower_expectation(f, fam) <= uf + 1e-12


def test_constant_preserving():
    assert upper_expectation(lambda x: np.full_like(x, -2.5), TWO) == pytest.approx(-2.5)


def test_parse_law_round_trip():
    for text in ["gaussian 0 1", "uniform -1 1", "two_point 0.7", "discrete -1:0.5 1:0.5"]:
        law = parse_law(text)
        assert parse_law(law.label()).label() == law.label()


def test_parse_family_semicolons_and_lines():
    fam1 = parse_family("gaussian 0 1; uniform -1 1")
    fam2 = parse_family(["gaussian 0 1", "uniform -1 1"])
    assert fam1.label() == fam2.label()


def test_parse_rejects_malformed():
    for bad in ["", "gaussian 0", "gaussian 0 -1", "uniform 1 0", "wat 1 2",
                "discrete -1:0.5 1:0.6", "discrete 1:0.5 -1:0.5"]:
        with pytest.raises(ValueError):
            parse_law(bad) if bad else parse_family(bad)


def test_law_moments():
    assert UniformLaw(-2.0, 4.0).mean == pytest.approx(1.0)
    assert UniformLaw(-2.0, 4.0).variance == pytest.approx(3.0)
    assert TwoPointLaw(0.9).variance == pytest.approx(0.81)
    d = DiscreteLaw((-1.0, 0.0, 2.0), (0.25, 0.5, 0.25))
    assert d.mean == pytest.approx(0.25)
