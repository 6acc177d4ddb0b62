"""Closed-form convergence-rate bounds and their explicit constants.

Every evaluator returns the raw formula value, even when it exceeds 1 and the
probabilistic left-hand side makes it vacuous; flagging vacuous regimes is
the caller's business.  Absolute normal moments use the closed form
E|Z|^p = 2^(p/2) * Gamma((p+1)/2) / sqrt(pi).
"""

from __future__ import annotations

import math

__all__ = [
    "abs_moment_normal",
    "c2",
    "thm2_bound",
    "cor1_bound",
    "cor2_bound",
    "thm1_bound",
    "thm1_b22_bound",
    "pi_bar_bound",
    "kp_lower",
    "classical_fclt_bound",
    "maximal_ineq_bound",
]


def _check_p_range(p: float) -> None:
    if not 2.0 <= p <= 3.0:
        raise ValueError(f"p must lie in [2, 3], got {p}")


def abs_moment_normal(p: float) -> float:
    """E|Z|^p for standard normal Z, any p > -1."""
    if p <= -1:
        raise ValueError("absolute moment needs p > -1")
    return 2.0 ** (p / 2.0) * math.gamma((p + 1.0) / 2.0) / math.sqrt(math.pi)


def c2(p: float) -> float:
    """Functional-CLT constant min(184, 4.7^(p+1)), nondecreasing on [2, 3]."""
    _check_p_range(p)
    return min(184.0, 4.7 ** (p + 1.0))


def thm2_bound(n: int, eps: float, p: float, gamma: float) -> float:
    """Functional-CLT neighborhood-probability gap bound: c2(p)*gamma/(n^((p-2)/2) eps^p)."""
    _check_p_range(p)
    return c2(p) * gamma / (n ** ((p - 2.0) / 2.0) * eps**p)


def cor1_bound(n: int, p: float, gamma_at_sqrt_n: float) -> float:
    """Worst-case functional Prokhorov distance: 4.7*gamma^(1/(p+1))/n^((p-2)/(2p+2))."""
    _check_p_range(p)
    return 4.7 * gamma_at_sqrt_n ** (1.0 / (p + 1.0)) / n ** ((p - 2.0) / (2.0 * p + 2.0))


def cor2_bound(K: float, L: float, pi_tilde: float) -> float:
    """Lipschitz-functional cdf gap: (K*L + 1) * pi_tilde."""
    if K < 0 or L < 0 or pi_tilde < 0:
        raise ValueError("K, L and pi_tilde must be nonnegative")
    return (K * L + 1.0) * pi_tilde


def thm1_bound(n: int, eps: float, p: float, gamma: float) -> float:
    """One-dimensional CLT gap bound with constant 42: 42*gamma/(n^((p-2)/2) eps^p)."""
    _check_p_range(p)
    return 42.0 * gamma / (n ** ((p - 2.0) / 2.0) * eps**p)


def thm1_b22_bound(n: int, eps: float, gamma3: float) -> float:
    """Third-moment form of the one-dimensional gap bound: 12*gamma3/(eps*sqrt(n))."""
    if gamma3 < 0:
        raise ValueError("gamma3 must be nonnegative")
    return 12.0 * gamma3 / (eps * math.sqrt(n))


def pi_bar_bound(n: int, gamma3: float) -> float:
    """Worst-case one-dimensional Prokhorov distance: sqrt(12*gamma3)/n^(1/4)."""
    if gamma3 < 0:
        raise ValueError("gamma3 must be nonnegative")
    return math.sqrt(12.0 * gamma3) / n**0.25


def kp_lower(C: float, p: float) -> float:
    """Universal lower bound min(1, 2C^(p-2)/p) for the truncated moment gamma_p(C)."""
    if not C > 0:
        raise ValueError("C must be positive")
    if p < 2:
        raise ValueError("p must be at least 2")
    return min(1.0, 2.0 * C ** (p - 2.0) / p)


def classical_fclt_bound(n: int, p: float, truncated_moment: float) -> float:
    """Classical functional-CLT Prokhorov bound 4.7*m^(1/(p+1))/n^((p-2)/(2p+2)),
    m = E min(|xi|^p, sqrt(n)*xi^2)."""
    _check_p_range(p)
    if truncated_moment < 0:
        raise ValueError("truncated moment must be nonnegative")
    return 4.7 * truncated_moment ** (1.0 / (p + 1.0)) / n ** ((p - 2.0) / (2.0 * p + 2.0))


def maximal_ineq_bound(n: int, b: float, p: float) -> float:
    """Broken-line-to-Wiener sup-distance tail bound n*E|Z|^p/(sqrt(n)*b)^p."""
    if not b > 0:
        raise ValueError("b must be positive")
    if p < 2:
        raise ValueError("p must be at least 2")
    return n * abs_moment_normal(p) / (math.sqrt(n) * b) ** p
