"""Distribution of the combined edge value Z = W + lam C and its gamma < 1 analogue.

For gamma = 1, phat(p) is the area of {(u, v) in [0,1]^2 : u/(1+lam) + v/(1+1/lam) <= p}:
a triangle, then a trapezoid, then the square minus a triangle.
"""
from __future__ import annotations

import math
from typing import NamedTuple

from .special import log_gamma


def _check_lam(lam: float) -> float:
    lam = float(lam)
    if not (lam > 0 and math.isfinite(lam)):
        raise ValueError("lambda must be positive and finite")
    return lam


def _shape(lam: float):
    m = min(lam, 1.0 / lam)
    M = max(lam, 1.0 / lam)
    K = 0.5 * (1.0 + lam) * (1.0 + 1.0 / lam)
    return m, M, K


def phat_breakpoints(lam: float) -> tuple[float, float]:
    """The two p values where phat switches formula."""
    m, M, _ = _shape(_check_lam(lam))
    return 1.0 / (1.0 + M), 1.0 / (1.0 + m)


def phat(p: float, lam: float) -> float:
    lam = _check_lam(lam)
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    m, M, K = _shape(lam)
    if p <= 1.0 / (1.0 + M):
        return K * p * p
    if p <= 1.0 / (1.0 + m):
        return p * (1.0 + m) - 0.5 * m
    return 1.0 - K * (1.0 - p) ** 2


def phat_inv(q: float, lam: float) -> float:
    """Inverse of phat in p.

    The branch is picked by comparing q with phat evaluated at the two
    breakpoints, so the middle (linear) branch covers exactly its own image.
    """
    lam = _check_lam(lam)
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    m, _, K = _shape(lam)
    b1, b2 = phat_breakpoints(lam)
    if q <= phat(b1, lam):
        return math.sqrt(q / K)
    if q <= phat(b2, lam):
        return (q + 0.5 * m) / (1.0 + m)
    return 1.0 - math.sqrt((1.0 - q) / K)


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    return gamma


def _gamma_ratio(gamma: float) -> float:
    # Gamma(2/g + 1) / Gamma(1/g + 1)^2
    return math.exp(log_gamma(2.0 / gamma + 1.0) - 2.0 * log_gamma(1.0 / gamma + 1.0))


def phat_gamma(t: float, lam: float, gamma: float) -> float:
    """Area of {u^g + lam v^g < t} for t <= 1 <= lam.

    Callers with lam < 1 swap the roles of weight and cost first.
    """
    gamma = _check_gamma(gamma)
    lam = float(lam)
    if not (lam >= 1.0 and math.isfinite(lam)):
        raise ValueError("lambda must be >= 1 (apply the weight/cost swap first)")
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if t == 0.0:
        return 0.0
    return t ** (2.0 / gamma) / lam ** (1.0 / gamma) / _gamma_ratio(gamma)


class Threshold(NamedTuple):
    t0: float
    below_one: bool


def t0_threshold(n: int, lam: float, gamma: float) -> Threshold:
    """t0 with phat_gamma(t0) = 1000 log n / n, and whether t0 < 1."""
    gamma = _check_gamma(gamma)
    if n < 2:
        raise ValueError("n must be at least 2")
    lam = float(lam)
    if not (lam >= 1.0 and math.isfinite(lam)):
        raise ValueError("lambda must be >= 1")
    q = 1000.0 * math.log(n) / n
    t0 = math.sqrt(lam) * (q * _gamma_ratio(gamma)) ** (0.5 * gamma)
    return Threshold(t0, t0 < 1.0)


def lambda_range(n: int, gamma: float) -> tuple[float, float]:
    """Range of lam over which the mid-regime dual formula is claimed for gamma < 1."""
    gamma = _check_gamma(gamma)
    x = 1000.0 * math.log(n) / n * _gamma_ratio(gamma)
    return x ** gamma, x ** -gamma


class MinMoment(NamedTuple):
    exact: float
    asymptotic: float


def expected_min_ugamma(n: int, gamma: float) -> MinMoment:
    """E min of n iid copies of U^gamma: Gamma(n+1)Gamma(g+1)/Gamma(n+g+1), and Gamma(g+1) n^-g."""
    gamma = _check_gamma(gamma)
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    n = int(n)
    asym = math.exp(log_gamma(gamma + 1.0) - gamma * math.log(n))
    if gamma == 1.0:
        # the general path is only good to a few ulps here
        return MinMoment(1.0 / (n + 1), asym)
    return MinMoment(_min_ugamma_lgamma(n, gamma), asym)


def _min_ugamma_lgamma(n: int, gamma: float) -> float:
    return math.exp(log_gamma(n + 1.0) + log_gamma(gamma + 1.0) - log_gamma(n + gamma + 1.0))
