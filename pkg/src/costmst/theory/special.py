"""Gamma-family special functions and the tail-bracketed constants.

Every series constant here is a partial sum plus the midpoint of a
closed-form bracket on the remainder; the half-width of that bracket is
carried along as ``abs_error_bound``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

_FPMIN = 1e-300
_EPS = 2.0 ** -52


@dataclass(frozen=True)
class SeriesConfig:
    rel_tol: float = 1e-12
    max_terms: int = 1_000_000

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1e-3:
            raise ValueError("rel_tol must lie in (0, 1e-3)")
        if self.max_terms < 100:
            raise ValueError("max_terms must be at least 100")


DEFAULT = SeriesConfig()


class Evaluation(NamedTuple):
    value: float
    abs_error_bound: float
    terms_used: int


def log_gamma(x: float) -> float:
    if not x > 0:
        raise ValueError("log_gamma needs x > 0")
    return math.lgamma(x)


def gamma_pq(s: float, x: float, max_terms: int = 100_000) -> tuple[float, float, int]:
    """Regularized incomplete gamma pair (P, Q) = (gamma(s,x), Gamma(s,x)) / Gamma(s).

    Power series for x < s + 1, Lentz continued fraction otherwise; the
    smaller of the two is computed directly and the other by complement.
    """
    if not s > 0:
        raise ValueError("s must be positive")
    if not x >= 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 0.0, 1.0, 0
    if math.isinf(x):
        return 1.0, 0.0, 0
    log_front = -x + s * math.log(x) - math.lgamma(s)
    if x < s + 1.0:
        ap = s
        term = total = 1.0 / s
        for i in range(1, max_terms + 1):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * _EPS:
                break
        else:
            raise ArithmeticError("incomplete gamma series did not converge")
        p = total * math.exp(log_front)
        return p, 1.0 - p, i
    b = x + 1.0 - s
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, max_terms + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    else:
        raise ArithmeticError("incomplete gamma continued fraction did not converge")
    q = math.exp(log_front) * h
    return 1.0 - q, q, i


def lower_incomplete_gamma(s: float, x: float) -> float:
    """gamma(s, x) = integral_0^x t^(s-1) e^(-t) dt."""
    p, _, _ = gamma_pq(s, x)
    return p * math.exp(math.lgamma(s))


def _cubic_tail(K: int) -> tuple[float, float]:
    # sum_{k>K} k^-3 lies between the integrals from K+1 and from K
    return 1.0 / (2.0 * (K + 1) ** 2), 1.0 / (2.0 * K ** 2)


def _terms_for(rel_tol: float, scale: float, max_terms: int) -> int:
    # bracket width is about 2 / K^3
    K = int(math.ceil((2.0 / (rel_tol * scale)) ** (1.0 / 3.0))) + 2
    return min(K, max_terms)


@lru_cache(maxsize=32)
def zeta3_eval(cfg: SeriesConfig = DEFAULT) -> Evaluation:
    K = _terms_for(cfg.rel_tol, 1.2, cfg.max_terms)
    k = np.arange(K, 0, -1, dtype=np.float64)
    partial = math.fsum(k ** -3.0)
    lo, hi = _cubic_tail(K)
    return Evaluation(partial + 0.5 * (lo + hi), 0.5 * (hi - lo) + 4 * _EPS * partial, K)


def zeta3(cfg: SeriesConfig = DEFAULT) -> float:
    return zeta3_eval(cfg).value


@lru_cache(maxsize=64)
def gamma_series_eval(gamma: float, cfg: SeriesConfig = DEFAULT) -> Evaluation:
    """sum_k Gamma(k + gamma/2 - 1) / (k^(gamma/2 + 1) k!).

    Gautschi's inequality puts every term strictly between k^-3 and
    (k-1)^-3 (k >= 2), which brackets the remainder.
    """
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    half = 0.5 * gamma
    K = _terms_for(cfg.rel_tol, 1.0, cfg.max_terms)
    k = np.arange(K, 0, -1, dtype=np.float64)
    logt = gammaln(k + half - 1.0) - (half + 1.0) * np.log(k) - gammaln(k + 1.0)
    partial = math.fsum(np.exp(logt))
    lo = 1.0 / (2.0 * (K + 1) ** 2)
    hi = 1.0 / K ** 3 + 1.0 / (2.0 * K ** 2)
    return Evaluation(partial + 0.5 * (lo + hi), 0.5 * (hi - lo) + 8 * _EPS * partial, K)


def a0_eval(cfg: SeriesConfig = DEFAULT) -> Evaluation:
    """sum_k Gamma(k - 1/2) / (k^(3/2) k!), i.e. sqrt(2) c1."""
    return gamma_series_eval(1.0, cfg)


def c1_eval(cfg: SeriesConfig = DEFAULT) -> Evaluation:
    a0 = a0_eval(cfg)
    r = 1.0 / math.sqrt(2.0)
    return Evaluation(r * a0.value, r * a0.abs_error_bound, a0.terms_used)


def c1_const(cfg: SeriesConfig = DEFAULT) -> float:
    return c1_eval(cfg).value


def gamma_prefactor(gamma: float) -> float:
    """(gamma/2) Gamma(2/g + 1)^(g/2) / Gamma(1/g + 1)^g, equal to 1/sqrt(2) at g = 1."""
    return 0.5 * gamma * math.exp(0.5 * gamma * math.lgamma(2.0 / gamma + 1.0)
                                  - gamma * math.lgamma(1.0 / gamma + 1.0))


def C_gamma_eval(gamma: float, cfg: SeriesConfig = DEFAULT) -> Evaluation:
    s = gamma_series_eval(gamma, cfg)
    pre = gamma_prefactor(gamma)
    return Evaluation(pre * s.value, pre * s.abs_error_bound + 4 * _EPS * pre * s.value,
                      s.terms_used)


def C_gamma_const(gamma: float, cfg: SeriesConfig = DEFAULT) -> float:
    return C_gamma_eval(gamma, cfg).value
