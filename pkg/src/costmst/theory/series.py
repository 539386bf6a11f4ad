"""The functions f_k, f, f' and g of beta, and the roots that fix beta*.

With a_k = Gamma(k - 1/2) / (k^(3/2) k!) and P, Q the regularized lower and
upper incomplete gamma functions, each summand of f splits as

    k^(k-2)/k! f_k(beta) = sqrt(beta) a_k P(k - 1/2, k beta) + k^-3 Q(k, k beta)

so f = sqrt(beta) A + B, f' = A / (2 sqrt(beta)) and g = f - beta f'
= sqrt(beta) A / 2 + B.  Whichever of P, Q is a Gamma tail at x = k beta
decays like (beta e^(1-beta))^k; the other one is summed as a complement
of the full constants a0 = sum a_k and zeta(3) = sum k^-3.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import gammainc, gammaincc, gammaln

from .special import (DEFAULT, Evaluation, SeriesConfig, a0_eval, gamma_pq,
                      zeta3_eval)

_CHUNK0 = 256
_SQRT2 = math.sqrt(2.0)


def f_k(k: int, beta: float, cfg: SeriesConfig = DEFAULT) -> float:
    """beta^(1/2) int_0^beta x^(k-3/2) e^(-kx) dx + int_beta^inf x^(k-1) e^(-kx) dx."""
    if int(k) != k or k < 1:
        raise ValueError("k must be a positive integer")
    if not beta >= 0:
        raise ValueError("beta must be non-negative")
    k = int(k)
    p_half, _, _ = gamma_pq(k - 0.5, k * beta, cfg.max_terms)
    _, q_int, _ = gamma_pq(float(k), k * beta, cfg.max_terms)
    first = math.sqrt(beta) * math.exp(math.lgamma(k - 0.5) - (k - 0.5) * math.log(k)) * p_half
    second = math.exp(math.lgamma(k) - k * math.log(k)) * q_int
    return first + second


@lru_cache(maxsize=4096)
def _parts(beta: float, cfg: SeriesConfig) -> tuple[Evaluation, Evaluation]:
    """(A, B) with their error bounds; see the module docstring."""
    z3 = zeta3_eval(cfg)
    if beta == 0.0:
        return Evaluation(0.0, 0.0, 0), z3
    a0 = a0_eval(cfg)
    low = beta < 1.0
    ratio = beta * math.exp(1.0 - beta)
    sum_a = sum_b = 0.0
    K, chunk = 0, _CHUNK0
    while True:
        k = np.arange(K + 1, K + chunk + 1, dtype=np.float64)
        log_a = gammaln(k - 0.5) - 1.5 * np.log(k) - gammaln(k + 1.0)
        x = k * beta
        if low:
            ta = np.exp(log_a) * gammainc(k - 0.5, x)
            tb = k ** -3.0 * gammainc(k, x)
        else:
            ta = np.exp(log_a) * gammaincc(k - 0.5, x)
            tb = k ** -3.0 * gammaincc(k, x)
        # summed smallest first
        sum_a += math.fsum(ta[::-1])
        sum_b += math.fsum(tb[::-1])
        K += chunk
        tail_a = _SQRT2 / (2.0 * K * K)
        tail_b = 1.0 / (2.0 * K * K)
        if ratio < 1.0:
            geo = 2.0 * ratio / (1.0 - ratio)
            tail_a = min(tail_a, float(ta[-1]) * geo)
            tail_b = min(tail_b, float(tb[-1]) * geo)
        a_val = sum_a + 0.5 * tail_a if low else a0.value - sum_a - 0.5 * tail_a
        b_val = z3.value - sum_b - 0.5 * tail_b if low else sum_b + 0.5 * tail_b
        done = (tail_a <= cfg.rel_tol * abs(a_val) and tail_b <= cfg.rel_tol * abs(b_val))
        if done or K >= cfg.max_terms:
            break
        chunk = min(2 * chunk, cfg.max_terms - K)
    # scipy's incomplete gamma is good to a few ulps per term; sums are fsum'd
    err_a = 0.5 * tail_a + (0.0 if low else a0.abs_error_bound) + 1e-14 * a0.value
    err_b = 0.5 * tail_b + (z3.abs_error_bound if low else 0.0) + 1e-14 * z3.value
    return Evaluation(a_val, err_a, K), Evaluation(b_val, err_b, K)


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not beta >= 0 or math.isinf(beta):
        raise ValueError("beta must be finite and non-negative")
    return beta


def f_eval(beta: float, cfg: SeriesConfig = DEFAULT) -> Evaluation:
    A, B = _parts(_check_beta(beta), cfg)
    r = math.sqrt(beta)
    return Evaluation(r * A.value + B.value, r * A.abs_error_bound + B.abs_error_bound,
                      max(A.terms_used, B.terms_used))


def f_prime_eval(beta: float, cfg: SeriesConfig = DEFAULT) -> Evaluation:
    beta = _check_beta(beta)
    if beta == 0.0:
        return Evaluation(1.0, 0.0, 0)
    A, _ = _parts(beta, cfg)
    r = 2.0 * math.sqrt(beta)
    return Evaluation(A.value / r, A.abs_error_bound / r, A.terms_used)


def g_eval(beta: float, cfg: SeriesConfig = DEFAULT) -> Evaluation:
    A, B = _parts(_check_beta(beta), cfg)
    r = 0.5 * math.sqrt(beta)
    return Evaluation(r * A.value + B.value, r * A.abs_error_bound + B.abs_error_bound,
                      max(A.terms_used, B.terms_used))


def f(beta: float, cfg: SeriesConfig = DEFAULT) -> float:
    return f_eval(beta, cfg).value


def f_prime(beta: float, cfg: SeriesConfig = DEFAULT) -> float:
    """Derivative of f; its value at 0 is the limit 1."""
    return f_prime_eval(beta, cfg).value


def g(beta: float, cfg: SeriesConfig = DEFAULT) -> float:
    """g(beta) = f(beta) - beta f'(beta), increasing from zeta(3)."""
    return g_eval(beta, cfg).value


def _bisect(fn, target: float, decreasing: bool, max_iter: int = 200) -> tuple[float, float]:
    """Root of fn(beta) = target on [0, inf) for a strictly monotone fn.

    The bracket is grown by doubling from [0, 1]; returns (root, final width).
    """
    sign = -1.0 if decreasing else 1.0
    lo, hi = 0.0, 1.0
    while sign * (fn(hi) - target) < 0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e300:
            raise ArithmeticError("root bracket diverged")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if sign * (fn(mid) - target) < 0:
            lo = mid
        else:
            hi = mid
    # pick the endpoint with the smaller residual
    r_lo, r_hi = abs(fn(lo) - target), abs(fn(hi) - target)
    return (lo if r_lo <= r_hi else hi), hi - lo


def solve_beta_case2_eval(alpha: float, cfg: SeriesConfig = DEFAULT) -> Evaluation:
    if not 0.0 < alpha <= 0.5:
        raise ValueError("alpha must lie in (0, 1/2]")
    if alpha == 0.5:
        return Evaluation(0.0, 0.0, 0)
    root, width = _bisect(lambda b: f_prime(b, cfg), 2.0 * alpha, decreasing=True)
    return Evaluation(root, width, 0)


def solve_beta_case2(alpha: float, cfg: SeriesConfig = DEFAULT) -> float:
    """Unique beta* with f'(beta*) = 2 alpha."""
    return solve_beta_case2_eval(alpha, cfg).value


def solve_beta_case3_eval(alpha: float, cfg: SeriesConfig = DEFAULT) -> Evaluation:
    z3 = zeta3_eval(cfg).value
    if not alpha > z3:
        raise ValueError("alpha <= zeta(3): no spanning tree fits the budget")
    root, width = _bisect(lambda b: g(b, cfg), alpha, decreasing=False)
    return Evaluation(root, width, 0)


def solve_beta_case3(alpha: float, cfg: SeriesConfig = DEFAULT) -> float:
    """Unique beta* with f(beta*) - beta* f'(beta*) = alpha."""
    return solve_beta_case3_eval(alpha, cfg).value
