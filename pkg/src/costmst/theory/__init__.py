"""Series constants, the f / f' / g machinery, edge-value geometry and regime predictions."""
from __future__ import annotations

import math

from .geometry import (expected_min_ugamma, lambda_range, phat, phat_breakpoints,
                       phat_gamma, phat_inv, t0_threshold)
from .predict import (REGIMES, RegimePrediction, case1_bracket, case2_weight, expected_Ln,
                      lambda_star, leading_wstar, predict_wstar)
from .series import (f, f_eval, f_k, f_prime, f_prime_eval, g, g_eval, solve_beta_case2,
                     solve_beta_case2_eval, solve_beta_case3, solve_beta_case3_eval)
from .special import (DEFAULT, Evaluation, SeriesConfig, C_gamma_const, C_gamma_eval,
                      c1_const, c1_eval, gamma_pq, log_gamma, lower_incomplete_gamma,
                      zeta3, zeta3_eval)

_ULP = 2.0 ** -52


def _rounding(value: float, ulps: float = 8.0) -> Evaluation:
    # closed forms: only floating point rounding to account for
    return Evaluation(value, ulps * _ULP * abs(value), 0)


def _expected_Ln_eval(n, lam, gamma=1.0, cfg=DEFAULT):
    v = expected_Ln(int(n), lam, gamma, cfg)
    # the dominant error is that of the series constant or of f itself
    if gamma < 1.0:
        c = C_gamma_eval(gamma, cfg)
        return Evaluation(v, abs(v) * c.abs_error_bound / c.value + 8 * _ULP * abs(v), c.terms_used)
    n = int(n)
    ln = math.log(n)
    if 2000 * ln / n <= lam <= n / (2000 * ln):
        c = c1_eval(cfg)
        return Evaluation(v, abs(v) * c.abs_error_bound / c.value + 8 * _ULP * abs(v), c.terms_used)
    if lam < 2000 * ln / n and lam <= 1.0:
        return f_eval(0.5 * lam * n, cfg)
    e = f_eval(0.5 * n / lam, cfg)
    return Evaluation(v, lam * e.abs_error_bound, e.terms_used)


def _predict_eval(n, c0, gamma=1.0, cfg=DEFAULT):
    p = predict_wstar(int(n), c0, gamma, cfg)
    if p.w_star_predicted is None:
        raise ValueError(f"no prediction: regime {p.regime}")
    return Evaluation(p.w_star_predicted, 0.0, 0)


# name -> (callable returning Evaluation, positional argument names)
EVALUATORS = {
    "zeta3": (lambda cfg=DEFAULT: zeta3_eval(cfg), ()),
    "c1": (lambda cfg=DEFAULT: c1_eval(cfg), ()),
    "C_gamma": (lambda gamma, cfg=DEFAULT: C_gamma_eval(gamma, cfg), ("gamma",)),
    "log_gamma": (lambda x, cfg=DEFAULT: Evaluation(log_gamma(x), 1e-15 * max(1.0, abs(log_gamma(x))), 0), ("x",)),
    "lower_incomplete_gamma": (
        lambda s, x, cfg=DEFAULT: _rounding(lower_incomplete_gamma(s, x), 64), ("s", "x")),
    "f_k": (lambda k, beta, cfg=DEFAULT: _rounding(f_k(int(k), beta, cfg), 64), ("k", "beta")),
    "f": (lambda beta, cfg=DEFAULT: f_eval(beta, cfg), ("beta",)),
    "f_prime": (lambda beta, cfg=DEFAULT: f_prime_eval(beta, cfg), ("beta",)),
    "g": (lambda beta, cfg=DEFAULT: g_eval(beta, cfg), ("beta",)),
    "beta_case2": (lambda alpha, cfg=DEFAULT: solve_beta_case2_eval(alpha, cfg), ("alpha",)),
    "beta_case3": (lambda alpha, cfg=DEFAULT: solve_beta_case3_eval(alpha, cfg), ("alpha",)),
    "lambda_star": (lambda n, c0, gamma=1.0, cfg=DEFAULT: _rounding(lambda_star(int(n), c0, gamma, cfg), 1e4),
                    ("n", "c0", "gamma?")),
    "wstar": (_predict_eval, ("n", "c0", "gamma?")),
    "expected_Ln": (_expected_Ln_eval, ("n", "lambda", "gamma?")),
    "phat": (lambda p, lam, cfg=DEFAULT: _rounding(phat(p, lam)), ("p", "lambda")),
    "phat_inv": (lambda q, lam, cfg=DEFAULT: _rounding(phat_inv(q, lam)), ("q", "lambda")),
    "phat_gamma": (lambda t, lam, gamma, cfg=DEFAULT: _rounding(phat_gamma(t, lam, gamma), 64),
                   ("t", "lambda", "gamma")),
    "t0": (lambda n, lam, gamma, cfg=DEFAULT: _rounding(t0_threshold(int(n), lam, gamma).t0, 64),
           ("n", "lambda", "gamma")),
    "min_ugamma": (lambda n, gamma, cfg=DEFAULT: _rounding(expected_min_ugamma(int(n), gamma).exact, 64),
                   ("n", "gamma")),
}


def evaluate(name: str, *args: float, cfg: SeriesConfig = DEFAULT) -> Evaluation:
    """Evaluate a named quantity; positional args follow EVALUATORS[name][1]."""
    if name not in EVALUATORS:
        raise KeyError(f"unknown quantity {name!r}; choose from {sorted(EVALUATORS)}")
    fn, params = EVALUATORS[name]
    need = sum(1 for p in params if not p.endswith("?"))
    if not need <= len(args) <= len(params):
        raise TypeError(f"{name} takes arguments ({', '.join(params)}), got {len(args)}")
    return fn(*args, cfg=cfg)


__all__ = [
    "DEFAULT", "Evaluation", "SeriesConfig", "log_gamma", "lower_incomplete_gamma", "gamma_pq",
    "zeta3", "zeta3_eval", "c1_const", "c1_eval", "C_gamma_const", "C_gamma_eval",
    "f_k", "f", "f_prime", "g", "f_eval", "f_prime_eval", "g_eval",
    "solve_beta_case2", "solve_beta_case3", "solve_beta_case2_eval", "solve_beta_case3_eval",
    "phat", "phat_inv", "phat_breakpoints", "phat_gamma", "t0_threshold", "lambda_range",
    "expected_min_ugamma", "RegimePrediction", "REGIMES", "predict_wstar", "lambda_star",
    "leading_wstar", "case1_bracket", "expected_Ln", "case2_weight", "EVALUATORS", "evaluate",
]
