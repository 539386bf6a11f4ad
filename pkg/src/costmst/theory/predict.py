"""Regime classification of (n, c0, gamma) and the matching leading-order predictions.

gamma = 1 has three regimes:

* case1: c1 sqrt(500 log n) <= c0 <= c1 n / sqrt(8000 log n), W* ~ c1^2 n / (4 c0)
* case2: c0 = alpha n, with f'(beta*) = 2 alpha and lam* = 2 beta* / n
* case3: c0 = alpha = O(1), with g(beta*) = alpha and lam* = n / (2 beta*)

Cases 2 and 3 rest on the small / large lam expansions of E L_n, which are only
claimed while beta* < 1000 log n; past that point the cell is out_of_range.
For moderate n the case1 bracket is empty (its ends cross near n = 3e4) and
both case2 and case3 are candidates; whichever has the smaller beta*
relative to its limit is used.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .geometry import lambda_range
from .series import f, solve_beta_case2, solve_beta_case3
from .special import DEFAULT, SeriesConfig, C_gamma_const, c1_const, zeta3

REGIMES = ("case1", "case2_supercritical", "case2", "case3_infeasible", "case3",
           "gamma_regime", "out_of_range")


@dataclass(frozen=True)
class RegimePrediction:
    regime: str
    w_star_predicted: float | None = None
    beta_star: float | None = None
    lambda_star: float | None = None
    alpha: float | None = None
    extrapolated: bool = False

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")

    def to_dict(self) -> dict:
        return asdict(self)


def _check(n, c0, gamma):
    if int(n) != n or n < 3:
        raise ValueError("n must be an integer >= 3")
    if not (c0 > 0 and math.isfinite(c0)):
        raise ValueError("c0 must be positive and finite")
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    return int(n), float(c0), float(gamma)


def lambda_star(n: int, c0: float, gamma: float = 1.0, cfg: SeriesConfig = DEFAULT) -> float:
    """Maximizer of C_g sqrt(lam) n^(1-g/2) - lam c0, i.e. (n^(1-g/2) C_g / (2 c0))^2.

    This is the mid-regime multiplier; predict_wstar reports the
    regime-specific one.
    """
    n, c0, gamma = _check(n, c0, gamma)
    C = C_gamma_const(gamma, cfg)
    return (n ** (1.0 - 0.5 * gamma) * C / (2.0 * c0)) ** 2


def leading_wstar(n: int, c0: float, gamma: float = 1.0, cfg: SeriesConfig = DEFAULT) -> float:
    """C_g^2 n^(2-g) / (4 c0); at gamma = 1 this is c1^2 n / (4 c0)."""
    n, c0, gamma = _check(n, c0, gamma)
    C = C_gamma_const(gamma, cfg)
    return C * C * n ** (2.0 - gamma) / (4.0 * c0)


def case1_bracket(n: int, cfg: SeriesConfig = DEFAULT) -> tuple[float, float]:
    c1 = c1_const(cfg)
    ln = math.log(n)
    return c1 * math.sqrt(500.0 * ln), c1 * n / math.sqrt(8000.0 * ln)


def _case1(n, c0, cfg, extrapolated=False):
    return RegimePrediction("case1", leading_wstar(n, c0, 1.0, cfg), None,
                            lambda_star(n, c0, 1.0, cfg), None, extrapolated)


def _case2(n, c0, cfg):
    alpha = c0 / n
    if alpha > 0.5:
        return RegimePrediction("case2_supercritical", zeta3(cfg), None, 0.0, alpha)
    beta = solve_beta_case2(alpha, cfg)
    w = f(beta, cfg) - 2.0 * alpha * beta
    return RegimePrediction("case2", w, beta, 2.0 * beta / n, alpha)


def _case3(n, c0, cfg):
    alpha = c0
    z3 = zeta3(cfg)
    if alpha < z3:
        return RegimePrediction("case3_infeasible", None, None, None, alpha)
    if alpha == z3:
        return RegimePrediction("out_of_range", None, None, None, alpha)
    beta = solve_beta_case3(alpha, cfg)
    w = (f(beta, cfg) - alpha) / (2.0 * beta) * n
    return RegimePrediction("case3", w, beta, n / (2.0 * beta), alpha)


def predict_wstar(n: int, c0: float, gamma: float = 1.0, cfg: SeriesConfig = DEFAULT,
                  extrapolate: bool = False) -> RegimePrediction:
    """Classify (n, c0, gamma) and return the leading-order W*, beta* and lam*.

    Cells falling between regimes come back as out_of_range with no
    prediction, unless ``extrapolate`` is set, in which case the mid-regime
    formula (the one the neighbouring regimes degenerate into) is used and
    flagged.
    """
    n, c0, gamma = _check(n, c0, gamma)
    if gamma < 1.0:
        lam = lambda_star(n, c0, gamma, cfg)
        lo, hi = lambda_range(n, gamma)
        w = leading_wstar(n, c0, gamma, cfg)
        if lo <= lam <= hi:
            return RegimePrediction("gamma_regime", w, None, lam)
        if extrapolate:
            return RegimePrediction("gamma_regime", w, None, lam, None, True)
        return RegimePrediction("out_of_range", None, None, None)

    lo, hi = case1_bracket(n, cfg)
    if lo <= c0 <= hi:
        return _case1(n, c0, cfg)
    limit = 1000.0 * math.log(n)
    cands = []
    if c0 > hi:
        cands.append(_case2(n, c0, cfg))
    if c0 < lo:
        cands.append(_case3(n, c0, cfg))
    # with an empty case1 bracket both lists above are filled
    for p in cands:
        if p.regime in ("case2_supercritical", "case3_infeasible"):
            return p
    valid = [p for p in cands if p.beta_star is not None and p.beta_star < limit]
    if valid:
        return min(valid, key=lambda p: p.beta_star)
    if extrapolate:
        return _case1(n, c0, cfg, extrapolated=True)
    alpha = c0 / n if c0 > hi else c0
    return RegimePrediction("out_of_range", None, None, None, alpha)


def expected_Ln(n: int, lam: float, gamma: float = 1.0, cfg: SeriesConfig = DEFAULT) -> float:
    """Leading-order E of the MST weight under edge values W^g + lam C^g.

    gamma = 1: c1 sqrt(lam n) in the mid range 2000 log n / n <= lam <= n / (2000 log n),
    f(lam n / 2) below it and lam f(n / (2 lam)) above it.  For moderate n the
    mid range is empty and the two series forms meet; they agree with the mid
    formula to leading order anyway.  gamma < 1: C_g sqrt(lam) n^(1-g/2),
    only inside its claimed lam range.
    """
    if int(n) != n or n < 2:
        raise ValueError("n must be an integer >= 2")
    if not (lam >= 0 and math.isfinite(lam)):
        raise ValueError("lambda must be finite and non-negative")
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    n = int(n)
    if gamma < 1.0:
        lo, hi = lambda_range(n, gamma)
        if not lo <= lam <= hi:
            raise ValueError(f"lambda={lam:.6g} is outside [{lo:.6g}, {hi:.6g}] for gamma={gamma}")
        return C_gamma_const(gamma, cfg) * math.sqrt(lam) * n ** (1.0 - 0.5 * gamma)
    ln = math.log(n)
    small, large = 2000.0 * ln / n, n / (2000.0 * ln)
    if small <= lam <= large:
        return c1_const(cfg) * math.sqrt(lam * n)
    if lam < small and lam <= 1.0:
        return f(0.5 * lam * n, cfg)
    return lam * f(0.5 * n / lam, cfg)


def case2_weight(alpha: float, cfg: SeriesConfig = DEFAULT) -> float:
    """f(beta*) - 2 alpha beta* for 0 < alpha <= 1/2 (zeta(3) at alpha = 1/2)."""
    beta = solve_beta_case2(alpha, cfg)
    return f(beta, cfg) - 2.0 * alpha * beta


__all__ = ["RegimePrediction", "REGIMES", "predict_wstar", "lambda_star", "leading_wstar",
           "case1_bracket", "expected_Ln", "case2_weight"]
