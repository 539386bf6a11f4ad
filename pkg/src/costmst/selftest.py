"""Reduced-scale invariant checks, run by ``costmst selftest``.

Each check returns (ok, detail).  Everything is seeded so a failure is
reproducible; the whole suite takes a few seconds.
"""
from __future__ import annotations

import math
import time
from typing import Callable

import numpy as np

from .instances import (enumerate_spanning_trees, exact_constrained_mst, mst, sample_instance,
                        tree_totals)
from .lagrange import maximize_dual, min_cost_tree, phi
from .theory import (C_gamma_const, c1_const, case2_weight, expected_Ln, f, f_prime, g, phat,
                     phat_breakpoints, phat_inv, solve_beta_case2, solve_beta_case3, zeta3)


def _laplacian_count(n: int) -> int:
    L = n * np.eye(n) - np.ones((n, n))
    return round(np.linalg.det(L[1:, 1:]))


def check_instances():
    a = sample_instance(5, 1.0, 7)
    b = sample_instance(5, 1.0, 7)
    same = np.array_equal(a.weights, b.weights) and np.array_equal(a.costs, b.costs)
    off = ~np.eye(5, dtype=bool)
    inside = bool(((a.weights[off] > 0) & (a.weights[off] < 1)).all())
    sym = np.array_equal(a.weights, a.weights.T) and np.array_equal(a.costs, a.costs.T)
    return same and inside and sym, "determinism, support and symmetry at n=5"


def check_enumeration():
    bad = [n for n in range(3, 8) if sum(1 for _ in enumerate_spanning_trees(n)) != _laplacian_count(n)]
    return not bad, f"tree counts vs Laplacian cofactor, n=3..7; mismatches {bad}"


def check_mst():
    worst = 0.0
    for s in range(20):
        inst = sample_instance(6, 1.0, 1000 + s)
        w, _ = tree_totals(inst)
        worst = max(worst, abs(mst(inst, inst.weights).total_weight - w.min()))
    return worst < 1e-12, f"MST vs enumeration on 20 instances, max gap {worst:.2e}"


def check_exact_monotone():
    ok = True
    for s in range(5):
        inst = sample_instance(6, 1.0, 2000 + s)
        prev = math.inf
        for c0 in np.linspace(min_cost_tree(inst).total_cost, 5.0, 12):
            t = exact_constrained_mst(inst, c0)
            ok &= t is not None and t.total_weight <= prev + 1e-15
            prev = t.total_weight
    return ok, "exact optimum non-increasing in c0 on nested budgets"


def check_sandwich():
    rng = np.random.default_rng(3)
    worst = -math.inf
    for s in range(40):
        n = int(rng.integers(4, 8))
        inst = sample_instance(n, 1.0, 3000 + s)
        c0 = rng.uniform(min_cost_tree(inst).total_cost, n - 1)
        sol = maximize_dual(inst, c0)
        w_star = exact_constrained_mst(inst, c0).total_weight
        rep = sol.repaired
        cmax = max(inst.costs[e] for e in rep.edges)
        gaps = [sol.phi_star - w_star - 1e-9,
                rep.total_cost - c0 - cmax,
                rep.total_weight - sol.phi_star - sol.tol * (1 + sol.lambda_star)]
        worst = max(worst, max(gaps))
    return worst <= 0, f"weak duality and repair bounds on 40 instances, worst excess {worst:.2e}"


def check_concavity():
    inst = sample_instance(30, 1.0, 11)
    c0 = 6.0
    lams = np.linspace(0, 20, 81)
    pts = [phi(inst, lam, c0) for lam in lams]
    vals = np.array([p.phi for p in pts])
    slacks = np.array([p.slack for p in pts])
    chord = 0.5 * (vals[:-2] + vals[2:])
    ok = bool((vals[1:-1] >= chord - 1e-9).all() and (np.diff(slacks) <= 1e-12).all())
    return ok, "phi concave and slack non-increasing on an 81-point grid"


def check_constants():
    z = zeta3()
    ok = abs(f(0.0) - z) < 1e-9 and abs(g(1e-300) - z) < 1e-9 and f_prime(0.0) == 1.0
    ok &= abs(C_gamma_const(1.0) - c1_const()) < 1e-10
    ok &= abs(C_gamma_const(0.999) - c1_const()) < 1e-2
    return ok, f"f(0) = g(0) = zeta(3) = {z:.15f}, C_1 = c1 = {c1_const():.15f}"


def check_fprime_monotone():
    grid = np.geomspace(1e-3, 30, 500)
    fp = np.array([f_prime(b) for b in grid])
    fv = np.array([f(b) for b in grid])
    gv = np.array([g(b) for b in grid])
    ok = bool((np.diff(fp) < 0).all() and (np.diff(fv) > 0).all() and (np.diff(gv) > 0).all())
    return ok, "f' strictly decreasing, f and g strictly increasing on [1e-3, 30]"


def check_roots():
    res = []
    for a in (0.05, 0.1, 0.2, 0.3, 0.4, 0.45):
        res.append(abs(f_prime(solve_beta_case2(a)) - 2 * a))
    for a in (1.25, 1.5, 2.0, 3.0, 10.0):
        res.append(abs(g(solve_beta_case3(a)) - a))
    ok = max(res) <= 1e-10 and abs(case2_weight(0.5) - zeta3()) < 1e-6
    return ok, f"root residuals max {max(res):.2e}"


def check_phat():
    worst = 0.0
    for lam in (0.01, 0.5, 1.0, 2.0, 100.0):
        for p in np.linspace(0, 1, 100):
            worst = max(worst, abs(phat_inv(phat(p, lam), lam) - p))
        m = min(lam, 1 / lam)
        K = 0.5 * (1 + lam) * (1 + 1 / lam)
        b1, b2 = phat_breakpoints(lam)
        worst = max(worst, abs(K * b1 * b1 - (b1 * (1 + m) - 0.5 * m)),
                    abs(b2 * (1 + m) - 0.5 * m - (1 - K * (1 - b2) ** 2)))
    return worst <= 1e-12, f"phat round trip and branch continuity, worst {worst:.2e}"


def check_ln_continuity():
    n = 10 ** 4
    edge = 2000 * math.log(n) / n
    below = f(0.5 * edge * n)
    at = expected_Ln(n, edge)
    return abs(below / at - 1) <= 0.05, f"E L_n across lam = 2000 log n / n: {below:.4f} vs {at:.4f}"


CHECKS: list[tuple[str, Callable]] = [
    ("instances", check_instances),
    ("enumeration", check_enumeration),
    ("mst", check_mst),
    ("exact_monotone", check_exact_monotone),
    ("sandwich", check_sandwich),
    ("concavity", check_concavity),
    ("constants", check_constants),
    ("fprime_monotone", check_fprime_monotone),
    ("roots", check_roots),
    ("phat", check_phat),
    ("Ln_continuity", check_ln_continuity),
]


def run(report=None) -> bool:
    """Run every check; ``report(name, ok, detail, seconds)`` is called per check."""
    all_ok = True
    for name, fn in CHECKS:
        t = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= bool(ok)
        if report is not None:
            report(name, bool(ok), detail, time.perf_counter() - t)
    return all_ok
