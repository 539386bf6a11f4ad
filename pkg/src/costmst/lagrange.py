"""Lagrangian dual of the cost-constrained MST and the exchange repair.

phi(lam) = min_T W(T) + lam (C(T) - c0) is the lower envelope of one line per
spanning tree, hence concave and piecewise linear.  Its supergradient at lam
is the slack C(T_lam) - c0 of any minimizing tree, which is what the
bisection in :func:`maximize_dual` steers on.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from .instances import Instance, SpanningTree, mst

log = logging.getLogger(__name__)

LAMBDA_CAP_FACTOR = 8.0


class InfeasibleBudget(ValueError):
    """No spanning tree has cost within the budget."""


@dataclass(frozen=True)
class DualPoint:
    lam: float
    tree: SpanningTree
    phi: float
    slack: float


@dataclass(frozen=True)
class DualSolution:
    c0: float
    lambda_star: float
    phi_star: float
    tree_minus: SpanningTree | None
    tree_plus: SpanningTree
    bracket_width: float
    mst_calls: int
    tol: float
    repaired: SpanningTree | None = None
    tightened_c0: float | None = None
    # dual value and multiplier of the run the repaired tree came from
    repair_phi: float | None = None
    repair_lambda: float | None = None

    @property
    def slack_minus(self) -> float | None:
        return None if self.tree_minus is None else self.tree_minus.total_cost - self.c0

    @property
    def slack_plus(self) -> float:
        return self.tree_plus.total_cost - self.c0

    def to_dict(self) -> dict:
        return {
            "lambda_star": self.lambda_star,
            "phi_star": self.phi_star,
            "slack_minus": self.slack_minus,
            "slack_plus": self.slack_plus,
            "repaired": None if self.repaired is None else self.repaired.to_dict(),
            "bracket_width": self.bracket_width,
            "mst_calls": self.mst_calls,
            "c0": self.c0,
            "tightened_c0": self.tightened_c0,
        }


def phi(inst: Instance, lam: float, c0: float) -> DualPoint:
    if not (math.isfinite(lam) and lam >= 0.0):
        raise ValueError("lambda must be finite and non-negative")
    tree = mst(inst, inst.weights + lam * inst.costs)
    slack = tree.total_cost - c0
    return DualPoint(lam, tree, tree.total_weight + lam * slack, slack)


def min_cost_tree(inst: Instance) -> SpanningTree:
    return mst(inst, inst.costs)


def maximize_dual(inst: Instance, c0: float, tol: float | None = None,
                  repair: bool = True) -> DualSolution:
    """Maximize phi over lam >= 0 by bisection on the sign of the slack.

    Once the bracket is narrower than ``tol`` the two bracketing trees'
    lines are intersected; when both trees are optimal at the crossing it is
    the exact maximizer and is reported as lambda_star, otherwise the
    bracket midpoint is.
    """
    if c0 <= 0:
        raise ValueError("c0 must be positive")
    tol = 1e-9 * inst.n if tol is None else tol
    if tol <= 0:
        raise ValueError("tol must be positive")
    calls = 0

    def ev(lam):
        nonlocal calls
        calls += 1
        return phi(inst, lam, c0)

    lo = ev(0.0)
    if lo.slack <= 0:
        sol = DualSolution(c0, 0.0, lo.phi, None, lo.tree, 0.0, calls, tol)
        return _with_repair(inst, sol) if repair else sol

    cheapest = min_cost_tree(inst)
    calls += 1
    if cheapest.total_cost > c0:
        raise InfeasibleBudget(
            f"minimum tree cost {cheapest.total_cost:.6g} exceeds budget {c0:.6g}")

    cap = LAMBDA_CAP_FACTOR * inst.n
    hi = ev(cap)
    while hi.slack > 0:
        log.warning("bracket reached lambda cap %.6g; doubling", cap)
        cap *= 2.0
        hi = ev(cap)

    while hi.lam - lo.lam > tol:
        mid = ev(0.5 * (lo.lam + hi.lam))
        if mid.slack > 0:
            lo = mid
        else:
            hi = mid

    t_minus, t_plus = lo.tree, hi.tree
    cross = (t_plus.total_weight - t_minus.total_weight) / (t_minus.total_cost - t_plus.total_cost)
    cross = min(max(cross, lo.lam), hi.lam)
    at_cross = ev(cross)
    line = t_minus.total_weight + cross * (t_minus.total_cost - c0)
    scale = 1e-12 * max(1.0, abs(line), cross * inst.n)
    lam_star = cross if at_cross.phi >= line - scale else 0.5 * (lo.lam + hi.lam)
    phi_star = max(lo.phi, hi.phi, at_cross.phi)
    sol = DualSolution(c0, lam_star, phi_star, t_minus, t_plus, hi.lam - lo.lam, calls, tol)
    return _with_repair(inst, sol) if repair else sol


def _with_repair(inst: Instance, sol: DualSolution) -> DualSolution:
    return replace(sol, repaired=gr_repair(inst, sol.c0, sol), repair_phi=sol.phi_star,
                   repair_lambda=sol.lambda_star)


def _meets_budget(inst: Instance, edges, c0: float) -> bool:
    rows, cols = zip(*edges)
    costs = inst.costs[list(rows), list(cols)]
    return math.fsum(costs) <= c0 + costs.max()


def _tree_path(edges, n: int, a: int, b: int) -> list[tuple[int, int]]:
    adj = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    parent = [-1] * n
    parent[a] = a
    stack = [a]
    while stack:
        v = stack.pop()
        if v == b:
            break
        for w in adj[v]:
            if parent[w] < 0:
                parent[w] = v
                stack.append(w)
    path = []
    v = b
    while v != a:
        u = parent[v]
        path.append((min(u, v), max(u, v)))
        v = u
    return path


def gr_repair(inst: Instance, c0: float, dual: DualSolution) -> SpanningTree:
    """Exchange walk from tree_minus toward tree_plus.

    Each step removes an edge of the current tree missing from tree_plus and
    inserts a tree_plus edge that reconnects the two halves, picking the swap
    with the smallest increase of W + lambda_star C.  The walk stops at the
    first tree whose cost is at most c0 plus its own largest edge cost.
    """
    if dual.lambda_star == 0.0 or dual.tree_minus is None:
        return dual.tree_plus
    lam = dual.lambda_star
    z = inst.weights + lam * inst.costs
    cur = set(dual.tree_minus.edges)
    target = dual.tree_plus.edge_set
    while not _meets_budget(inst, cur, c0):
        missing = sorted(target - cur)
        if not missing:
            raise RuntimeError("exchange walk reached tree_plus without meeting the budget")
        best = None
        for f in missing:
            for e in _tree_path(cur, inst.n, f[0], f[1]):
                if e in target:
                    continue
                cand = (z[f] - z[e], e, f)
                if best is None or cand < best:
                    best = cand
        _, e, f = best
        cur.remove(e)
        cur.add(f)
    return SpanningTree.from_edges(inst, cur)


def tree_edge_maxima(tree: SpanningTree, inst: Instance, lam: float) -> tuple[float, float]:
    rows, cols = (list(x) for x in zip(*tree.edges))
    w = inst.weights[rows, cols]
    c = inst.costs[rows, cols]
    return float(np.max(w + lam * c)), float(np.max(c))


def solve(inst: Instance, c0: float, tol: float | None = None,
          tighten: bool = False) -> DualSolution:
    """Dual maximization plus repair, optionally re-solving on a tightened budget.

    With ``tighten`` and an over-budget first repair, the problem is solved
    again with c0 lowered by the largest edge cost of that repair so the
    second repaired tree lands within the original budget.  The returned
    solution keeps the dual values of the original c0 (a lower bound on the
    optimum) and carries the tightened repair.
    """
    sol = maximize_dual(inst, c0, tol)
    if not tighten or sol.repaired.total_cost <= c0:
        return sol
    _, c_max = tree_edge_maxima(sol.repaired, inst, sol.lambda_star)
    c_hat = c0 - c_max
    try:
        tight = maximize_dual(inst, c_hat, tol)
    except (InfeasibleBudget, ValueError):
        log.info("tightened budget %.6g is infeasible; keeping first repair", c_hat)
        return replace(sol, tightened_c0=c_hat)
    return replace(sol, repaired=tight.repaired, tightened_c0=c_hat,
                   mst_calls=sol.mst_calls + tight.mst_calls,
                   repair_phi=tight.phi_star, repair_lambda=tight.lambda_star)
