"""Seeded Monte Carlo sweeps over (n, c0) cells, with CSV records and per-cell summaries.

Replicate seeds come from ``SeedSequence(master_seed, spawn_key=(cell, rep))`` so
a sweep's output does not depend on how many threads ran it or in which order
the trials finished.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Sequence

import numpy as np

from .instances import sample_instance
from .lagrange import InfeasibleBudget, phi, solve, tree_edge_maxima
from .theory import case1_bracket, expected_Ln, predict_wstar

CSV_COLUMNS = ("seed", "n", "gamma", "c0", "lambda_star", "phi_star", "repaired_W",
               "repaired_C", "feasible", "z_max", "c_max", "predicted_W", "regime",
               "mst_calls", "wall_time_ms")

C0_KINDS = ("absolute", "alpha", "case1_midpoint", "case1_lower_multiple")
Z95 = 1.959963984540054


class InvariantViolation(AssertionError):
    pass


@dataclass(frozen=True)
class C0Rule:
    """How a cell's budget is derived from n.

    absolute: c0 = value; alpha: c0 = value * n; case1_midpoint: the middle of
    the case1 bracket [c1 sqrt(500 log n), c1 n / sqrt(8000 log n)];
    case1_lower_multiple: value times the lower end of that bracket.
    ``value`` may be a list, giving one cell per entry.
    """
    kind: str = "alpha"
    value: float | tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in C0_KINDS:
            raise ValueError(f"c0_rule.kind must be one of {C0_KINDS}")
        if isinstance(self.value, list):
            object.__setattr__(self, "value", tuple(self.value))
        if self.kind != "case1_midpoint" and self.value is None:
            raise ValueError(f"c0_rule kind {self.kind} needs a value")

    def values(self) -> tuple:
        if self.value is None:
            return (None,)
        return self.value if isinstance(self.value, tuple) else (self.value,)

    def budget(self, n: int, value) -> float:
        if self.kind == "absolute":
            return float(value)
        if self.kind == "alpha":
            return float(value) * n
        lo, hi = case1_bracket(n)
        if self.kind == "case1_midpoint":
            return 0.5 * (lo + hi)
        return float(value) * lo


@dataclass(frozen=True)
class SweepConfig:
    n_values: tuple[int, ...]
    gamma: float = 1.0
    c0_rule: C0Rule | None = None
    replicates: int = 1
    master_seed: int = 0
    tol: float | None = None
    tighten_budget: bool = False
    fixed_lambda: float | None = None
    extrapolate: bool = False
    record_wall_time: bool = False

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if isinstance(self.c0_rule, dict):
            object.__setattr__(self, "c0_rule", C0Rule(**self.c0_rule))
        if not self.n_values or min(self.n_values) < 3:
            raise ValueError("n_values must be non-empty with every n >= 3")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must lie in (0, 1]")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.fixed_lambda is None and self.c0_rule is None:
            raise ValueError("c0_rule is required unless fixed_lambda is set")
        if self.fixed_lambda is not None and not self.fixed_lambda >= 0:
            raise ValueError("fixed_lambda must be non-negative")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")

    @classmethod
    def from_dict(cls, doc: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        rule = doc.get("c0_rule")
        if rule is not None:
            bad = set(rule) - {"kind", "value"}
            if bad:
                raise ValueError(f"unknown c0_rule fields: {sorted(bad)}")
        return cls(**doc)

    @classmethod
    def from_json(cls, text: str) -> "SweepConfig":
        return cls.from_dict(json.loads(text))

    def cells(self) -> list[tuple[int, float | None]]:
        """(n, c0) per cell in a fixed order; c0 is None in fixed-lambda mode."""
        if self.c0_rule is None:
            return [(n, None) for n in self.n_values]
        return [(n, self.c0_rule.budget(n, v)) for n in self.n_values
                for v in self.c0_rule.values()]


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    n: int
    gamma: float
    c0: float
    lambda_star: float
    phi_star: float
    repaired_W: float
    repaired_C: float
    feasible: bool
    z_max: float
    c_max: float
    predicted_W: float
    regime: str
    mst_calls: int
    wall_time_ms: float
    cell: int = field(default=0, compare=False)
    replicate: int = field(default=0, compare=False)
    tol: float = field(default=0.0, compare=False)
    # dual value / multiplier behind the repaired tree (differs from phi_star when tightened)
    repair_phi: float = field(default=math.nan, compare=False)
    repair_lambda: float = field(default=math.nan, compare=False)

    def check(self) -> None:
        """Raise InvariantViolation unless the record is internally consistent."""
        if self.regime in ("case3_infeasible", "fixed_lambda"):
            return
        slack = self.tol * (1.0 + self.lambda_star) + 1e-12 * max(1.0, abs(self.phi_star))
        if self.feasible:
            # weak duality: any tree within budget weighs at least phi_star
            if not self.phi_star <= self.repaired_W + slack:
                raise InvariantViolation(
                    f"phi_star {self.phi_star!r} > repaired_W {self.repaired_W!r} + {slack:.3g}")
        else:
            lam = self.repair_lambda if math.isfinite(self.repair_lambda) else self.lambda_star
            bound = self.repair_phi if math.isfinite(self.repair_phi) else self.phi_star
            rs = self.tol * (1.0 + lam) + 1e-12 * max(1.0, abs(bound))
            if not self.repaired_W <= bound + rs:
                raise InvariantViolation(
                    f"over-budget repair weighs {self.repaired_W!r} > dual bound {bound!r}")
        if not self.repaired_C <= self.c0 + self.c_max + 1e-12 * self.n:
            raise InvariantViolation(
                f"repaired_C {self.repaired_C!r} > c0 + c_max = {self.c0 + self.c_max!r}")

    def csv_row(self, record_wall_time: bool = True) -> list[str]:
        row = []
        for name in CSV_COLUMNS:
            v = getattr(self, name)
            if name == "wall_time_ms" and not record_wall_time:
                v = math.nan
            row.append(_fmt(v))
        return row


def _fmt(v) -> str:
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return format(float(v), ".17g")


def derive_seed(master_seed: int, cell: int, replicate: int) -> int:
    ss = np.random.SeedSequence(master_seed, spawn_key=(cell, replicate))
    return int(ss.generate_state(1, np.uint64)[0])


def _prediction(n, c0, gamma, extrapolate):
    try:
        p = predict_wstar(n, c0, gamma, extrapolate=extrapolate)
    except ValueError:
        return math.nan, "out_of_range"
    w = math.nan if p.w_star_predicted is None else p.w_star_predicted
    return w, p.regime


def run_trial(n: int, gamma: float, c0: float | None, seed: int, tol: float | None = None,
              tighten_budget: bool = False, fixed_lambda: float | None = None,
              extrapolate: bool = False, cell: int = 0, replicate: int = 0) -> TrialRecord:
    """One replicate: sample an instance, solve, repair, and attach the prediction.

    In fixed-lambda mode no budget is involved: phi_star holds the value of
    min_T W(T) + lam C(T) and predicted_W the matching expected_Ln.
    """
    t0 = time.perf_counter()
    inst = sample_instance(n, gamma, seed)
    tol = 1e-9 * n if tol is None else tol
    nan = math.nan
    if fixed_lambda is not None:
        pt = phi(inst, fixed_lambda, 0.0)
        z_max, c_max = tree_edge_maxima(pt.tree, inst, fixed_lambda)
        try:
            pred = expected_Ln(n, fixed_lambda, gamma)
        except ValueError:
            pred = nan
        return TrialRecord(seed, n, gamma, nan if c0 is None else c0, fixed_lambda, pt.phi,
                           pt.tree.total_weight, pt.tree.total_cost,
                           True if c0 is None else pt.tree.total_cost <= c0, z_max, c_max, pred,
                           "fixed_lambda", 1, 1e3 * (time.perf_counter() - t0), cell,
                           replicate, tol)
    pred, regime = _prediction(n, c0, gamma, extrapolate)
    try:
        sol = solve(inst, c0, tol, tighten=tighten_budget)
    except InfeasibleBudget:
        return TrialRecord(seed, n, gamma, c0, nan, nan, nan, nan, False, nan, nan, pred,
                           "case3_infeasible", 2, 1e3 * (time.perf_counter() - t0), cell,
                           replicate, tol)
    rep = sol.repaired
    z_max, c_max = tree_edge_maxima(rep, inst, sol.lambda_star)
    return TrialRecord(seed, n, gamma, c0, sol.lambda_star, sol.phi_star, rep.total_weight,
                       rep.total_cost, rep.total_cost <= c0, z_max, c_max, pred, regime,
                       sol.mst_calls, 1e3 * (time.perf_counter() - t0), cell, replicate, tol,
                       sol.repair_phi, sol.repair_lambda)


def run_sweep(cfg: SweepConfig, workers: int = 1) -> tuple[list[TrialRecord], "SummaryTable"]:
    jobs = []
    for ci, (n, c0) in enumerate(cfg.cells()):
        for r in range(cfg.replicates):
            jobs.append((ci, r, n, c0, derive_seed(cfg.master_seed, ci, r)))

    def one(job):
        ci, r, n, c0, seed = job
        return run_trial(n, cfg.gamma, c0, seed, cfg.tol, cfg.tighten_budget,
                         cfg.fixed_lambda, cfg.extrapolate, ci, r)

    if workers <= 1:
        records = [one(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(one, jobs))
    records.sort(key=lambda rec: (rec.cell, rec.replicate))
    for rec in records:
        rec.check()
    return records, summarize(records)


def write_csv(records: Sequence[TrialRecord], fh, record_wall_time: bool = True) -> None:
    """Write records after checking their invariants."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        rec.check()
        w.writerow(rec.csv_row(record_wall_time))


def records_to_csv(records: Sequence[TrialRecord], record_wall_time: bool = True) -> str:
    buf = io.StringIO()
    write_csv(records, buf, record_wall_time)
    return buf.getvalue()


# --- summaries ----------------------------------------------------------------

def _stats(x: np.ndarray) -> dict:
    x = x[np.isfinite(x)]
    k = x.size
    if k == 0:
        return {"mean": math.nan, "std": math.nan, "ci_low": math.nan, "ci_high": math.nan}
    mean = float(np.mean(x))
    std = float(np.std(x, ddof=1)) if k > 1 else 0.0
    half = Z95 * std / math.sqrt(k)
    return {"mean": mean, "std": std, "ci_low": mean - half, "ci_high": mean + half}


@dataclass
class SummaryTable:
    rows: list[dict]

    COLUMNS = ("cell", "n", "gamma", "c0", "regime", "replicates", "predicted_W",
               "phi_mean", "phi_std", "phi_ci_low", "phi_ci_high", "phi_cv", "phi_ratio",
               "W_mean", "W_std", "W_ci_low", "W_ci_high", "W_ratio", "feasible_frac",
               "lambda_mean")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.COLUMNS)
        for row in self.rows:
            w.writerow([_fmt(row.get(c)) for c in self.COLUMNS])
        return buf.getvalue()

    def by_cell(self, cell: int) -> dict:
        for row in self.rows:
            if row["cell"] == cell:
                return row
        raise KeyError(cell)


def summarize(records: Sequence[TrialRecord]) -> SummaryTable:
    groups: dict[int, list[TrialRecord]] = {}
    for rec in sorted(records, key=lambda r: (r.cell, r.replicate)):
        groups.setdefault(rec.cell, []).append(rec)
    rows = []
    for cell, recs in groups.items():
        first = recs[0]
        ph = _stats(np.array([r.phi_star for r in recs], dtype=float))
        ww = _stats(np.array([r.repaired_W for r in recs], dtype=float))
        pred = first.predicted_W
        has_pred = first.regime != "out_of_range" and math.isfinite(pred) and pred != 0
        if ph["mean"] == 0 or not math.isfinite(ph["mean"]):
            cv = math.nan
        else:
            cv = ph["std"] / abs(ph["mean"])
        rows.append({
            "cell": cell, "n": first.n, "gamma": first.gamma, "c0": first.c0,
            "regime": first.regime, "replicates": len(recs), "predicted_W": pred,
            "phi_mean": ph["mean"], "phi_std": ph["std"], "phi_ci_low": ph["ci_low"],
            "phi_ci_high": ph["ci_high"], "phi_cv": cv,
            "phi_ratio": ph["mean"] / pred if has_pred else None,
            "W_mean": ww["mean"], "W_std": ww["std"], "W_ci_low": ww["ci_low"],
            "W_ci_high": ww["ci_high"],
            "W_ratio": ww["mean"] / pred if has_pred else None,
            "feasible_frac": float(np.mean([r.feasible for r in recs])),
            "lambda_mean": float(np.nanmean([r.lambda_star for r in recs]))
            if any(math.isfinite(r.lambda_star) for r in recs) else math.nan,
        })
    return SummaryTable(rows)
