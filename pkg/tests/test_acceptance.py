"""Acceptance runs at the stated tolerances; each prints one PASS/FAIL line in the summary."""
import io
import math
import time

import numpy as np

from costmst.experiments import SweepConfig, records_to_csv, run_sweep
from costmst.instances import exact_constrained_mst, sample_instance
from costmst.lagrange import maximize_dual, min_cost_tree, tree_edge_maxima
from costmst.theory import (C_gamma_const, c1_const, case2_weight, expected_min_ugamma, f,
                            f_prime, g, leading_wstar, phat, phat_gamma, phat_inv,
                            solve_beta_case2, solve_beta_case3, zeta3)

MC_SAMPLES = 10 ** 7


def fixed_lambda_sweep(n, lam, reps, seed):
    cfg = SweepConfig(n_values=(n,), fixed_lambda=lam, replicates=reps, master_seed=seed)
    _, summary = run_sweep(cfg)
    return summary.rows[0]


def mc_fraction(pred, seed, chunk=10 ** 6):
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(MC_SAMPLES // chunk):
        hits += np.count_nonzero(pred(rng.random(chunk), rng.random(chunk)))
    est = hits / MC_SAMPLES
    return est, math.sqrt(est * (1 - est) / MC_SAMPLES)


def test_01_oracle_sandwich(criterion):
    t = time.perf_counter()
    rng = np.random.default_rng(20240601)
    worst = {"dual": -math.inf, "cost": -math.inf, "weight": -math.inf}
    for k in range(200):
        n = int(rng.integers(4, 8))
        inst = sample_instance(n, 1.0, int(rng.integers(0, 2 ** 63)))
        c0 = float(rng.uniform(min_cost_tree(inst).total_cost, n - 1))
        sol = maximize_dual(inst, c0)
        w_star = exact_constrained_mst(inst, c0).total_weight
        rep = sol.repaired
        _, c_max = tree_edge_maxima(rep, inst, sol.lambda_star)
        worst["dual"] = max(worst["dual"], sol.phi_star - w_star - 1e-9)
        worst["cost"] = max(worst["cost"], rep.total_cost - c0 - c_max)
        worst["weight"] = max(worst["weight"],
                              rep.total_weight - sol.phi_star - sol.tol * (1 + sol.lambda_star))
    secs = time.perf_counter() - t
    ok = max(worst.values()) <= 0 and secs < 60
    detail = ", ".join(f"{k} excess {v:.2e}" for k, v in worst.items()) + f"; {secs:.1f}s"
    assert criterion("1 oracle sandwich, 200 instances", ok, detail)


def test_02_unconstrained_baseline(criterion):
    t = time.perf_counter()
    row = fixed_lambda_sweep(300, 0.0, 50, 2)
    rel = abs(row["phi_mean"] / zeta3() - 1)
    secs = time.perf_counter() - t
    ok = rel <= 0.05 and secs < 60
    assert criterion("2 unconstrained MST mean vs zeta(3), n=300", ok,
                     f"mean {row['phi_mean']:.4f}, rel err {rel:.3%}; {secs:.1f}s")


def test_03_mid_lambda(criterion):
    t = time.perf_counter()
    row = fixed_lambda_sweep(500, 1.0, 30, 3)
    ref = c1_const() * math.sqrt(500)
    rel = abs(row["phi_mean"] / ref - 1)
    secs = time.perf_counter() - t
    ok = rel <= 0.10 and secs < 120
    assert criterion("3 E L_n vs c1 sqrt(lam n), n=500, lam=1", ok,
                     f"mean {row['phi_mean']:.3f} vs {ref:.3f}, rel err {rel:.3%}; {secs:.1f}s")


def test_04_small_lambda(criterion):
    t = time.perf_counter()
    parts, ok = [], True
    for i, beta in enumerate((0.5, 2.0)):
        row = fixed_lambda_sweep(500, 2 * beta / 500, 30, 40 + i)
        rel = abs(row["phi_mean"] / f(beta) - 1)
        ok &= rel <= 0.10
        parts.append(f"beta={beta}: {row['phi_mean']:.4f} vs f={f(beta):.4f} ({rel:.2%})")
    secs = time.perf_counter() - t
    ok &= secs < 120
    assert criterion("4 E L_n vs f(beta), n=500", ok, "; ".join(parts) + f"; {secs:.1f}s")


def test_05_case1_prediction(criterion):
    t = time.perf_counter()
    trend = []
    for n in (250, 500, 1000):
        c0 = 4 * c1_const() * math.sqrt(500 * math.log(n))
        cfg = SweepConfig(n_values=(n,), c0_rule={"kind": "absolute", "value": c0},
                          replicates=20, master_seed=5, tighten_budget=True)
        _, summary = run_sweep(cfg)
        row = summary.rows[0]
        ref = leading_wstar(n, c0)
        trend.append((n, row["phi_mean"] / ref, row["W_mean"] / ref))
    secs = time.perf_counter() - t
    _, phi_r, w_r = trend[-1]
    dist = [max(abs(a - 1), abs(b - 1)) for _, a, b in trend]
    toward_one = all(x > y for x, y in zip(dist, dist[1:]))
    ok = abs(phi_r - 1) <= 0.2 and abs(w_r - 1) <= 0.2 and toward_one and secs < 300
    detail = ", ".join(f"n={n}: phi/pred {a:.4f} W/pred {b:.4f}" for n, a, b in trend)
    assert criterion("5 case-1 W* ~ c1^2 n/(4 c0), n=1000 within 20%", ok, detail + f"; {secs:.1f}s")


def test_06_fprime_decreasing(criterion):
    grid = np.geomspace(1e-3, 30, 500)
    d = np.diff([f_prime(b) for b in grid])
    ok = bool((d < 0).all())
    assert criterion("6 f' strictly decreasing on [1e-3, 30]", ok, f"largest difference {d.max():.3e}")


def test_07_phat_geometry(criterion):
    worst = max(abs(phat_inv(phat(p, lam), lam) - p)
                for lam in (0.01, 0.5, 1.0, 2.0, 100.0) for p in np.linspace(0, 1, 100))
    lam, p = 3.0, 0.4
    est, se = mc_fraction(lambda u, v: u / (1 + lam) + v / (1 + 1 / lam) <= p, 7)
    z = abs(phat(p, lam) - est) / se
    ok = worst <= 1e-12 and z <= 4
    assert criterion("7 phat round trip and MC area", ok,
                     f"round trip worst {worst:.1e}; phat(0.4,3)={phat(p, lam):.6f} vs MC {est:.6f} ({z:.2f} se)")


def test_08_gamma_below_one(criterion):
    d_c = abs(C_gamma_const(1.0) - c1_const())
    exact_ok = all(expected_min_ugamma(n, 1.0).exact == 1 / (n + 1) for n in range(1, 101))
    m = expected_min_ugamma(10 ** 4, 0.5)
    ratio = m.exact / m.asymptotic
    t, lam, gam = 0.8, 2.0, 0.5
    est, se = mc_fraction(lambda u, v: u ** gam + lam * v ** gam < t, 8)
    z = abs(phat_gamma(t, lam, gam) - est) / se
    ok = d_c <= 1e-10 and exact_ok and abs(ratio - 1) <= 1e-3 and z <= 4
    assert criterion("8 gamma<1 formulas", ok,
                     f"|C_1-c1|={d_c:.1e}; 1/(n+1) exact: {exact_ok}; ratio-1={ratio - 1:.2e}; "
                     f"phat_gamma {phat_gamma(t, lam, gam):.6f} vs MC {est:.6f} ({z:.2f} se)")


def test_09_root_solvers(criterion):
    r2 = max(abs(f_prime(solve_beta_case2(a)) - 2 * a) for a in np.linspace(0.01, 0.49, 25))
    r3 = max(abs(g(solve_beta_case3(a)) - a) for a in np.linspace(1.21, 20.0, 25))
    b_half = solve_beta_case2(0.5)
    w_half = abs(case2_weight(0.5) - zeta3())
    ok = abs(b_half) <= 1e-8 and r2 <= 1e-10 and r3 <= 1e-10 and w_half <= 1e-6
    assert criterion("9 root solvers", ok,
                     f"beta2(0.5)={b_half}; case2 residual {r2:.1e}; case3 residual {r3:.1e}; "
                     f"|W(1/2)-zeta3|={w_half:.1e}")


def test_10_concentration(criterion):
    t = time.perf_counter()
    row = fixed_lambda_sweep(500, 1.0, 30, 10)
    secs = time.perf_counter() - t
    ok = row["phi_cv"] <= 0.05 and secs < 120
    assert criterion("10 CV of phi(1), n=500", ok, f"cv {row['phi_cv']:.4f}; {secs:.1f}s")


def test_11_determinism(criterion):
    t = time.perf_counter()
    cfg = SweepConfig.from_dict({"n_values": [20, 60], "replicates": 6, "master_seed": 99,
                                 "c0_rule": {"kind": "alpha", "value": [0.1, 0.3]},
                                 "tighten_budget": True})
    a, _ = run_sweep(cfg, workers=1)
    b, _ = run_sweep(cfg, workers=8)
    ba = records_to_csv(a, record_wall_time=False).encode()
    bb = records_to_csv(b, record_wall_time=False).encode()
    secs = time.perf_counter() - t
    ok = ba == bb and secs < 60
    assert criterion("11 determinism, 1 vs 8 threads", ok, f"{len(a)} records, {len(ba)} bytes; {secs:.1f}s")
