import itertools
import json
import math

import numpy as np
import pytest

from costmst.instances import (Instance, SpanningTree, edge_index, enumerate_spanning_trees,
                               exact_constrained_mst, mst, n_edges, sample_instance,
                               tree_edge_table, tree_totals, uniform_block)


def laplacian_count(n):
    # matrix-tree theorem on K_n: any cofactor of the Laplacian
    L = n * np.eye(n) - np.ones((n, n))
    return round(np.linalg.det(L[1:, 1:]))


def test_sample_support_and_determinism():
    a = sample_instance(5, 1.0, 7)
    b = sample_instance(5, 1.0, 7)
    off = ~np.eye(5, dtype=bool)
    assert off.sum() == 20
    for m in (a.weights, a.costs):
        assert ((m[off] > 0) & (m[off] < 1)).all()
        assert np.array_equal(m, m.T)
        assert (np.diag(m) == 0).all()
    assert a.weights.tobytes() == b.weights.tobytes()
    assert a.costs.tobytes() == b.costs.tobytes()


def test_single_edge_instance():
    inst = sample_instance(2, 1.0, 123)
    assert inst.upper("weights").shape == (1,)
    assert inst.upper("costs").shape == (1,)


def test_gamma_half_mean():
    # E[U^(1/2)] = 2/3 and Var = 1/2 - 4/9 = 1/18
    inst = sample_instance(64, 0.5, 99)
    x = np.concatenate([inst.upper("weights"), inst.upper("costs")])[:2000]
    se = math.sqrt(1 / 18 / x.size)
    assert abs(x.mean() - 2 / 3) < 3 * se


def test_canonical_stream_order():
    n, seed = 7, 31
    inst = sample_instance(n, 1.0, seed)
    m = n_edges(n)
    raw = uniform_block(seed, 0, 2 * m)
    assert np.array_equal(inst.upper("weights"), raw[:m])
    assert np.array_equal(inst.upper("costs"), raw[m:])
    # any slice can be generated on its own
    assert np.array_equal(uniform_block(seed, m + 3, 4), raw[m + 3:m + 7])
    for (i, j) in [(0, 1), (2, 5), (5, 6)]:
        assert inst.weights[i, j] == raw[edge_index(i, j, n)]


def test_gamma_power_transform():
    a = sample_instance(6, 1.0, 5)
    b = sample_instance(6, 0.3, 5)
    np.testing.assert_allclose(b.upper("weights"), np.minimum(a.upper("weights") ** 0.3, 1.0), rtol=0)


@pytest.mark.parametrize("n,gamma", [(1, 1.0), (5, 0.0), (5, 1.5), (5, -1.0)])
def test_sample_rejects(n, gamma):
    with pytest.raises(ValueError):
        sample_instance(n, gamma, 0)


def test_json_round_trip_is_bit_exact():
    inst = sample_instance(9, 0.7, 2 ** 63 + 5)
    back = Instance.from_json(inst.to_json())
    assert back.n == 9 and back.gamma == 0.7 and back.seed == 2 ** 63 + 5
    assert back.weights.tobytes() == inst.weights.tobytes()
    assert back.costs.tobytes() == inst.costs.tobytes()
    # 17 significant digits are enough as well
    doc = json.loads(inst.to_json())
    doc["weights"] = [float(format(x, ".17g")) for x in doc["weights"]]
    assert Instance.from_json(json.dumps(doc)).weights.tobytes() == inst.weights.tobytes()


def test_json_rejects_unknown_and_bad_shapes():
    doc = json.loads(sample_instance(4, 1.0, 1).to_json())
    with pytest.raises(ValueError):
        Instance.from_json(json.dumps({**doc, "extra": 1}))
    with pytest.raises(ValueError):
        Instance.from_json(json.dumps({**doc, "weights": doc["weights"][:-1]}))


def test_mst_triangle():
    inst = Instance.from_upper(3, [0.1, 0.2, 0.3], [0.5, 0.5, 0.5])
    t = mst(inst, inst.weights)
    assert t.edges == ((0, 1), (0, 2))
    assert t.total_weight == pytest.approx(0.3, abs=1e-15)


def test_mst_n2():
    inst = sample_instance(2, 1.0, 4)
    assert mst(inst, inst.weights).edges == ((0, 1),)


def test_mst_tie_break_lexicographic():
    # all values equal: Prim with (value, index) order picks the star at vertex 0
    inst = Instance.from_upper(4, [0.5] * 6, [0.5] * 6)
    assert mst(inst, inst.weights).edges == ((0, 1), (0, 2), (0, 3))


def test_mst_rejects_nonfinite():
    inst = sample_instance(4, 1.0, 0)
    v = inst.weights.copy()
    v[0, 1] = v[1, 0] = np.inf
    with pytest.raises(ValueError):
        mst(inst, v)
    with pytest.raises(ValueError):
        mst(inst, np.zeros((3, 3)))


def test_mst_matches_enumeration_n7():
    table = tree_edge_table(7)
    for s in range(100):
        inst = sample_instance(7, 1.0, 500 + s)
        w = inst.upper("weights")[table].sum(axis=1)
        assert mst(inst, inst.weights).total_weight == pytest.approx(w.min(), abs=1e-12)


def test_mst_beats_random_trees():
    rng = np.random.default_rng(0)
    inst = sample_instance(12, 1.0, 77)
    for lam in (0.0, 0.7, 5.0):
        vals = inst.weights + lam * inst.costs
        best = mst(inst, vals).value(inst, lam)
        for _ in range(1000):
            # random tree from a random Pruefer sequence
            code = rng.integers(0, 12, size=10)
            edges = _pruefer_edges(code, 12)
            t = SpanningTree.from_edges(inst, edges)
            assert best <= t.value(inst, lam) + 1e-12


def _pruefer_edges(code, n):
    # textbook decoding, independent of the vectorized table
    degree = [1] * n
    for x in code:
        degree[x] += 1
    edges = []
    for x in code:
        leaf = min(i for i in range(n) if degree[i] == 1)
        edges.append((leaf, int(x)))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(n) if degree[i] == 1]
    edges.append((u, v))
    return edges


@pytest.mark.parametrize("n", range(2, 10))
def test_enumeration_count_matches_matrix_tree(n):
    table = tree_edge_table(n)
    assert table.shape == (laplacian_count(n) if n > 2 else 1, n - 1)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_enumeration_yields_distinct_spanning_trees(n):
    trees = [frozenset(t) for t in enumerate_spanning_trees(n)]
    assert len(trees) == len(set(trees)) == {3: 3, 4: 16, 5: 125}[n]
    inst = sample_instance(n, 1.0, 0)
    assert all(SpanningTree.from_edges(inst, t).is_spanning_tree(n) for t in trees)


def test_enumeration_n6_against_brute_force_subsets():
    # every 5-subset of the 15 edges that is a spanning tree
    inst = sample_instance(6, 1.0, 0)
    pairs = list(itertools.combinations(range(6), 2))
    brute = {frozenset(s) for s in itertools.combinations(pairs, 5)
             if SpanningTree.from_edges(inst, s).is_spanning_tree(6)}
    assert brute == {frozenset(t) for t in enumerate_spanning_trees(6)}


def test_enumeration_rejects_large_n():
    with pytest.raises(ValueError):
        next(enumerate_spanning_trees(10))


def test_spanning_tree_totals_cached():
    inst = sample_instance(8, 1.0, 3)
    t = mst(inst, inst.costs)
    assert t.is_spanning_tree(8)
    assert abs(t.total_weight - sum(inst.weights[e] for e in t.edges)) < 1e-12
    assert abs(t.total_cost - sum(inst.costs[e] for e in t.edges)) < 1e-12
    assert not SpanningTree.from_edges(inst, [(0, 1), (1, 2), (0, 2)]).is_spanning_tree(3)


def test_exact_trivial_budgets():
    inst = sample_instance(6, 1.0, 8)
    assert exact_constrained_mst(inst, 0.0) is None
    big = exact_constrained_mst(inst, 5.0)
    assert big.total_weight == pytest.approx(mst(inst, inst.weights).total_weight, abs=1e-12)


def test_exact_median_budget_against_filtered_enumeration():
    inst = sample_instance(6, 1.0, 21)
    trees = list(enumerate_spanning_trees(6))
    assert len(trees) == 6 ** 4
    W = [sum(inst.weights[e] for e in t) for t in trees]
    C = [sum(inst.costs[e] for e in t) for t in trees]
    c0 = float(np.median(C))
    best = min(w for w, c in zip(W, C) if c <= c0)
    got = exact_constrained_mst(inst, c0)
    assert got.total_cost <= c0
    assert got.total_weight == pytest.approx(best, abs=1e-12)


def test_exact_monotone_in_budget():
    for s in range(5):
        inst = sample_instance(7, 1.0, 40 + s)
        w, c = tree_totals(inst)
        prev = math.inf
        for c0 in np.linspace(c.min(), c.max(), 15):
            cur = exact_constrained_mst(inst, c0).total_weight
            assert cur <= prev
            prev = cur


def test_exact_rejects_large_n():
    with pytest.raises(ValueError):
        exact_constrained_mst(sample_instance(10, 1.0, 0), 5.0)
