"""Random complete-graph instances, dense MST, and exhaustive small-n oracles.

Edge values are U**gamma with U uniform on (0, 1).  Draws come from a single
Philox stream keyed by the instance seed and are consumed in canonical order:
the m = n(n-1)/2 weights of the row-major upper triangle first, then the m
costs.  Because Philox is counter based, the draw for (tag, edge index) sits
at stream position ``tag * m + index`` and any slice of the stream can be
produced independently by jumping the counter.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

MAX_ENUM_N = 9
_TWO_POW_M53 = 2.0 ** -53
_BELOW_ONE = np.nextafter(1.0, 0.0)


def n_edges(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(i: int, j: int, n: int) -> int:
    """Position of edge {i, j} in the row-major upper triangle."""
    if i > j:
        i, j = j, i
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def _open_unit(bits: np.ndarray) -> np.ndarray:
    # (k + 1/2) 2^-53 with k the top 53 bits: strictly inside (0, 1)
    return ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_POW_M53


def uniform_block(seed: int, start: int, count: int) -> np.ndarray:
    """Draws ``start .. start+count-1`` of the instance stream for ``seed``."""
    bg = np.random.Philox(key=int(seed) & (2**64 - 1))
    # advance() steps the 256-bit counter, i.e. blocks of four 64-bit draws
    block, skip = divmod(int(start), 4)
    if block:
        bg.advance(block)
    return _open_unit(bg.random_raw(skip + count)[skip:])


def _to_matrix(upper: np.ndarray, n: int) -> np.ndarray:
    mat = np.zeros((n, n))
    iu = np.triu_indices(n, 1)
    mat[iu] = upper
    mat.T[iu] = upper
    return mat


@dataclass(frozen=True, eq=False)
class Instance:
    """Complete graph K_n with symmetric weight and cost matrices.

    The diagonal of both matrices is unused and stored as 0.
    """

    n: int
    gamma: float
    weights: np.ndarray
    costs: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        for mat in (self.weights, self.costs):
            mat.setflags(write=False)

    def upper(self, which: str = "weights") -> np.ndarray:
        return getattr(self, which)[np.triu_indices(self.n, 1)]

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n,
            "gamma": self.gamma,
            "seed": self.seed,
            "weights": self.upper("weights").tolist(),
            "costs": self.upper("costs").tolist(),
        })

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        doc = json.loads(text)
        unknown = set(doc) - {"n", "gamma", "seed", "weights", "costs"}
        if unknown:
            raise ValueError(f"unknown instance fields: {sorted(unknown)}")
        n = int(doc["n"])
        w = np.asarray(doc["weights"], dtype=np.float64)
        c = np.asarray(doc["costs"], dtype=np.float64)
        if n < 2 or w.shape != (n_edges(n),) or c.shape != (n_edges(n),):
            raise ValueError("instance arrays do not match n")
        return cls(n=n, gamma=float(doc["gamma"]), weights=_to_matrix(w, n),
                   costs=_to_matrix(c, n), seed=doc.get("seed"))

    @classmethod
    def from_upper(cls, n: int, weights: Sequence[float], costs: Sequence[float],
                   gamma: float = 1.0) -> "Instance":
        """Build an instance from explicit upper-triangle edge values."""
        w = np.asarray(weights, dtype=np.float64)
        c = np.asarray(costs, dtype=np.float64)
        if w.shape != (n_edges(n),) or c.shape != (n_edges(n),):
            raise ValueError("need n(n-1)/2 weights and costs")
        return cls(n=n, gamma=gamma, weights=_to_matrix(w, n), costs=_to_matrix(c, n))


def sample_instance(n: int, gamma: float, seed: int) -> Instance:
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    m = n_edges(n)
    u = uniform_block(seed, 0, 2 * m)
    if gamma != 1.0:
        # u**gamma can round up to exactly 1.0 for u near 1
        u = np.minimum(u ** gamma, _BELOW_ONE)
    return Instance(n=n, gamma=float(gamma), weights=_to_matrix(u[:m], n),
                    costs=_to_matrix(u[m:], n), seed=int(seed))


@dataclass(frozen=True)
class SpanningTree:
    edges: tuple[tuple[int, int], ...]
    total_weight: float
    total_cost: float
    _key: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_key", frozenset(self.edges))

    @classmethod
    def from_edges(cls, inst: Instance, edges) -> "SpanningTree":
        es = tuple(sorted((min(i, j), max(i, j)) for i, j in edges))
        rows = [e[0] for e in es]
        cols = [e[1] for e in es]
        return cls(es, math.fsum(inst.weights[rows, cols]), math.fsum(inst.costs[rows, cols]))

    @property
    def edge_set(self) -> frozenset:
        return self._key

    def value(self, inst: Instance, lam: float) -> float:
        return self.total_weight + lam * self.total_cost

    def is_spanning_tree(self, n: int) -> bool:
        if len(self.edges) != n - 1:
            return False
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in self.edges:
            ri, rj = find(i), find(j)
            if ri == rj:
                return False
            parent[ri] = rj
        return True

    def to_dict(self) -> dict:
        return {"edges": [list(e) for e in self.edges], "W": self.total_weight,
                "C": self.total_cost}


def mst_edges(values: np.ndarray) -> list[tuple[int, int]]:
    """Dense Prim on a symmetric value matrix; O(n^2) total.

    Edges are compared by (value, edge index), so among equal-value trees the
    one built from lexicographically smaller edges wins.
    """
    n = values.shape[0]
    if n == 1:
        return []
    eidx = _edge_index_matrix(n)
    outside = np.ones(n, dtype=bool)
    outside[0] = False
    key = values[0].astype(np.float64, copy=True)
    key_idx = eidx[0].copy()
    parent = np.zeros(n, dtype=np.int64)
    key[0] = np.inf
    edges = []
    for _ in range(n - 1):
        v = int(np.argmin(key))
        kv = key[v]
        if np.count_nonzero(key == kv) > 1:
            ties = np.flatnonzero(key == kv)
            v = int(ties[np.argmin(key_idx[ties])])
        u = int(parent[v])
        edges.append((u, v) if u < v else (v, u))
        outside[v] = False
        key[v] = np.inf
        row = values[v]
        ridx = eidx[v]
        better = row < key
        eq = row == key
        if eq.any():
            better |= eq & (ridx < key_idx)
        better &= outside
        key[better] = row[better]
        key_idx[better] = ridx[better]
        parent[better] = v
    return edges


@lru_cache(maxsize=16)
def _edge_index_matrix(n: int) -> np.ndarray:
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    lo, hi = np.minimum(i, j), np.maximum(i, j)
    out = lo * n - lo * (lo + 1) // 2 + (hi - lo - 1)
    out[lo == hi] = -1
    out.setflags(write=False)
    return out


def mst(inst: Instance, edge_value: np.ndarray) -> SpanningTree:
    """Minimum spanning tree of ``inst`` under an n x n matrix of edge values."""
    values = np.asarray(edge_value, dtype=np.float64)
    if values.shape != (inst.n, inst.n):
        raise ValueError("edge_value must be an n x n matrix")
    if not np.isfinite(values).all():
        raise ValueError("edge values must be finite")
    return SpanningTree.from_edges(inst, mst_edges(values))


# --- exhaustive oracles -------------------------------------------------------

@lru_cache(maxsize=None)
def tree_edge_table(n: int) -> np.ndarray:
    """All n**(n-2) labelled spanning trees as a (count, n-1) edge-index table.

    Rows are Pruefer sequences decoded in lexicographic order.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > MAX_ENUM_N:
        raise ValueError(f"enumeration is limited to n <= {MAX_ENUM_N}")
    count = n ** (n - 2)
    out = np.empty((count, n - 1), dtype=np.uint8)
    if n == 2:
        out[:] = 0
    else:
        eidx = _edge_index_matrix(n)
        step = 1 << 19
        for start in range(0, count, step):
            stop = min(count, start + step)
            _decode_pruefer(np.arange(start, stop), n, eidx, out[start:stop])
    out.setflags(write=False)
    return out


def _decode_pruefer(codes: np.ndarray, n: int, eidx: np.ndarray, out: np.ndarray) -> None:
    seqs = np.stack(np.unravel_index(codes, (n,) * (n - 2)), axis=1)
    rows = np.arange(len(codes))
    degree = 1 + (seqs[:, :, None] == np.arange(n)).sum(axis=1, dtype=np.int8)
    for col in range(n - 2):
        leaf = np.argmax(degree == 1, axis=1)
        other = seqs[:, col]
        out[:, col] = eidx[leaf, other]
        degree[rows, leaf] = 0
        degree[rows, other] -= 1
    # the two vertices left with degree one form the final edge
    last = np.argsort(degree != 1, axis=1, kind="stable")[:, :2]
    out[:, n - 2] = eidx[last[:, 0], last[:, 1]]


def enumerate_spanning_trees(n: int) -> Iterator[list[tuple[int, int]]]:
    """Yield every labelled spanning tree of K_n once, as a list of edges."""
    table = tree_edge_table(n)
    pairs = list(itertools.combinations(range(n), 2))
    for row in table:
        yield [pairs[k] for k in row]


def tree_totals(inst: Instance) -> tuple[np.ndarray, np.ndarray]:
    """Weight and cost of every spanning tree of a small instance."""
    table = tree_edge_table(inst.n)
    return inst.upper("weights")[table].sum(axis=1), inst.upper("costs")[table].sum(axis=1)


def exact_constrained_mst(inst: Instance, c0: float) -> SpanningTree | None:
    """Brute-force optimum of min W(T) s.t. C(T) <= c0, or None if infeasible."""
    if inst.n > MAX_ENUM_N:
        raise ValueError(f"exact oracle is limited to n <= {MAX_ENUM_N}")
    table = tree_edge_table(inst.n)
    w, c = tree_totals(inst)
    feasible = np.flatnonzero(c <= c0)
    if feasible.size == 0:
        return None
    best = feasible[np.argmin(w[feasible])]
    pairs = list(itertools.combinations(range(inst.n), 2))
    return SpanningTree.from_edges(inst, [pairs[k] for k in table[best]])
