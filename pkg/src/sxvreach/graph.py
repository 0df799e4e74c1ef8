"""Immutable directed weighted graphs, vertex subsets and undirected skeletons."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised on malformed graph input."""


@dataclass(frozen=True)
class VertexSubset:
    members: np.ndarray
    origin_n: int

    def __post_init__(self):
        m = np.asarray(self.members, dtype=np.int64)
        if m.size and (m.min() < 0 or m.max() >= self.origin_n):
            raise GraphError(f"subset member out of range [0, {self.origin_n})")
        if m.size > 1 and np.any(np.diff(m) <= 0):
            raise GraphError("subset members must be sorted and distinct")
        m.setflags(write=False)
        object.__setattr__(self, "members", m)

    @classmethod
    def of(cls, members: Iterable[int], n: int) -> "VertexSubset":
        """Build from any iterable, sorting and deduplicating."""
        return cls(np.unique(np.fromiter(members, dtype=np.int64)), n)

    def __len__(self):
        return int(self.members.size)

    def __iter__(self):
        return iter(self.members.tolist())

    def __contains__(self, v):
        i = np.searchsorted(self.members, v)
        return bool(i < self.members.size and self.members[i] == v)


def as_subset(S, n: int) -> VertexSubset:
    if isinstance(S, VertexSubset):
        if S.origin_n != n:
            raise GraphError("subset belongs to a graph of different size")
        return S
    return VertexSubset.of(S, n)


@dataclass(frozen=True, eq=False)
class WeightedDiGraph:
    """Directed graph with non-negative weights stored as CSR in both directions.

    Build through :func:`build_graph`; the arrays are read-only.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    out_ptr: np.ndarray
    out_idx: np.ndarray
    out_w: np.ndarray
    in_ptr: np.ndarray
    in_idx: np.ndarray
    in_w: np.ndarray
    labels: tuple | None = field(default=None)

    @property
    def m(self) -> int:
        return int(self.src.size)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.src.tolist(), self.dst.tolist(), self.weight.tolist()))

    @property
    def aspect_ratio(self) -> float:
        nz = self.weight[self.weight > 0]
        if nz.size == 0:
            return 1.0
        return float(nz.max() / nz.min())

    @property
    def is_unweighted(self) -> bool:
        return bool(np.all(self.weight == 1.0))

    def successors(self, u: int) -> np.ndarray:
        return self.out_idx[self.out_ptr[u]:self.out_ptr[u + 1]]

    def predecessors(self, v: int) -> np.ndarray:
        return self.in_idx[self.in_ptr[v]:self.in_ptr[v + 1]]

    def out_edges(self, u: int):
        lo, hi = self.out_ptr[u], self.out_ptr[u + 1]
        return zip(self.out_idx[lo:hi].tolist(), self.out_w[lo:hi].tolist())

    def has_edge(self, u: int, v: int) -> bool:
        row = self.successors(u)
        i = np.searchsorted(row, v)
        return bool(i < row.size and row[i] == v)

    def dense_weights(self) -> np.ndarray:
        """n x n float matrix, inf where there is no edge, 0 on the diagonal."""
        W = np.full((self.n, self.n), np.inf)
        W[self.src, self.dst] = self.weight
        np.fill_diagonal(W, np.minimum(np.diag(W), 0.0))
        return W

    def to_scipy(self, weighted: bool = True):
        import scipy.sparse as sp

        data = self.weight if weighted else np.ones(self.m)
        return sp.csr_matrix((data, (self.src, self.dst)), shape=(self.n, self.n))

    def union(self, extra: Iterable[tuple]) -> "WeightedDiGraph":
        """G plus extra edges (u, v) or (u, v, w); unweighted extras get weight 1."""
        edges = self.edges
        for e in extra:
            edges.append((e[0], e[1], e[2] if len(e) > 2 else 1.0))
        return build_graph(self.n, edges, labels=self.labels)


def _csr(n, keys, vals, w):
    order = np.lexsort((vals, keys))
    keys, vals, w = keys[order], vals[order], w[order]
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(keys, minlength=n), out=ptr[1:])
    return ptr, vals, w


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)


def build_graph(n: int, edges: Iterable[Sequence], labels: Sequence | None = None) -> WeightedDiGraph:
    """Validate an edge list and build the CSR graph.

    Edges are ``(u, v)`` or ``(u, v, w)``. Parallel edges collapse to their
    minimum weight.
    """
    if n < 0:
        raise GraphError("vertex count must be non-negative")
    rows = [(e[0], e[1], e[2] if len(e) > 2 else 1.0) for e in edges]
    if rows:
        arr = np.array(rows, dtype=object)
        src = np.array(arr[:, 0], dtype=np.int64)
        dst = np.array(arr[:, 1], dtype=np.int64)
        w = np.array(arr[:, 2], dtype=np.float64)
    else:
        src = dst = np.zeros(0, dtype=np.int64)
        w = np.zeros(0)
    bad = (src < 0) | (src >= n) | (dst < 0) | (dst >= n)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise GraphError(f"edge {i} ({src[i]}, {dst[i]}) has a vertex outside [0, {n})")
    if np.any(~np.isfinite(w)) or np.any(w < 0):
        i = int(np.flatnonzero(~(np.isfinite(w) & (w >= 0)))[0])
        raise GraphError(f"edge {i} has invalid weight {w[i]}; weights must be finite and >= 0")

    # collapse parallel edges to the minimum weight
    if src.size:
        key = src * max(n, 1) + dst
        order = np.lexsort((w, key))
        key, w = key[order], w[order]
        first = np.ones(key.size, dtype=bool)
        first[1:] = key[1:] != key[:-1]
        key, w = key[first], w[first]
        src, dst = key // max(n, 1), key % max(n, 1)

    out_ptr, out_idx, out_w = _csr(n, src, dst, w)
    in_ptr, in_idx, in_w = _csr(n, dst, src, w)
    _freeze(src, dst, w, out_ptr, out_idx, out_w, in_ptr, in_idx, in_w)
    if labels is not None:
        labels = tuple(labels)
        if len(labels) != n:
            raise GraphError("need exactly one label per vertex")
    return WeightedDiGraph(n, src, dst, w, out_ptr, out_idx, out_w, in_ptr, in_idx, in_w, labels)


def induced_subgraph(G: WeightedDiGraph, U) -> tuple[WeightedDiGraph, np.ndarray, dict[int, int]]:
    """Subgraph on U. Returns (graph, new->old array, old->new dict)."""
    U = as_subset(U, G.n)
    old = U.members
    pos = np.full(G.n, -1, dtype=np.int64)
    pos[old] = np.arange(old.size)
    keep = (pos[G.src] >= 0) & (pos[G.dst] >= 0)
    H = build_graph(
        old.size,
        zip(pos[G.src[keep]].tolist(), pos[G.dst[keep]].tolist(), G.weight[keep].tolist()),
    )
    return H, old, {int(v): i for i, v in enumerate(old.tolist())}


@dataclass(frozen=True, eq=False)
class Skeleton:
    """Undirected, unweighted simple graph; ``adj[v]`` is a sorted neighbour array."""

    n: int
    adj: tuple

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, int(v)) for u in range(self.n) for v in self.adj[u] if u < v]

    def neighbours(self, v: int) -> np.ndarray:
        return self.adj[v]

    def bitmasks(self) -> list[int]:
        return [sum(1 << int(v) for v in row) for row in self.adj]


def skeleton_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Skeleton:
    nbrs = [set() for _ in range(n)]
    for u, v in edges:
        if u != v:
            nbrs[u].add(v)
            nbrs[v].add(u)
    adj = []
    for s in nbrs:
        a = np.array(sorted(s), dtype=np.int64)
        a.setflags(write=False)
        adj.append(a)
    return Skeleton(n, tuple(adj))


def underlying_skeleton(G: WeightedDiGraph) -> Skeleton:
    return skeleton_from_edges(G.n, zip(G.src.tolist(), G.dst.tolist()))


def _ceil_div_tolerant(q: np.ndarray) -> np.ndarray:
    # w/xi that is an integer up to float noise must not be bumped to the next integer
    r = np.round(q)
    near = np.abs(q - r) <= 1e-9 * np.maximum(1.0, np.abs(q))
    return np.where(near, r, np.ceil(q))


@dataclass(frozen=True, eq=False)
class IntegerizedGraph:
    """Integer-weight copy of a graph and the factor mapping its distances back.

    ``original ~= scale * integer`` with ``scale = xi * normaliser``.
    """

    graph: WeightedDiGraph
    xi: float
    normaliser: float
    max_weight: int

    @property
    def scale(self) -> float:
        return self.xi * self.normaliser


def integerize_weights(G: WeightedDiGraph, xi: float) -> IntegerizedGraph:
    """Divide by the minimum nonzero weight, multiply by 1/xi and round up.

    Zero weights stay zero; nonzero weights land in ``{ceil(1/xi), ..., ceil(W/xi)}``.
    """
    if not xi > 0:
        raise GraphError("xi must be positive")
    nz = G.weight[G.weight > 0]
    norm = float(nz.min()) if nz.size else 1.0
    q = G.weight / norm / xi
    iw = np.where(G.weight > 0, _ceil_div_tolerant(q), 0.0)
    H = build_graph(G.n, zip(G.src.tolist(), G.dst.tolist(), iw.tolist()), labels=G.labels)
    top = int(iw.max()) if iw.size else 0
    return IntegerizedGraph(H, float(xi), norm, top)


def grid_digraph(rows: int, cols: int, both_directions: bool = True, weight=1.0) -> WeightedDiGraph:
    """rows x cols grid, vertex id r*cols + c; handy for tests and the grid finder."""
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            for dr, dc in ((0, 1), (1, 0)):
                rr, cc = r + dr, c + dc
                if rr < rows and cc < cols:
                    u = rr * cols + cc
                    edges.append((v, u, weight))
                    if both_directions:
                        edges.append((u, v, weight))
    return build_graph(rows * cols, edges)


def random_digraph(n: int, m: int, rng: np.random.Generator, max_weight: float | None = None,
                   integer: bool = True) -> WeightedDiGraph:
    """Uniform random simple digraph with ~m edges (no self loops)."""
    m = min(m, n * (n - 1))
    if n < 2 or m <= 0:
        return build_graph(n, [])
    if m > n * (n - 1) // 2:
        flat = rng.choice(n * (n - 1), size=m, replace=False)
        src = flat // (n - 1)
        off = flat % (n - 1)
        dst = np.where(off >= src, off + 1, off)
    else:
        seen: set[tuple[int, int]] = set()
        while len(seen) < m:
            k = m - len(seen)
            us = rng.integers(0, n, size=2 * k)
            vs = rng.integers(0, n, size=2 * k)
            for u, v in zip(us.tolist(), vs.tolist()):
                if u != v and len(seen) < m:
                    seen.add((u, v))
        pairs = sorted(seen)
        src = np.array([p[0] for p in pairs])
        dst = np.array([p[1] for p in pairs])
    if max_weight is None:
        w = np.ones(src.size)
    elif integer:
        w = rng.integers(1, int(max_weight) + 1, size=src.size).astype(float)
    else:
        w = rng.uniform(1.0, max_weight, size=src.size)
    return build_graph(n, zip(src.tolist(), dst.tolist(), w.tolist()))


def density_edges(n: int, mu: float) -> int:
    """Edge count n**mu, capped at the simple-digraph maximum."""
    return min(n * (n - 1), max(1, int(round(n ** mu))))


def hop_exponent(n: int, count: int) -> float:
    """log_n(count); 0 when n <= 1 or count <= 1."""
    if n <= 1 or count <= 1:
        return 0.0
    return math.log(count) / math.log(n)


def path_digraph(n: int, weight=1.0) -> WeightedDiGraph:
    return build_graph(n, [(i, i + 1, weight) for i in range(n - 1)])


def cycle_digraph(n: int, weight=1.0) -> WeightedDiGraph:
    if n < 2:
        return build_graph(n, [])
    return build_graph(n, [(i, (i + 1) % n, weight) for i in range(n)])


def layered_dag(layers: int, width: int, p: float, rng: np.random.Generator) -> WeightedDiGraph:
    """Edges only go from layer i to layer i+1, each present with probability p."""
    edges = []
    for i in range(layers - 1):
        for a in range(width):
            for b in range(width):
                if rng.random() < p:
                    edges.append((i * width + a, (i + 1) * width + b))
    return build_graph(layers * width, edges)


def random_dag(n: int, m: int, rng: np.random.Generator) -> WeightedDiGraph:
    """Random DAG: a random simple digraph with every edge oriented along a random order."""
    G = random_digraph(n, m, rng)
    rank = rng.permutation(n)
    fwd = rank[G.src] < rank[G.dst]
    src = np.where(fwd, G.src, G.dst)
    dst = np.where(fwd, G.dst, G.src)
    return build_graph(n, zip(src.tolist(), dst.tolist()))
