"""Reference implementations used as ground truth by the test-suite.

These favour obviousness over speed. None of them touch the semiring kernels.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass

import numpy as np

from .graph import VertexSubset, WeightedDiGraph

TC_CAP = 512


@dataclass(frozen=True)
class DistanceVector:
    source: int
    dist: np.ndarray


def _check_source(G, s):
    if not 0 <= s < G.n:
        raise ValueError(f"source {s} outside [0, {G.n})")


def bfs_reach(G: WeightedDiGraph, s: int) -> VertexSubset:
    _check_source(G, s)
    seen = np.zeros(G.n, dtype=bool)
    seen[s] = True
    q = deque([s])
    while q:
        u = q.popleft()
        for v in G.successors(u).tolist():
            if not seen[v]:
                seen[v] = True
                q.append(v)
    return VertexSubset(np.flatnonzero(seen), G.n)


def reach_rows(G: WeightedDiGraph, sources) -> np.ndarray:
    """|S| x n boolean matrix, row i = indicator of bfs_reach(G, S[i])."""
    S = list(getattr(sources, "members", sources))
    out = np.zeros((len(S), G.n), dtype=bool)
    for i, s in enumerate(S):
        out[i, bfs_reach(G, int(s)).members] = True
    return out


def dijkstra(G: WeightedDiGraph, s: int) -> DistanceVector:
    _check_source(G, s)
    if np.any(G.weight < 0):
        raise ValueError("negative edge weight")
    dist = np.full(G.n, np.inf)
    dist[s] = 0.0
    heap = [(0.0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in G.out_edges(u):
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return DistanceVector(s, dist)


def k_bounded_distances(G: WeightedDiGraph, s: int, k: int) -> DistanceVector:
    """Bellman-Ford stopped after k synchronous rounds: shortest paths with <= k edges."""
    _check_source(G, s)
    if k < 0:
        raise ValueError("k must be >= 0")
    dist = np.full(G.n, np.inf)
    dist[s] = 0.0
    for _ in range(k):
        cand = dist[G.src] + G.weight
        nxt = dist.copy()
        np.minimum.at(nxt, G.dst, cand)
        if np.array_equal(nxt, dist):
            break
        dist = nxt
    return DistanceVector(s, dist)


def k_bounded_all(G: WeightedDiGraph, sources, k: int) -> np.ndarray:
    """k-bounded distances from every source at once (rows follow ``sources``)."""
    S = np.asarray(list(getattr(sources, "members", sources)), dtype=np.int64)
    dist = np.full((S.size, G.n), np.inf)
    dist[np.arange(S.size), S] = 0.0
    if G.m == 0 or S.size == 0:
        return dist
    order = np.argsort(G.dst, kind="stable")
    src, dst, w = G.src[order], G.dst[order], G.weight[order]
    starts = np.flatnonzero(np.r_[True, dst[1:] != dst[:-1]])
    targets = dst[starts]
    for _ in range(k):
        cand = dist[:, src] + w[None, :]
        best = np.minimum.reduceat(cand, starts, axis=1)
        nxt = dist.copy()
        nxt[:, targets] = np.minimum(nxt[:, targets], best)
        if np.array_equal(nxt, dist):
            break
        dist = nxt
    return dist


def floyd_warshall(W: np.ndarray) -> np.ndarray:
    """All-pairs distances of a dense weight matrix (inf = no edge)."""
    D = np.array(W, dtype=np.float64, copy=True)
    n = D.shape[0]
    if n:
        np.fill_diagonal(D, np.minimum(np.diag(D), 0.0))
    for k in range(n):
        np.minimum(D, D[:, k:k + 1] + D[k:k + 1, :], out=D)
    return D


def all_pairs_distances(G: WeightedDiGraph) -> np.ndarray:
    return floyd_warshall(G.dense_weights())


def hop_distances(G: WeightedDiGraph) -> np.ndarray:
    """Unweighted (hop) all-pairs distances by BFS from every vertex."""
    out = np.full((G.n, G.n), np.inf)
    for s in range(G.n):
        out[s, s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for v in G.successors(u).tolist():
                if out[s, v] == np.inf:
                    out[s, v] = out[s, u] + 1
                    q.append(v)
    return out


def transitive_closure(G: WeightedDiGraph, cap: int = TC_CAP) -> np.ndarray:
    """Reflexive closure by repeated squaring of A + I (dense n x n bool)."""
    if G.n > cap:
        raise ValueError(f"transitive_closure capped at n <= {cap}")
    R = np.eye(G.n, dtype=np.float32)
    R[G.src, G.dst] = 1.0
    for _ in range(max(1, int(np.ceil(np.log2(max(G.n, 2)))))):
        R = np.minimum(R @ R, 1.0)
    return R > 0
