"""Diameter-reducing edge sets: sampled D-shortcuts and separator-tree shortcuts/hopsets."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .graph import WeightedDiGraph, build_graph, induced_subgraph, underlying_skeleton
from .separators import DecompositionTree, TreeNode, hopbound, validate_tree

PIVOT_CONSTANT = 3.0


class TreeMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ShortcutSet:
    src: np.ndarray
    dst: np.ndarray
    target_hopbound: int

    def __len__(self):
        return int(self.src.size)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.src.tolist(), self.dst.tolist()))

    def lines(self) -> list[str]:
        return [f"{u} {v}" for u, v in self.edges]


@dataclass(frozen=True, eq=False)
class HopsetSet:
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    eps: float
    hopbound: int

    def __len__(self):
        return int(self.src.size)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.src.tolist(), self.dst.tolist(), self.weight.tolist()))

    def lines(self) -> list[str]:
        return [f"{u} {v} {w:.17g}" for u, v, w in self.edges]


def _sorted_pairs(pairs) -> tuple[np.ndarray, np.ndarray]:
    if not pairs:
        z = np.zeros(0, dtype=np.int64)
        return z, z.copy()
    arr = np.unique(np.array(sorted(pairs), dtype=np.int64), axis=0)
    return arr[:, 0].copy(), arr[:, 1].copy()


# -- sampled D-shortcut ----------------------------------------------------

def _hop_matrix(G: WeightedDiGraph, extra_src=None, extra_dst=None, indices=None, transpose=False):
    src, dst = G.src, G.dst
    if extra_src is not None and extra_src.size:
        src = np.concatenate([src, extra_src])
        dst = np.concatenate([dst, extra_dst])
    if transpose:
        src, dst = dst, src
    M = sp.csr_matrix((np.ones(src.size), (src, dst)), shape=(G.n, G.n))
    return csgraph.shortest_path(M, method="D", unweighted=True, indices=indices)


def sampling_d_shortcut(G: WeightedDiGraph, D: int, seed=None, c: float = PIVOT_CONSTANT) -> ShortcutSet:
    """Randomised D-shortcut: connect sampled pivots to everything they reach and vice versa.

    With ceil(c n ln n / D) pivots, every path of at least D hops contains a
    pivot with probability >= 1 - 1/n (for c = 3), and is then replaced by
    two shortcut hops. Edges already in G are not repeated.
    """
    if D < 1:
        raise ValueError("D must be >= 1")
    n = G.n
    if n <= 1 or D >= n - 1:
        return ShortcutSet(*_sorted_pairs([]), int(D))
    k = min(n, math.ceil(c * n * math.log(n) / D))
    rng = np.random.default_rng(seed)
    pivots = np.sort(rng.choice(n, size=k, replace=False))
    fwd = np.isfinite(_hop_matrix(G, indices=pivots))
    bwd = np.isfinite(_hop_matrix(G, indices=pivots, transpose=True))
    P = np.repeat(pivots, n)
    X = np.tile(np.arange(n), pivots.size)
    s1, d1 = P[fwd.ravel()], X[fwd.ravel()]
    s2, d2 = X[bwd.ravel()], P[bwd.ravel()]
    src = np.concatenate([s1, s2])
    dst = np.concatenate([d1, d2])
    keep = src != dst
    src, dst = src[keep], dst[keep]
    if src.size:
        key = np.unique(src * n + dst)
        key = key[~np.isin(key, G.src * n + G.dst)]
        src, dst = key // n, key % n
    return ShortcutSet(src.astype(np.int64), dst.astype(np.int64), int(D))


def hop_diameter(G: WeightedDiGraph, H=None) -> int:
    """Largest hop distance in G + H over pairs (u, v) with v reachable from u in G."""
    hs, hd = _extra(H)
    reach = np.isfinite(_hop_matrix(G))
    hops = _hop_matrix(G, hs, hd)
    if not reach.any():
        return 0
    vals = hops[reach]
    return int(vals.max()) if np.all(np.isfinite(vals)) else -1


def verify_hop_diameter(G: WeightedDiGraph, H, D: int) -> bool:
    """True iff every pair reachable in G is joined by a path of <= D hops in G + H."""
    hs, hd = _extra(H)
    reach = np.isfinite(_hop_matrix(G))
    hops = _hop_matrix(G, hs, hd)
    return bool(np.all(hops[reach] <= D))


def _extra(H):
    if H is None:
        return None, None
    if isinstance(H, (ShortcutSet, HopsetSet)):
        return H.src, H.dst
    pairs = list(H)
    if not pairs:
        return None, None
    arr = np.array([(p[0], p[1]) for p in pairs], dtype=np.int64)
    return arr[:, 0], arr[:, 1]


# -- per-node estimates ----------------------------------------------------------

@dataclass(eq=False)
class NodeEstimates:
    """Distance estimates of one tree node over ``keys`` x ``keys``.

    ``defined`` marks the pairs the node is responsible for (S x S + B x B,
    or everything for a leaf); other cells are unusable.
    """

    node: int
    keys: np.ndarray
    table: np.ndarray
    defined: np.ndarray

    def index(self, vs) -> np.ndarray:
        vs = np.asarray(vs, dtype=np.int64)
        pos = np.searchsorted(self.keys, vs)
        if vs.size and (np.any(pos >= self.keys.size) or np.any(self.keys[np.minimum(pos, self.keys.size - 1)] != vs)):
            raise KeyError(f"node {self.node} has no estimates for some of {vs.tolist()}")
        return pos

    def block(self, rows, cols) -> np.ndarray:
        i, j = self.index(rows), self.index(cols)
        if not np.all(self.defined[np.ix_(i, j)]):
            raise KeyError(f"node {self.node}: requested pair outside its estimate set")
        return self.table[np.ix_(i, j)]

    def get(self, u: int, v: int) -> float:
        return float(self.block([u], [v])[0, 0])

    def pairs(self):
        """Defined off-diagonal pairs with finite estimates, as (u, v, w) arrays."""
        mask = self.defined & np.isfinite(self.table)
        np.fill_diagonal(mask, False)
        i, j = np.nonzero(mask)
        return self.keys[i], self.keys[j], self.table[i, j]


def _apsp(W: np.ndarray) -> np.ndarray:
    D = np.array(W, dtype=np.float64, copy=True)
    k = D.shape[0]
    if k:
        np.fill_diagonal(D, np.minimum(np.diag(D), 0.0))
    for m in range(k):
        np.minimum(D, D[:, [m]] + D[[m], :], out=D)
    return D


def _round_up(D: np.ndarray, xi: float) -> np.ndarray:
    # snap each finite positive value up to the next power of (1 + xi)
    out = D.copy()
    pos = np.isfinite(D) & (D > 0)
    if not pos.any():
        return out
    d = D[pos]
    e = np.ceil(np.log(d) / math.log1p(xi))
    v = np.exp(e * math.log1p(xi))
    out[pos] = np.clip(v, d, d * (1 + xi))
    return out


def node_apasp(W: np.ndarray, xi: float = 0.0) -> np.ndarray:
    """All-pairs estimates on a small dense weight matrix (inf = no edge).

    Exact for ``xi == 0``; otherwise each distance d is reported as a value in
    [d, (1 + xi) d] (the next power of 1 + xi), standing in for an approximate
    APSP routine.
    """
    W = np.asarray(W, dtype=np.float64)
    if np.any(W < 0):
        raise ValueError("negative weight in node graph")
    if xi < 0:
        raise ValueError("xi must be >= 0")
    D = _apsp(W)
    return _round_up(D, xi) if xi > 0 else D


def leaf_estimates(G: WeightedDiGraph, t: int, node: TreeNode, xi: float) -> NodeEstimates:
    sub, old, _ = induced_subgraph(G, node.vset)
    table = node_apasp(sub.dense_weights(), xi)
    return NodeEstimates(t, old.copy(), table, np.ones(table.shape, dtype=bool))


def process_node(t: int, node: TreeNode, child1: NodeEstimates, child2: NodeEstimates,
                 v1: np.ndarray, v2: np.ndarray, xi: float) -> NodeEstimates:
    """Combine the children's estimates into estimates for node t.

    Step 1 runs APSP on the complete graph over S(t) weighted by the smaller
    child estimate. Step 2 runs APSP on B(t) + S(t) with edges S x S (step-1
    values) and B x S, S x B (taken from the child holding both endpoints).
    B x B pairs inside one child keep the better of the child and step-2
    values. ``v1``/``v2`` are the children's vertex sets.
    """
    S = node.sep
    B = node.boundary
    keys = np.union1d(B, S)
    # step 1
    w_s = np.minimum(child1.block(S, S), child2.block(S, S))
    delta_s = node_apasp(w_s, xi)
    # step 2
    pos = np.searchsorted(keys, S)
    W = np.full((keys.size, keys.size), np.inf)
    W[np.ix_(pos, pos)] = delta_s
    only_b = np.setdiff1d(B, S)
    parts = []
    for child, vset in ((child1, v1), (child2, v2)):
        side = only_b[np.isin(only_b, vset)]
        parts.append(side)
        if side.size and S.size:
            ps = np.searchsorted(keys, side)
            W[np.ix_(ps, pos)] = child.block(side, S)
            W[np.ix_(pos, ps)] = child.block(S, side)
    if sum(p.size for p in parts) != only_b.size:
        raise TreeMismatch(f"node {t}: boundary vertex outside both children")
    delta_bs = node_apasp(W, xi)

    table = np.full((keys.size, keys.size), np.inf)
    defined = np.zeros(table.shape, dtype=bool)
    table[np.ix_(pos, pos)] = delta_s
    defined[np.ix_(pos, pos)] = True
    pb = np.searchsorted(keys, B)
    table[np.ix_(pb, pb)] = np.minimum(table[np.ix_(pb, pb)], delta_bs[np.ix_(pb, pb)])
    defined[np.ix_(pb, pb)] = True
    for child, vset in ((child1, v1), (child2, v2)):
        inside = B[np.isin(B, vset)]
        if inside.size:
            pi = np.searchsorted(keys, inside)
            table[np.ix_(pi, pi)] = np.minimum(table[np.ix_(pi, pi)], child.block(inside, inside))
    np.fill_diagonal(table, 0.0)
    return NodeEstimates(t, keys, table, defined)


NodeHook = Callable[[int, NodeEstimates], None]


def tree_walk(G: WeightedDiGraph, tree: DecompositionTree, xi: float,
              on_node: NodeHook | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Bottom-up pass over the tree; returns the union of all E_t edges with min weights."""
    est: dict[int, NodeEstimates] = {}
    srcs, dsts, ws = [], [], []
    for t in tree.postorder():
        node = tree.nodes[t]
        if node.is_leaf:
            e = leaf_estimates(G, t, node, xi)
        else:
            c1, c2 = node.children
            e = process_node(t, node, est.pop(c1), est.pop(c2),
                             tree.nodes[c1].vset, tree.nodes[c2].vset, xi)
        est[t] = e
        if on_node is not None:
            on_node(t, e)
        s, d, w = e.pairs()
        srcs.append(s)
        dsts.append(d)
        ws.append(w)
    if not srcs:
        z = np.zeros(0, dtype=np.int64)
        return z, z.copy(), np.zeros(0)
    H = build_graph(G.n, zip(np.concatenate(srcs).tolist(), np.concatenate(dsts).tolist(),
                             np.concatenate(ws).tolist()))
    return H.src.copy(), H.dst.copy(), H.weight.copy()


def _check_tree(G, tree, validate):
    if tree.n != G.n:
        raise TreeMismatch(f"tree covers {tree.n} vertices, graph has {G.n}")
    if validate:
        problems = validate_tree(tree, underlying_skeleton(G))
        if problems:
            raise TreeMismatch("; ".join(problems[:5]))


def cohen_shortcut(G: WeightedDiGraph, tree: DecompositionTree, validate: bool = True) -> ShortcutSet:
    """Shortcut edges (u, v) for every node pair of the tree with v reachable from u in G(t)."""
    _check_tree(G, tree, validate)
    unit = build_graph(G.n, zip(G.src.tolist(), G.dst.tolist()))
    s, d, _ = tree_walk(unit, tree, 0.0)
    return ShortcutSet(s, d, hopbound(tree))


def node_xi(eps: float, tree: DecompositionTree) -> float:
    """Per-node approximation so that (1 + xi)^(3 (depth + 1)) <= 1 + eps for eps <= 1."""
    return eps / (6.0 * (tree.depth + 1))


def cohen_hopset(G: WeightedDiGraph, tree: DecompositionTree, eps: float,
                 on_node: NodeHook | None = None, validate: bool = True) -> HopsetSet:
    """(1 + eps, beta)-hopset from approximate distances inside every tree node."""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    if np.any(G.weight < 0):
        raise ValueError("negative edge weight")
    _check_tree(G, tree, validate)
    s, d, w = tree_walk(G, tree, node_xi(eps, tree), on_node)
    return HopsetSet(s, d, w, float(eps), hopbound(tree))
