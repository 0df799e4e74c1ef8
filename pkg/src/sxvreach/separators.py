"""Balanced vertex separators and separator decomposition trees.

A separator of a vertex set U is a triple (C, A, B) partitioning U with no
skeleton edge between A and B. Finders are callables
``finder(skeleton, members) -> SeparatorResult``; build them with
:func:`make_finder`.
"""
from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .graph import Skeleton

log = logging.getLogger(__name__)

STRATEGIES = ("exhaustive", "grid", "bfs-heuristic")
EXHAUSTIVE_CAP = 20
MAX_TREE_RATIO = 0.7


class SeparatorError(RuntimeError):
    pass


def _arr(xs) -> np.ndarray:
    a = np.array(sorted(int(x) for x in xs), dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SeparatorResult:
    sep: np.ndarray
    part_a: np.ndarray
    part_b: np.ndarray
    ratio: float

    @classmethod
    def make(cls, sep, a, b) -> "SeparatorResult":
        sep, a, b = _arr(sep), _arr(a), _arr(b)
        total = sep.size + a.size + b.size
        ratio = max(a.size, b.size) / total if total else 0.0
        return cls(sep, a, b, ratio)

    @property
    def size(self) -> int:
        return int(self.sep.size)

    @property
    def total(self) -> int:
        return int(self.sep.size + self.part_a.size + self.part_b.size)


Finder = Callable[[Skeleton, np.ndarray], SeparatorResult]


def crossing_edges(skel: Skeleton, a, b) -> list[tuple[int, int]]:
    inb = np.zeros(skel.n, dtype=bool)
    inb[_arr(b)] = True
    return [(int(u), int(v)) for u in _arr(a).tolist() for v in skel.adj[u].tolist() if inb[v]]


def _members(skel, members):
    if members is None:
        return np.arange(skel.n, dtype=np.int64)
    return np.asarray(members, dtype=np.int64)


def _components(skel: Skeleton, members) -> list[list[int]]:
    inside = np.zeros(skel.n, dtype=bool)
    inside[members] = True
    seen = np.zeros(skel.n, dtype=bool)
    comps = []
    for s in members.tolist():
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [s], [s]
        while stack:
            u = stack.pop()
            for v in skel.adj[u].tolist():
                if inside[v] and not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    stack.append(v)
        comps.append(comp)
    return comps


def _closest_split(sizes: list[int]) -> tuple[int, list[int]]:
    """Subset of items whose total is as close to half as possible (<= half).

    Returns (subset_total, chosen indices).
    """
    total = sum(sizes)
    # parent[s] = (prev_sum, item) for the first way sum s was reached
    parent = {0: None}
    for i, c in enumerate(sizes):
        for s in sorted(parent, reverse=True):
            t = s + c
            if t not in parent:
                parent[t] = (s, i)
    best = max(s for s in parent if 2 * s <= total)
    chosen, s = [], best
    while parent[s] is not None:
        s, i = parent[s]
        chosen.append(i)
    return best, chosen


def _limit(ratio, n):
    return ratio * n + 1e-9


# -- exhaustive -------------------------------------------------------------

def _exhaustive(skel: Skeleton, members: np.ndarray, ratio: float, cap: int) -> SeparatorResult:
    n = members.size
    if n > cap:
        raise SeparatorError(f"exhaustive search is limited to {cap} vertices, got {n}")
    local = {int(v): i for i, v in enumerate(members.tolist())}
    masks = []
    for v in members.tolist():
        m = 0
        for w in skel.adj[v].tolist():
            j = local.get(w)
            if j is not None:
                m |= 1 << j
        masks.append(m)
    full = (1 << n) - 1
    lim = _limit(ratio, n)

    def comps_of(rest):
        out = []
        while rest:
            low = rest & -rest
            comp = low
            frontier = low
            while frontier:
                b = frontier & -frontier
                frontier ^= b
                nb = masks[b.bit_length() - 1] & rest & ~comp
                comp |= nb
                frontier |= nb
            out.append(comp)
            rest &= ~comp
        return out

    for size in range(n + 1):
        best = None
        for C in itertools.combinations(range(n), size):
            cmask = 0
            for i in C:
                cmask |= 1 << i
            comps = comps_of(full & ~cmask)
            sizes = [bin(c).count("1") for c in comps]
            small, chosen = _closest_split(sizes)
            big = (n - size) - small
            if big > lim:
                continue
            key = (big, C)
            if best is None or key < best[0]:
                amask = 0
                for i in chosen:
                    amask |= comps[i]
                best = (key, cmask, amask)
        if best is not None:
            _, cmask, amask = best
            bmask = full & ~cmask & ~amask
            pick = lambda mask: [int(members[i]) for i in range(n) if mask >> i & 1]
            return SeparatorResult.make(pick(cmask), pick(amask), pick(bmask))
    raise SeparatorError("no separator within the requested ratio")


# -- bfs level cuts ----------------------------------------------------------

def _bfs_levels(skel, comp_set, start):
    levels, seen, frontier = [], {start}, [start]
    while frontier:
        levels.append(frontier)
        nxt = []
        for u in frontier:
            for v in skel.adj[u].tolist():
                if v in comp_set and v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return levels


def _distribute(a, b, others):
    """Add whole components to the currently smaller side, largest first."""
    a, b = list(a), list(b)
    for comp in sorted(others, key=lambda c: (-len(c), min(c))):
        if len(a) <= len(b):
            a.extend(comp)
        else:
            b.extend(comp)
    return a, b


def _pick(cands, n, ratio, balance_first=False):
    lim = _limit(ratio, n)

    def key(c):
        sep, a, b = c
        big = max(len(a), len(b))
        if balance_first:
            return (big > lim, big, len(sep))
        return (big > lim, len(sep) if big <= lim else big, big, len(sep))

    return min(cands, key=key)


def _bfs_heuristic(skel: Skeleton, members: np.ndarray, ratio: float) -> SeparatorResult:
    n = members.size
    comps = _components(skel, members)
    comps.sort(key=lambda c: (-len(c), min(c)))
    cands = []
    a, b = _distribute([], [], comps)
    cands.append(([], a, b))
    main, others = comps[0], comps[1:]
    comp_set = set(main)
    start = min(main, key=lambda v: (len(skel.adj[v]), v))
    far = _bfs_levels(skel, comp_set, start)[-1]
    levels = _bfs_levels(skel, comp_set, min(far))
    for i in range(len(levels)):
        before = [v for lv in levels[:i] for v in lv]
        after = [v for lv in levels[i + 1:] for v in lv]
        x, y = _distribute(before, after, others)
        cands.append((levels[i], x, y))
    return SeparatorResult.make(*_pick(cands, n, ratio))


# -- grid level cuts ---------------------------------------------------------

def _grid(skel: Skeleton, members: np.ndarray, ratio: float, shape) -> SeparatorResult:
    if shape is None:
        raise SeparatorError("grid strategy needs the grid shape (rows, cols)")
    rows, cols = shape
    if skel.n != rows * cols:
        raise SeparatorError(f"grid {rows}x{cols} does not match {skel.n} vertices")
    r, c = members // cols, members % cols
    cands = []
    for f in (c, r, r + c, r - c):
        for x in np.unique(f).tolist():
            cands.append((members[f == x].tolist(), members[f < x].tolist(), members[f > x].tolist()))
    # grid cuts are all O(sqrt n), so prefer the most even split
    sep, a, b = _pick(cands, members.size, ratio, balance_first=True)
    if crossing_edges(skel, a, b):
        raise SeparatorError("grid cut is crossed by a non-grid edge")
    return SeparatorResult.make(sep, a, b)


def find_separator(skel: Skeleton, strategy: str = "bfs-heuristic", ratio: float = 2 / 3,
                   members=None, grid_shape=None, exhaustive_cap: int = EXHAUSTIVE_CAP) -> SeparatorResult:
    """Balanced separator of the skeleton restricted to ``members``.

    ``exhaustive`` returns a minimum-size separator with both parts at most
    ``ratio * |members|`` (ties broken by balance, then lexicographically);
    ``grid`` cuts along a row, column or diagonal of a declared grid;
    ``bfs-heuristic`` cuts at a BFS level of the largest component.
    """
    members = _members(skel, members)
    if members.size < 2:
        raise SeparatorError("need at least two vertices to separate")
    if strategy == "exhaustive":
        return _exhaustive(skel, members, ratio, exhaustive_cap)
    if strategy == "grid":
        return _grid(skel, members, ratio, grid_shape)
    if strategy == "bfs-heuristic":
        return _bfs_heuristic(skel, members, ratio)
    raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")


def make_finder(strategy: str = "bfs-heuristic", ratio: float = 2 / 3, grid_shape=None,
                exhaustive_cap: int = EXHAUSTIVE_CAP) -> Finder:
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")

    def finder(skel, members):
        return find_separator(skel, strategy, ratio, members, grid_shape, exhaustive_cap)

    finder.strategy = strategy
    finder.ratio = ratio
    return finder


# -- rebalancing ---------------------------------------------------------------

@dataclass(frozen=True)
class BalanceState:
    a: frozenset
    b: frozenset
    c: frozenset
    d: frozenset


def balance_to_half(skel: Skeleton, finder: Finder, members=None, trace: list | None = None) -> SeparatorResult:
    """Turn a ratio-lambda separator finder into a ratio-1/2 separator.

    Repeatedly separates the undecided set D, keeps the larger piece as the
    new D, and merges the smaller piece into whichever of A, B stays smaller.
    Every intermediate (A, B, C, D) is appended to ``trace`` when given.
    """
    members = _members(skel, members)
    A: set = set()
    B: set = set()
    C: set = set()
    D: set = set(members.tolist())

    def record():
        if trace is not None:
            trace.append(BalanceState(frozenset(A), frozenset(B), frozenset(C), frozenset(D)))

    record()
    while D:
        if len(D) == 1:
            C |= D
            D = set()
            record()
            break
        res = finder(skel, np.array(sorted(D), dtype=np.int64))
        pa, pb = set(res.part_a.tolist()), set(res.part_b.tolist())
        if len(pa) > len(pb):
            pa, pb = pb, pa
        grown = A | pa
        if len(grown) <= len(B):
            A, B = grown, B
        else:
            A, B = B, grown
        C |= set(res.sep.tolist())
        D = pb
        record()
    return SeparatorResult.make(C, A, B)


def make_doubly_incident(skel: Skeleton, sep, part_a, part_b) -> SeparatorResult:
    """Move separator vertices adjacent to at most one side into that side.

    A vertex touching only A joins A (likewise B); a vertex touching neither
    joins the smaller part, ties to A. Repeats until every remaining separator
    vertex has a neighbour on both sides.
    """
    S = set(int(v) for v in sep)
    A = set(int(v) for v in part_a)
    B = set(int(v) for v in part_b)
    while True:
        moved = False
        lonely = []
        for v in sorted(S):
            nb = skel.adj[v].tolist()
            in_a = any(w in A for w in nb)
            in_b = any(w in B for w in nb)
            if in_a and not in_b:
                S.discard(v)
                A.add(v)
                moved = True
            elif in_b and not in_a:
                S.discard(v)
                B.add(v)
                moved = True
            elif not in_a and not in_b:
                lonely.append(v)
        if moved:
            continue
        if not lonely:
            break
        v = lonely[0]
        S.discard(v)
        (A if len(A) <= len(B) else B).add(v)
    return SeparatorResult.make(S, A, B)


# -- decomposition tree ----------------------------------------------------------

@dataclass
class TreeNode:
    vset: np.ndarray
    sep: np.ndarray
    boundary: np.ndarray
    children: tuple = ()
    level: int = 0
    ratio: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class DecompositionTree:
    nodes: list
    root: int
    leaf_threshold: int
    n: int
    meta: dict = field(default_factory=dict)

    @property
    def depth(self) -> int:
        return self.nodes[self.root].level

    @property
    def hopbound(self) -> int:
        return hopbound(self)

    def postorder(self) -> list[int]:
        order, stack = [], [(self.root, False)]
        while stack:
            t, done = stack.pop()
            if done or self.nodes[t].is_leaf:
                order.append(t)
                continue
            stack.append((t, True))
            for c in reversed(self.nodes[t].children):
                stack.append((c, False))
        return order

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "root": self.root,
            "leaf_threshold": self.leaf_threshold,
            "meta": self.meta,
            "nodes": [
                {
                    "id": i,
                    "vset": nd.vset.tolist(),
                    "sep": nd.sep.tolist(),
                    "boundary": nd.boundary.tolist(),
                    "children": list(nd.children),
                    "level": nd.level,
                    "ratio": nd.ratio,
                }
                for i, nd in enumerate(self.nodes)
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, doc: dict) -> "DecompositionTree":
        """Import a decomposition; levels are recomputed, boundaries are taken as given."""
        if doc.get("schema", 1) != 1:
            raise ValueError(f"unsupported tree schema {doc.get('schema')}")
        nodes = []
        for i, nd in enumerate(doc["nodes"]):
            if nd.get("id", i) != i:
                raise ValueError("tree nodes must be listed in id order")
            children = tuple(int(c) for c in nd.get("children", ()))
            if len(children) not in (0, 2):
                raise ValueError(f"node {i} must have 0 or 2 children")
            nodes.append(TreeNode(_arr(nd["vset"]), _arr(nd.get("sep", ())), _arr(nd.get("boundary", ())),
                                  children, 0, float(nd.get("ratio", 0.0))))
        tree = cls(nodes, int(doc.get("root", 0)), int(doc.get("leaf_threshold", 1)), int(doc["n"]),
                   dict(doc.get("meta", {})))
        _assign_levels(tree)
        return tree

    @classmethod
    def loads(cls, text: str) -> "DecompositionTree":
        return cls.from_json(json.loads(text))


def hopbound(tree: DecompositionTree) -> int:
    """Hop budget used with shortcuts/hopsets built on ``tree``."""
    return 2 * tree.depth + 2


def _assign_levels(tree: DecompositionTree):
    for t in tree.postorder():
        nd = tree.nodes[t]
        nd.level = 0 if nd.is_leaf else 1 + max(tree.nodes[c].level for c in nd.children)


def build_decomposition_tree(skel: Skeleton, finder: Finder, tau: int = 8, members=None,
                             doubly_incident: bool = True) -> DecompositionTree:
    """Recursive separator decomposition of the skeleton.

    Children of t get V(t_i) = U_i + S(t) and B(t_i) = S(t) + (B(t) & V(t_i)).
    A node becomes a leaf when |V(t)| <= tau or when the finder cannot split it
    into two non-empty parts.
    """
    if tau < 1:
        raise ValueError("leaf threshold must be >= 1")
    root_set = _members(skel, members)
    nodes = [TreeNode(_arr(root_set.tolist()), _arr(()), _arr(()))]
    stack = [0]
    degenerate = 0
    while stack:
        t = stack.pop()
        nd = nodes[t]
        if nd.vset.size <= tau:
            continue
        res = finder(skel, nd.vset)
        if doubly_incident:
            res = make_doubly_incident(skel, res.sep, res.part_a, res.part_b)
        if res.part_a.size == 0 or res.part_b.size == 0:
            degenerate += 1
            continue
        if res.ratio > MAX_TREE_RATIO:
            log.debug("node %d split with ratio %.3f", t, res.ratio)
        nd.sep, nd.ratio = res.sep, res.ratio
        bset = set(nd.boundary.tolist())
        kids = []
        for part in (res.part_a, res.part_b):
            vs = set(part.tolist()) | set(res.sep.tolist())
            bd = set(res.sep.tolist()) | (bset & vs)
            nodes.append(TreeNode(_arr(vs), _arr(()), _arr(bd)))
            kids.append(len(nodes) - 1)
        nd.children = tuple(kids)
        stack.extend(reversed(kids))
    tree = DecompositionTree(nodes, 0, tau, skel.n, {
        "strategy": getattr(finder, "strategy", "custom"),
        "degenerate_leaves": degenerate,
    })
    _assign_levels(tree)
    return tree


def validate_tree(tree: DecompositionTree, skel: Skeleton) -> list[str]:
    """Structural problems with ``tree`` as a decomposition of ``skel``; empty if valid."""
    problems = []
    nodes = tree.nodes
    if tree.n != skel.n:
        problems.append(f"tree is for {tree.n} vertices, graph has {skel.n}")
        return problems
    root = nodes[tree.root]
    if root.vset.tolist() != list(range(skel.n)):
        problems.append("root vertex set must be all of V")
    if root.boundary.size:
        problems.append("root boundary must be empty")
    seen = set()
    for t in tree.postorder():
        if t in seen:
            problems.append(f"node {t} reachable twice")
        seen.add(t)
        nd = nodes[t]
        vs = set(nd.vset.tolist())
        if not set(nd.boundary.tolist()) <= vs:
            problems.append(f"node {t}: boundary not inside vertex set")
        if nd.is_leaf:
            if nd.sep.size:
                problems.append(f"leaf {t} has a separator")
            continue
        sep = set(nd.sep.tolist())
        if not sep <= vs:
            problems.append(f"node {t}: separator not inside vertex set")
        c1, c2 = (nodes[c] for c in nd.children)
        u1 = set(c1.vset.tolist()) - sep
        u2 = set(c2.vset.tolist()) - sep
        if not (sep <= set(c1.vset.tolist()) and sep <= set(c2.vset.tolist())):
            problems.append(f"node {t}: children must contain the separator")
        if u1 & u2 or (u1 | u2 | sep) != vs:
            problems.append(f"node {t}: children do not partition V(t) - S(t)")
        if crossing_edges(skel, sorted(u1), sorted(u2)):
            problems.append(f"node {t}: skeleton edge crosses the separator")
        bset = set(nd.boundary.tolist())
        for c, kid in zip(nd.children, (c1, c2)):
            want = sep | (bset & set(kid.vset.tolist()))
            if set(kid.boundary.tolist()) != want:
                problems.append(f"node {c}: boundary violates B(t_i) = S(t) + (B(t) & V(t_i))")
            if len(kid.vset) >= len(vs):
                problems.append(f"node {c}: child not smaller than parent")
    if len(seen) != len(nodes):
        problems.append("tree contains unreachable nodes")
    return problems
