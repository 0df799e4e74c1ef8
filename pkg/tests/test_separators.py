import itertools
import json

import pytest
from hypothesis import given, strategies as st

from sxvreach.graph import grid_digraph, random_digraph, skeleton_from_edges, underlying_skeleton
from sxvreach.separators import (DecompositionTree, SeparatorError, balance_to_half,
                                 build_decomposition_tree, crossing_edges, find_separator, hopbound,
                                 make_doubly_incident, make_finder, validate_tree)


def path_skel(n):
    return skeleton_from_edges(n, [(i, i + 1) for i in range(n - 1)])


@st.composite
def connected_skeletons(draw, max_n=16, min_n=2):
    n = draw(st.integers(min_n, max_n))
    edges = [(v, draw(st.integers(0, v - 1))) for v in range(1, n)]
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n))
    edges += [e for e in extra if e[0] != e[1]]
    return skeleton_from_edges(n, edges)


def brute_min_separator(skel, ratio):
    """Smallest separator size by plain enumeration over (sep, side-A) assignments."""
    n = skel.n
    lim = ratio * n + 1e-9
    for size in range(n + 1):
        for sep in itertools.combinations(range(n), size):
            rest = [v for v in range(n) if v not in sep]
            for bits in range(1 << len(rest)):
                a = {v for i, v in enumerate(rest) if bits >> i & 1}
                b = set(rest) - a
                if len(a) <= lim and len(b) <= lim and not crossing_edges(skel, a, b):
                    return size
    return None


def check_separator(skel, res, members=None):
    members = set(range(skel.n)) if members is None else set(members)
    sep, a, b = (set(x.tolist()) for x in (res.sep, res.part_a, res.part_b))
    assert sep | a | b == members
    assert not (sep & a or sep & b or a & b)
    assert not crossing_edges(skel, a, b)


# -- find_separator ----------------------------------------------------------------------

def test_path_exhaustive():
    res = find_separator(path_skel(5), "exhaustive", 2 / 3)
    assert res.sep.tolist() == [2]
    assert {tuple(res.part_a.tolist()), tuple(res.part_b.tolist())} == {(0, 1), (3, 4)}


def test_grid_cut_4x4():
    skel = underlying_skeleton(grid_digraph(4, 4))
    res = find_separator(skel, "grid", grid_shape=(4, 4))
    assert res.size == 4
    assert sorted([res.part_a.size, res.part_b.size]) == [6, 6]
    check_separator(skel, res)


def test_complete_graph_needs_big_separator():
    K4 = skeleton_from_edges(4, list(itertools.combinations(range(4), 2)))
    res = find_separator(K4, "exhaustive", 2 / 3)
    assert res.size >= 2
    check_separator(K4, res)


def test_exhaustive_cap_and_unknown_strategy():
    with pytest.raises(SeparatorError):
        find_separator(path_skel(25), "exhaustive")
    with pytest.raises(ValueError):
        find_separator(path_skel(5), "spectral")


@given(connected_skeletons(max_n=9))
def test_exhaustive_is_minimum(skel):
    res = find_separator(skel, "exhaustive", 2 / 3)
    check_separator(skel, res)
    assert max(res.part_a.size, res.part_b.size) <= 2 / 3 * skel.n + 1e-9
    assert res.size == brute_min_separator(skel, 2 / 3)


@given(connected_skeletons(max_n=40))
def test_bfs_heuristic_is_a_separator(skel):
    check_separator(skel, find_separator(skel, "bfs-heuristic"))


@given(connected_skeletons(max_n=20), st.data())
def test_separator_on_subsets(skel, data):
    members = sorted(data.draw(st.sets(st.integers(0, skel.n - 1), min_size=2)))
    for strategy in ("exhaustive", "bfs-heuristic"):
        check_separator(skel, find_separator(skel, strategy, members=members), members)


# -- balance_to_half ---------------------------------------------------------------------

def test_balance_path4():
    res = balance_to_half(path_skel(4), make_finder("exhaustive"))
    assert res.part_a.size <= 2 and res.part_b.size <= 2


def test_balance_single_vertex():
    trace = []
    res = balance_to_half(skeleton_from_edges(1, []), make_finder("exhaustive"), trace=trace)
    assert res.sep.tolist() == [0] and res.part_a.size == res.part_b.size == 0
    s0 = trace[0]
    assert not (s0.a or s0.b or s0.c) and s0.d == {0}


def check_balance_trace(skel, trace, ratio):
    V = set(range(skel.n))
    for i, st_ in enumerate(trace):
        a, b, c, d = st_.a, st_.b, st_.c, st_.d
        assert a | b | c | d == V and len(a) + len(b) + len(c) + len(d) == skel.n
        for x, y in ((a, b), (a, d), (b, d)):
            assert not crossing_edges(skel, x, y)
        assert len(a) <= len(b) <= len(a) + len(c) + len(d)
        if i:
            assert len(d) <= ratio * len(trace[i - 1].d) + 1e-9
    assert not trace[-1].d


@given(connected_skeletons(max_n=14))
def test_balance_invariants(skel):
    trace = []
    res = balance_to_half(skel, make_finder("exhaustive"), trace=trace)
    check_balance_trace(skel, trace, 2 / 3)
    assert res.part_a.size <= skel.n / 2 and res.part_b.size <= skel.n / 2
    check_separator(skel, res)


# -- make_doubly_incident ----------------------------------------------------------------

def test_star_unchanged():
    star = skeleton_from_edges(5, [(0, i) for i in range(1, 5)])
    res = make_doubly_incident(star, [0], [1, 2], [3, 4])
    assert res.sep.tolist() == [0]


def test_one_sided_vertex_moves():
    skel = path_skel(4)
    res = make_doubly_incident(skel, [1, 2], [0], [3])
    assert res.sep.tolist() in ([1], [2])
    check_separator(skel, res)


def test_isolated_vertex_goes_to_smaller_part():
    skel = skeleton_from_edges(5, [(0, 1), (2, 3)])
    res = make_doubly_incident(skel, [4], [0, 1], [2, 3])
    assert res.sep.size == 0 and res.part_a.tolist() == [0, 1, 4]
    res = make_doubly_incident(skel, [4], [0, 1, 2], [3])
    assert res.part_b.tolist() == [3, 4]


def doubly_incident(skel, res):
    a, b = set(res.part_a.tolist()), set(res.part_b.tolist())
    return all(set(skel.adj[v].tolist()) & a and set(skel.adj[v].tolist()) & b for v in res.sep.tolist())


@given(connected_skeletons(max_n=30))
def test_doubly_incident_property(skel):
    res = find_separator(skel, "bfs-heuristic")
    out = make_doubly_incident(skel, res.sep, res.part_a, res.part_b)
    check_separator(skel, out)
    assert doubly_incident(skel, out)
    assert out.size <= res.size


# -- decomposition tree --------------------------------------------------------------------

def test_tiny_tree_is_a_leaf():
    tree = build_decomposition_tree(path_skel(2), make_finder("exhaustive"), tau=4)
    assert len(tree.nodes) == 1 and tree.depth == 0
    root = tree.nodes[0]
    assert root.sep.size == 0 and root.boundary.size == 0


def test_path5_tree():
    tree = build_decomposition_tree(path_skel(5), make_finder("exhaustive"), tau=2)
    root = tree.nodes[tree.root]
    assert root.sep.tolist() == [2]
    kids = [tree.nodes[c] for c in root.children]
    assert sorted(k.vset.tolist() for k in kids) == [[0, 1, 2], [2, 3, 4]]
    assert all(k.boundary.tolist() == [2] for k in kids)


@given(connected_skeletons(max_n=40), st.sampled_from([1, 3, 8]))
def test_tree_recurrence(skel, tau):
    tree = build_decomposition_tree(skel, make_finder("bfs-heuristic"), tau)
    assert validate_tree(tree, skel) == []
    for nd in tree.nodes:
        if nd.is_leaf:
            continue
        S, B = set(nd.sep.tolist()), set(nd.boundary.tolist())
        for c in nd.children:
            kid = tree.nodes[c]
            V = set(kid.vset.tolist())
            assert set(kid.boundary.tolist()) == S | (B & V)
            assert kid.level < nd.level
    assert hopbound(tree) == 2 * tree.depth + 2


def test_tree_json_round_trip(rng):
    G = random_digraph(40, 90, rng)
    tree = build_decomposition_tree(underlying_skeleton(G), make_finder("bfs-heuristic"), 4)
    back = DecompositionTree.loads(tree.dumps())
    assert back.dumps() == tree.dumps()
    assert json.loads(tree.dumps())["schema"] == 1


def test_validate_tree_catches_bad_boundary(rng):
    skel = path_skel(9)
    tree = build_decomposition_tree(skel, make_finder("exhaustive"), 2)
    doc = tree.to_json()
    doc["nodes"][0]["boundary"] = [0]
    assert validate_tree(DecompositionTree.from_json(doc), skel)


def test_tree_rejects_bad_tau():
    with pytest.raises(ValueError):
        build_decomposition_tree(path_skel(3), make_finder(), tau=0)
