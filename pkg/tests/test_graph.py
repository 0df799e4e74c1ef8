import numpy as np
import pytest
from hypothesis import given, strategies as st

from sxvreach import oracles
from sxvreach.graph import (GraphError, VertexSubset, build_graph, cycle_digraph, grid_digraph,
                            induced_subgraph, integerize_weights, layered_dag, path_digraph,
                            random_dag, random_digraph, underlying_skeleton)

from conftest import digraphs


def test_build_unit_weights():
    G = build_graph(3, [(0, 1, 1), (1, 2, 1)])
    assert G.m == 2
    assert G.aspect_ratio == 1


def test_parallel_edges_collapse_to_min():
    G = build_graph(2, [(0, 1, 2), (0, 1, 5)])
    assert G.edges == [(0, 1, 2.0)]


def test_aspect_ratio():
    G = build_graph(3, [(0, 1, 1), (1, 2, 100)])
    assert G.aspect_ratio == 100


def test_aspect_ratio_ignores_zero_weights():
    G = build_graph(3, [(0, 1, 0), (1, 2, 4), (2, 0, 2)])
    assert G.aspect_ratio == 2


@pytest.mark.parametrize("edges", [[(0, 3, 1)], [(-1, 0, 1)], [(0, 1, -2)], [(0, 1, float("nan"))],
                                   [(0, 1, float("inf"))]])
def test_build_rejects_bad_edges(edges):
    with pytest.raises(GraphError):
        build_graph(3, edges)


def test_csr_neighbourhoods():
    G = build_graph(4, [(0, 1, 1), (0, 2, 3), (2, 1, 1), (3, 0, 2)])
    assert G.successors(0).tolist() == [1, 2]
    assert G.predecessors(1).tolist() == [0, 2]
    assert G.has_edge(3, 0) and not G.has_edge(0, 3)
    W = G.dense_weights()
    assert W[0, 2] == 3 and np.isinf(W[1, 0]) and W[2, 2] == 0


def test_vertex_subset_validation():
    assert list(VertexSubset.of([3, 1, 3], 5)) == [1, 3]
    with pytest.raises(GraphError):
        VertexSubset.of([5], 5)


@pytest.mark.parametrize("U, m, edges", [([0, 2], 0, []), ([0, 1], 1, [(0, 1, 1.0)])])
def test_induced_subgraph_path(U, m, edges):
    G = path_digraph(3)
    sub, old, new = induced_subgraph(G, U)
    assert sub.n == 2 and sub.m == m and sub.edges == edges
    assert old.tolist() == U and new == {u: i for i, u in enumerate(U)}


def test_induced_subgraph_identity():
    G = cycle_digraph(3)
    sub, _, _ = induced_subgraph(G, [0, 1, 2])
    assert sub.edges == G.edges


@given(digraphs(max_n=10, weighted=True), st.data())
def test_induced_subgraph_matches_brute_force(G, data):
    U = sorted(data.draw(st.sets(st.integers(0, G.n - 1))))
    sub, old, _ = induced_subgraph(G, U)
    expect = sorted((U.index(u), U.index(v), w) for u, v, w in G.edges if u in U and v in U)
    assert sorted(sub.edges) == expect
    assert old.tolist() == U


def test_skeleton_examples():
    assert underlying_skeleton(build_graph(2, [(0, 1, 1)])).edges == [(0, 1)]
    assert underlying_skeleton(build_graph(2, [(0, 1, 1), (1, 0, 1)])).edges == [(0, 1)]
    assert underlying_skeleton(build_graph(0, [])).edges == []


@pytest.mark.parametrize("weights, xi, expect, top", [([1, 2.5], 0.5, [2, 5], 5), ([1, 1], 1.0, [1, 1], 1),
                                                      ([1, 3], 0.25, [4, 12], 12)])
def test_integerize_examples(weights, xi, expect, top):
    G = build_graph(3, [(0, 1, weights[0]), (1, 2, weights[1])])
    ig = integerize_weights(G, xi)
    assert ig.graph.weight.tolist() == expect
    assert ig.max_weight == top


@given(digraphs(max_n=9, weighted=True), st.sampled_from([0.05, 0.25, 0.5, 1.0]))
def test_integerize_preserves_distances_within_factor(G, xi):
    ig = integerize_weights(G, xi)
    d = oracles.all_pairs_distances(G)
    di = oracles.all_pairs_distances(ig.graph) * ig.scale
    fin = np.isfinite(d)
    assert np.array_equal(fin, np.isfinite(di))
    assert np.all(di[fin] >= d[fin] - 1e-9)
    assert np.all(di[fin] <= (1 + xi) * d[fin] + 1e-9)
    assert np.all(ig.graph.weight == np.floor(ig.graph.weight))


def test_integerize_rejects_bad_xi():
    with pytest.raises(ValueError):
        integerize_weights(path_digraph(3), 0)


def test_generators_shape(rng):
    assert grid_digraph(3, 4).m == 2 * (3 * 3 + 2 * 4)
    assert random_digraph(10, 30, rng).m == 30
    dag = random_dag(30, 80, rng)
    reach = oracles.transitive_closure(dag)
    assert not np.any(reach & reach.T & ~np.eye(30, dtype=bool))
    L = layered_dag(4, 3, 1.0, rng)
    assert L.m == 3 * 9
