"""S x V reachability and approximate distances on directed graphs."""
from .graph import (GraphError, VertexSubset, WeightedDiGraph, build_graph, grid_digraph,
                    induced_subgraph, integerize_weights, random_digraph, underlying_skeleton)
from .hopsets import cohen_hopset, cohen_shortcut, hop_diameter, sampling_d_shortcut
from .pipelines import (DistanceBudget, QueryPlan, approx_sxv_distances, choose_delta, direach,
                        direach_via_tree, omega_sigma)
from .semiring import INF, BoolMatrix, approx_distance_product, bool_matmul, minplus_product
from .separators import (DecompositionTree, balance_to_half, build_decomposition_tree,
                         find_separator, make_doubly_incident, make_finder)

__all__ = [
    "GraphError", "VertexSubset", "WeightedDiGraph", "build_graph", "grid_digraph",
    "induced_subgraph", "integerize_weights", "random_digraph", "underlying_skeleton",
    "cohen_hopset", "cohen_shortcut", "hop_diameter", "sampling_d_shortcut",
    "DistanceBudget", "QueryPlan", "approx_sxv_distances", "choose_delta", "direach",
    "direach_via_tree", "omega_sigma", "INF", "BoolMatrix", "approx_distance_product",
    "bool_matmul", "minplus_product", "DecompositionTree", "balance_to_half",
    "build_decomposition_tree", "find_separator", "make_doubly_incident", "make_finder",
]
