"""Measure the hop diameter of G + H for separator-tree shortcuts against 2*depth + 2.

Graph families: sparse random digraphs, partially oriented grids (grid finder)
and randomly oriented trees with a few extra edges.
"""
import argparse
import collections

import numpy as np

from sxvreach.graph import build_graph, grid_digraph, random_digraph, underlying_skeleton
from sxvreach.hopsets import cohen_shortcut, hop_diameter
from sxvreach.separators import build_decomposition_tree, make_finder, validate_tree


def sample(kind, rng):
    if kind == "random":
        n = int(rng.integers(10, 80))
        return random_digraph(n, int(n * rng.uniform(1, 2.5)), rng), make_finder("bfs-heuristic")
    if kind == "grid":
        r, c = int(rng.integers(2, 9)), int(rng.integers(2, 9))
        keep = [e for e in grid_digraph(r, c).edges if rng.random() < 0.7]
        return build_graph(r * c, keep), make_finder("grid", grid_shape=(r, c))
    n = int(rng.integers(10, 80))
    edges = [(int(rng.integers(0, i)), i) for i in range(1, n)]
    edges += [(int(rng.integers(0, n)), int(rng.integers(0, n))) for _ in range(n // 5)]
    edges = [(u, v) if rng.random() < 0.5 else (v, u) for u, v in edges if u != v]
    return build_graph(n, edges), make_finder("bfs-heuristic")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    kinds = ("random", "grid", "tree")
    rows = []
    for trial in range(args.trials):
        kind = kinds[trial % 3]
        G, finder = sample(kind, rng)
        skel = underlying_skeleton(G)
        tree = build_decomposition_tree(skel, finder, tau=int(rng.integers(1, 5)))
        assert not validate_tree(tree, skel)
        hd = hop_diameter(G, cohen_shortcut(G, tree))
        rows.append((kind, tree.depth, hd))

    over = [r for r in rows if r[2] > 2 * r[1] + 2]
    print(f"trials {len(rows)}, hop diameter above 2*depth+2: {len(over)}")
    print(f"largest hop diameter minus 2*depth: {max(hd - 2 * d for _, d, hd in rows)}")
    print("depth  max-hops  count")
    by_depth = collections.defaultdict(list)
    for _, d, hd in rows:
        by_depth[d].append(hd)
    for d in sorted(by_depth):
        print(f"{d:5d}  {max(by_depth[d]):8d}  {len(by_depth[d]):5d}")


if __name__ == "__main__":
    main()
