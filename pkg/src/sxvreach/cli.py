"""Command line front end.

Input graphs are edge lists: a header line ``n m`` followed by ``m`` lines
``u v [w]`` (0-indexed unless ``--one-indexed``); ``#`` starts a comment.
Every command prints one JSON document with ``"schema": 1``, except
``bench``, which writes CSV.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import oracles
from .graph import GraphError, WeightedDiGraph, build_graph, density_edges, random_digraph, underlying_skeleton
from .hopsets import cohen_hopset, cohen_shortcut, hop_diameter, sampling_d_shortcut
from .pipelines import (adjacency_with_identity, approx_sxv_distances, direach, direach_via_tree,
                        iterate_bool, plan_for)
from .semiring import rows_restrict
from .separators import STRATEGIES, DecompositionTree, build_decomposition_tree, make_finder

SCHEMA = 1
COMMANDS = ("reach", "dist", "shortcut", "hopset", "decompose", "bench")
BENCH_COLUMNS = ("n", "m", "|S|", "D", "build_ms", "query_ms", "oracle_ms")

log = logging.getLogger("sxvreach")


class EdgeListError(ValueError):
    pass


class UsageError(ValueError):
    pass


def parse_edge_list(path, one_indexed: bool = False) -> WeightedDiGraph:
    with open(path) as fh:
        return parse_edge_text(fh.read(), one_indexed, str(path))


def parse_edge_text(text: str, one_indexed: bool = False, name: str = "<input>") -> WeightedDiGraph:
    header = None
    edges = []
    off = 1 if one_indexed else 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if header is None:
            if len(tok) != 2:
                raise EdgeListError(f"{name}:{lineno}: header must be 'n m'")
            try:
                header = (int(tok[0]), int(tok[1]))
            except ValueError:
                raise EdgeListError(f"{name}:{lineno}: header must hold two integers") from None
            if header[0] < 0 or header[1] < 0:
                raise EdgeListError(f"{name}:{lineno}: negative count in header")
            continue
        if len(tok) not in (2, 3):
            raise EdgeListError(f"{name}:{lineno}: expected 'u v [w]'")
        try:
            u, v = int(tok[0]) - off, int(tok[1]) - off
            w = float(tok[2]) if len(tok) == 3 else 1.0
        except ValueError:
            raise EdgeListError(f"{name}:{lineno}: malformed edge {line!r}") from None
        n = header[0]
        for x, orig in ((u, tok[0]), (v, tok[1])):
            if not 0 <= x < n:
                raise EdgeListError(f"{name}:{lineno}: vertex {orig} outside the {n} declared vertices")
        if not (math.isfinite(w) and w >= 0):
            raise EdgeListError(f"{name}:{lineno}: weight must be finite and non-negative")
        edges.append((u, v, w))
    if header is None:
        raise EdgeListError(f"{name}: missing 'n m' header")
    if len(edges) != header[1]:
        raise EdgeListError(f"{name}: header declares {header[1]} edges, found {len(edges)}")
    return build_graph(header[0], edges)


def write_edge_list(G: WeightedDiGraph, weighted: bool | None = None) -> str:
    if weighted is None:
        weighted = not G.is_unweighted
    lines = [f"{G.n} {G.m}"]
    for u, v, w in G.edges:
        lines.append(f"{u} {v} {w:.17g}" if weighted else f"{u} {v}")
    return "\n".join(lines) + "\n"


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    sources: list | None = None
    num_sources: int | None = None
    eps: float = 0.5
    D: str = "auto"
    tree: str | None = None
    output: str | None = None
    seed: int = 0
    threads: int = 1
    one_indexed: bool = False
    strategy: str = "bfs-heuristic"
    tau: int = 8
    ratio: float = 2 / 3
    grid: tuple | None = None
    edges_out: str | None = None
    sizes: list = field(default_factory=lambda: [50, 100, 200])
    mu: float = 1.5
    repeats: int = 1

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command != "bench" and not self.input:
            raise UsageError("an input edge list is required")
        if self.command in ("reach", "dist") and not self.sources and not self.num_sources:
            raise UsageError("give --sources or --num-sources")
        if self.command in ("dist", "hopset") and not self.eps > 0:
            raise UsageError("--eps must be positive")
        if self.threads < 1:
            raise UsageError("--threads must be >= 1")
        if self.D != "auto":
            try:
                if int(self.D) < 1:
                    raise ValueError
            except ValueError:
                raise UsageError("--D must be 'auto' or a positive integer") from None


def pick_sources(cfg: RunConfig, n: int) -> list[int]:
    if cfg.sources:
        S = sorted(set(int(s) - (1 if cfg.one_indexed else 0) for s in cfg.sources))
        bad = [s for s in S if not 0 <= s < n]
        if bad:
            raise UsageError(f"source {bad[0]} outside [0, {n})")
        return S
    k = min(n, int(cfg.num_sources))
    rng = np.random.default_rng(cfg.seed)
    return sorted(rng.choice(n, size=k, replace=False).tolist())


def _tree_for(cfg: RunConfig, G: WeightedDiGraph) -> DecompositionTree:
    if cfg.tree:
        with open(cfg.tree) as fh:
            return DecompositionTree.loads(fh.read())
    finder = make_finder(cfg.strategy, cfg.ratio, cfg.grid)
    return build_decomposition_tree(underlying_skeleton(G), finder, cfg.tau)


def _json_dist(x):
    return None if not np.isfinite(x) else float(x)


def _emit_edges(cfg, lines):
    if cfg.edges_out:
        with open(cfg.edges_out, "w") as fh:
            fh.write("\n".join(lines) + ("\n" if lines else ""))


def _base(cfg, G):
    return {"schema": SCHEMA, "command": cfg.command, "n": G.n, "m": G.m, "seed": cfg.seed}


def cmd_reach(cfg, G):
    S = pick_sources(cfg, G.n)
    doc = _base(cfg, G)
    plan = plan_for(G, len(S))
    stats: dict = {}
    if cfg.tree:
        tree = _tree_for(cfg, G)
        B = direach_via_tree(G, S, tree, cfg.threads, stats)
        doc["method"] = "tree"
    else:
        D = plan.D if cfg.D == "auto" else int(cfg.D)
        B = direach(G, S, D, cfg.seed, cfg.threads, stats)
        doc["method"] = "sampling"
    doc.update(sources=S, plan=plan.as_dict(), stats=stats, rows=B.tolist())
    return doc


def cmd_dist(cfg, G):
    S = pick_sources(cfg, G.n)
    tree = _tree_for(cfg, G)
    stats: dict = {}
    est = approx_sxv_distances(G, S, cfg.eps, tree, threads=cfg.threads, stats=stats)
    doc = _base(cfg, G)
    doc.update(sources=S, eps=cfg.eps, plan=plan_for(G, len(S)).as_dict(), stats=stats,
               distances=[[_json_dist(x) for x in row] for row in est])
    return doc


def cmd_shortcut(cfg, G):
    doc = _base(cfg, G)
    plan = plan_for(G, max(1, cfg.num_sources or 1))
    if cfg.tree or cfg.D == "auto" and cfg.grid:
        tree = _tree_for(cfg, G)
        H = cohen_shortcut(G, tree)
        doc.update(method="tree", depth=tree.depth)
    else:
        H = sampling_d_shortcut(G, plan.D if cfg.D == "auto" else int(cfg.D), cfg.seed)
        doc.update(method="sampling")
    doc["plan"] = plan.as_dict()
    _emit_edges(cfg, H.lines())
    doc.update(target_hopbound=H.target_hopbound, size=len(H), hop_diameter=hop_diameter(G, H),
               edges=[list(e) for e in H.edges])
    return doc


def hopset_stats(G, H) -> dict:
    exact = oracles.all_pairs_distances(G)
    bounded = oracles.k_bounded_all(G.union(H.edges), range(G.n), H.hopbound)
    reach = np.isfinite(exact)
    pos = reach & (exact > 0)
    ratio = np.where(pos, bounded / np.where(pos, exact, 1.0), 1.0)
    return {
        "reachable_pairs": int(reach.sum()),
        "max_stretch": float(ratio[reach].max()) if reach.any() else 1.0,
        "undershoot": bool(np.any(bounded[reach] < exact[reach] * (1 - 1e-12))),
        "missing_within_hopbound": int(np.sum(reach & ~np.isfinite(bounded))),
    }


def cmd_hopset(cfg, G):
    tree = _tree_for(cfg, G)
    H = cohen_hopset(G, tree, cfg.eps)
    _emit_edges(cfg, H.lines())
    doc = _base(cfg, G)
    doc.update(eps=cfg.eps, depth=tree.depth, hopbound=H.hopbound, size=len(H),
               stats=hopset_stats(G, H), edges=[[u, v, w] for u, v, w in H.edges])
    return doc


def cmd_decompose(cfg, G):
    tree = _tree_for(cfg, G)
    return tree.to_json()


def bench_rows(cfg) -> list[dict]:
    rows = []
    rng = np.random.default_rng(cfg.seed)
    for n in cfg.sizes:
        for rep in range(cfg.repeats):
            G = random_digraph(n, density_edges(n, cfg.mu), rng)
            k = max(1, math.ceil(math.sqrt(n)))
            S = sorted(rng.choice(n, size=k, replace=False).tolist())
            plan = plan_for(G, k)
            t0 = time.perf_counter()
            H = sampling_d_shortcut(G, plan.D, int(rng.integers(1 << 31)))
            t1 = time.perf_counter()
            A = adjacency_with_identity(G, H)
            B, _ = iterate_bool(rows_restrict(A, S), A, plan.D - 1, cfg.threads)
            t2 = time.perf_counter()
            truth = oracles.reach_rows(G, S)
            t3 = time.perf_counter()
            if not np.array_equal(B.to_dense(), truth):
                raise RuntimeError(f"bench: reachability mismatch at n={n}")
            rows.append({"n": n, "m": G.m, "|S|": k, "D": plan.D,
                         "build_ms": round(1e3 * (t1 - t0), 3),
                         "query_ms": round(1e3 * (t2 - t1), 3),
                         "oracle_ms": round(1e3 * (t3 - t2), 3)})
    return rows


def bench_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


HANDLERS = {"reach": cmd_reach, "dist": cmd_dist, "shortcut": cmd_shortcut,
            "hopset": cmd_hopset, "decompose": cmd_decompose}


def run_command(cfg: RunConfig) -> tuple[int, object]:
    """Run one command. Returns (exit code, JSON document or CSV text)."""
    try:
        cfg.validate()
        if cfg.command == "bench":
            return 0, bench_csv(bench_rows(cfg))
        G = parse_edge_list(cfg.input, cfg.one_indexed)
        return 0, HANDLERS[cfg.command](cfg, G)
    except (UsageError, EdgeListError, GraphError, ValueError, RuntimeError, OSError) as exc:
        return 2, {"schema": SCHEMA, "command": cfg.command, "error": str(exc)}


def dumps(doc) -> str:
    if isinstance(doc, str):
        return doc
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _grid_arg(text):
    try:
        r, c = text.lower().split("x")
        return int(r), int(c)
    except ValueError:
        raise argparse.ArgumentTypeError("grid shape must look like 4x4") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sxvreach", description="S x V reachability and approximate distances on digraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=True):
        if graph:
            sp.add_argument("input", help="edge list file")
            sp.add_argument("--one-indexed", action="store_true", help="vertex ids start at 1")
        sp.add_argument("--output", "-o", help="write result here instead of stdout")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("-v", "--verbose", action="store_true")

    def sources(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--sources", type=lambda s: [int(x) for x in s.split(",") if x.strip()],
                       help="comma separated source ids")
        g.add_argument("--num-sources", type=int, help="pick this many sources at random (seeded)")

    def tree_opts(sp):
        sp.add_argument("--tree", help="import a decomposition tree JSON instead of building one")
        sp.add_argument("--strategy", choices=STRATEGIES, default="bfs-heuristic")
        sp.add_argument("--tau", type=int, default=8, help="leaf size threshold")
        sp.add_argument("--ratio", type=float, default=2 / 3, help="separator balance ratio")
        sp.add_argument("--grid", type=_grid_arg, help="grid shape RxC for --strategy grid")

    r = sub.add_parser("reach", help="S x V reachability")
    common(r)
    sources(r)
    r.add_argument("--D", default="auto", help="shortcut hop target, or 'auto'")
    r.add_argument("--tree", help="use this decomposition tree (tree-based shortcut)")

    d = sub.add_parser("dist", help="(1+eps)-approximate S x V distances")
    common(d)
    sources(d)
    d.add_argument("--eps", type=float, default=0.5)
    tree_opts(d)

    s = sub.add_parser("shortcut", help="build a shortcut set and measure the hop diameter")
    common(s)
    s.add_argument("--D", default="auto")
    s.add_argument("--num-sources", type=int, default=None, help="source count used by --D auto")
    s.add_argument("--edges-out", help="also write 'u v' lines here")
    tree_opts(s)

    h = sub.add_parser("hopset", help="build a tree hopset and measure stretch")
    common(h)
    h.add_argument("--eps", type=float, default=0.5)
    h.add_argument("--edges-out", help="also write 'u v w' lines here")
    tree_opts(h)

    c = sub.add_parser("decompose", help="build and export a separator decomposition tree")
    common(c)
    tree_opts(c)

    b = sub.add_parser("bench", help="time DiReach against BFS from every source (CSV)")
    common(b, graph=False)
    b.add_argument("--sizes", type=lambda s: [int(x) for x in s.split(",")], default=[50, 100, 200])
    b.add_argument("--mu", type=float, default=1.5, help="edge density exponent, m = n^mu")
    b.add_argument("--repeats", type=int, default=1)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    for f in ("input", "sources", "num_sources", "eps", "D", "tree", "output", "seed", "threads",
              "one_indexed", "strategy", "tau", "ratio", "grid", "edges_out", "sizes", "mu", "repeats"):
        if hasattr(ns, f) and getattr(ns, f) is not None:
            setattr(cfg, f, getattr(ns, f))
    return cfg


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    code, doc = run_command(config_from_args(ns))
    text = dumps(doc)
    if ns.output and code == 0:
        with open(ns.output, "w") as fh:
            fh.write(text)
    else:
        (sys.stdout if code == 0 else sys.stderr).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
