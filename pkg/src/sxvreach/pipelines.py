"""End-to-end S x V queries built from a shortcut/hopset plus repeated semiring products."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import WeightedDiGraph, as_subset, hop_exponent, integerize_weights
from .hopsets import cohen_hopset, cohen_shortcut, sampling_d_shortcut
from .semiring import (INF, BoolMatrix, approx_distance_product, bool_matmul, minplus_product,
                       rows_restrict)
from .separators import DecompositionTree, hopbound

# Upper bounds on omega(sigma), the exponent of an n^sigma x n by n x n product.
OMEGA_TABLE = (
    (0.321334, 2.0),
    (0.33, 2.000100),
    (0.34, 2.000600),
    (0.35, 2.001363),
    (0.40, 2.009541),
    (0.45, 2.023788),
    (0.50, 2.042994),
    (0.527661, 2.055322),
    (0.55, 2.066134),
    (0.60, 2.092631),
    (0.65, 2.121734),
    (0.70, 2.153048),
    (0.75, 2.186210),
    (0.80, 2.220929),
    (0.85, 2.256984),
    (0.90, 2.294209),
    (0.95, 2.332440),
    (1.00, 2.371552),
)
ALPHA = 0.321334
OMEGA = 2.371552


@dataclass(frozen=True)
class OmegaTable:
    points: tuple = OMEGA_TABLE
    alpha: float = ALPHA
    omega: float = OMEGA

    def __post_init__(self):
        s = [p[0] for p in self.points]
        w = [p[1] for p in self.points]
        if any(b <= a for a, b in zip(s, s[1:])):
            raise ValueError("sigma knots must be strictly increasing")
        if any(b < a for a, b in zip(w, w[1:])):
            raise ValueError("omega values must be non-decreasing")

    def slopes(self) -> list[float]:
        p = self.points
        return [(p[i + 1][1] - p[i][1]) / (p[i + 1][0] - p[i][0]) for i in range(len(p) - 1)]

    def is_convex(self) -> bool:
        s = self.slopes()
        return all(b >= a - 1e-12 for a, b in zip(s, s[1:]))

    def __call__(self, sigma: float) -> float:
        if not 0.0 <= sigma <= 1.0:
            raise ValueError(f"sigma must lie in [0, 1], got {sigma}")
        if sigma <= self.alpha:
            return 2.0
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return float(np.interp(sigma, xs, ys))


DEFAULT_OMEGA = OmegaTable()


def omega_sigma(sigma: float) -> float:
    return DEFAULT_OMEGA(sigma)


@dataclass(frozen=True)
class QueryPlan:
    sigma: float
    mu: float
    delta: float
    D: int
    g: float

    def as_dict(self) -> dict:
        return {"sigma": self.sigma, "mu": self.mu, "delta": self.delta, "D": self.D, "g": self.g}


def choose_delta(sigma: float, mu: float = 2.0, n: int | None = None) -> QueryPlan:
    """Balance shortcut cost n^(1+mu-2 delta) against product cost n^(omega(sigma)+delta).

    delta = (1 + mu - omega(sigma)) / 3 clamped to [0, 1/2]; the predicted
    exponent is (1 + mu + 2 omega(sigma)) / 3. With ``n`` given, D = ceil(n^delta)
    capped at ceil(sqrt(n)); otherwise D = 1.
    """
    w = omega_sigma(sigma)
    delta = min(0.5, max(0.0, (1.0 + mu - w) / 3.0))
    g = (1.0 + mu + 2.0 * w) / 3.0
    D = 1
    if n is not None and n > 1:
        D = max(1, min(math.ceil(n ** delta - 1e-12), math.ceil(math.sqrt(n))))
    return QueryPlan(float(sigma), float(mu), delta, int(D), g)


def plan_for(G: WeightedDiGraph, n_sources: int) -> QueryPlan:
    sigma = min(1.0, hop_exponent(G.n, n_sources))
    mu = min(2.0, hop_exponent(G.n, G.m))
    return choose_delta(sigma, mu, G.n)


def adjacency_with_identity(G: WeightedDiGraph, extra=None) -> BoolMatrix:
    A = np.eye(G.n, dtype=bool)
    A[G.src, G.dst] = True
    if extra is not None and len(extra):
        A[extra.src, extra.dst] = True
    return BoolMatrix.from_dense(A)


def iterate_bool(B: BoolMatrix, A: BoolMatrix, max_products: int, threads: int) -> tuple[BoolMatrix, int]:
    done = 0
    while done < max_products:
        nxt = bool_matmul(B, A, threads)
        done += 1
        if nxt == B:
            break
        B = nxt
    return B, done


def direach(G: WeightedDiGraph, S, D: int, seed=None, threads: int = 1, stats: dict | None = None) -> BoolMatrix:
    """S x V reachability: sampled D-shortcut, then up to D-1 products with A + I."""
    if D < 1:
        raise ValueError("D must be >= 1")
    S = as_subset(S, G.n)
    H = sampling_d_shortcut(G, D, seed)
    A = adjacency_with_identity(G, H)
    B = rows_restrict(A, S)
    B, used = iterate_bool(B, A, D - 1, threads)
    if stats is not None:
        stats.update(shortcut_edges=len(H), products=used, D=int(D))
    return B


def direach_via_tree(G: WeightedDiGraph, S, tree: DecompositionTree, threads: int = 1,
                     stats: dict | None = None) -> BoolMatrix:
    """S x V reachability using the separator-tree shortcut and at most beta - 1 products."""
    S = as_subset(S, G.n)
    H = cohen_shortcut(G, tree)
    beta = hopbound(tree)
    A = adjacency_with_identity(G, H)
    B = rows_restrict(A, S)
    B, used = iterate_bool(B, A, beta - 1, threads)
    if stats is not None:
        stats.update(shortcut_edges=len(H), products=used, beta=beta, depth=tree.depth)
    return B


@dataclass(frozen=True)
class DistanceBudget:
    """How the overall stretch 1 + eps is shared between the three approximation stages.

    Each value is that stage's own parameter; 0 makes the stage exact.
    ``product_xi`` is the per-product xi handed to the scaled distance product
    (whose stretch is 1 + 4 xi).
    """

    hopset_eps: float
    integer_xi: float
    product_xi: float
    products: int

    @classmethod
    def split(cls, eps: float, products: int) -> "DistanceBudget":
        if not eps > 0:
            raise ValueError("eps must be positive")
        gamma = (1.0 + eps) ** (1.0 / 3.0) - 1.0
        h = max(1, products)
        px = ((1.0 + gamma) ** (1.0 / h) - 1.0) / 4.0
        return cls(gamma, gamma, px, products)

    @classmethod
    def exact(cls, products: int) -> "DistanceBudget":
        return cls(0.0, 0.0, 0.0, products)

    def stretch_bound(self) -> float:
        return (1 + self.hopset_eps) * (1 + self.integer_xi) * (1 + 4 * self.product_xi) ** self.products


def approx_sxv_distances(G: WeightedDiGraph, S, eps: float, tree: DecompositionTree,
                         budget: DistanceBudget | None = None, threads: int = 1,
                         stats: dict | None = None) -> np.ndarray:
    """(1 + eps)-approximate S x V distances in original weight units (inf = unreachable).

    Builds the tree hopset, rounds the augmented graph to integer weights,
    and runs at most beta scaled distance products from the source rows. Each
    product is min-combined with the previous matrix so entries never grow.
    """
    S = as_subset(S, G.n)
    beta = hopbound(tree)
    if budget is None:
        budget = DistanceBudget.split(eps, beta)
    if budget.products < beta - 1:
        raise ValueError("budget must allow at least beta - 1 products")
    H = cohen_hopset(G, tree, budget.hopset_eps)
    aug = G.union(H.edges)

    if budget.integer_xi > 0:
        ig = integerize_weights(aug, budget.integer_xi)
        work, scale = ig.graph, ig.scale
    else:
        work, scale = aug, 1.0
    integral = bool(np.all(work.weight == np.floor(work.weight)))
    if integral:
        A = np.full((G.n, G.n), INF, dtype=np.int64)
        A[work.src, work.dst] = work.weight.astype(np.int64)
        np.fill_diagonal(A, 0)
    else:
        if budget.product_xi > 0:
            raise ValueError("approximate products need integer weights; set integer_xi > 0")
        A = work.dense_weights()
    B = rows_restrict(A, S)
    used = 0
    for _ in range(budget.products):
        if budget.product_xi > 0:
            nxt = approx_distance_product(B, A, budget.product_xi, threads)
        else:
            nxt = minplus_product(B, A, threads)
        nxt = np.minimum(nxt, B)
        used += 1
        if np.array_equal(nxt, B):
            break
        B = nxt
    if integral:
        out = np.where(B == INF, np.inf, B.astype(np.float64) * scale)
    else:
        out = B * scale
    if stats is not None:
        stats.update(hopset_edges=len(H), products=used, beta=beta, depth=tree.depth,
                     budget=dict(hopset_eps=budget.hopset_eps, integer_xi=budget.integer_xi,
                                 product_xi=budget.product_xi, products=budget.products))
    return out
