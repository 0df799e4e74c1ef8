"""Recompute the running-time exponents g(sigma) and g_mu(sigma) from the omega(sigma) table.

Prints the recomputed dense and sparse exponents next to the published values,
and bisects for the smallest sigma where g(sigma) < 2 + sigma.
"""
import argparse

from sxvreach.pipelines import choose_delta, omega_sigma
from sxvreach.tables import DENSE_G, SPARSE_G


def threshold(lo=0.3, hi=0.4, iters=60):
    f = lambda s: choose_delta(s, 2.0).g - (2 + s)
    for _ in range(iters):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if f(mid) > 0 else (lo, mid)
    return hi


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tol", type=float, default=5e-4)
    args = ap.parse_args(argv)

    print("dense graphs (mu = 2)")
    print(" sigma  omega(sigma)  delta     g computed  g table    diff")
    for s, g in DENSE_G:
        p = choose_delta(s, 2.0)
        flag = "" if abs(p.g - g) <= args.tol else "  <-"
        print(f" {s:5.3f}  {omega_sigma(s):.6f}      {p.delta:.6f}  {p.g:.6f}    {g:<9}  {p.g - g:+.6f}{flag}")
    print("\nm = n^mu")
    print("  mu    sigma  g computed  g table  diff")
    for mu, s, g in SPARSE_G:
        c = choose_delta(s, mu).g
        flag = "" if abs(c - g) <= args.tol else "  <-"
        print(f" {mu:5.3f}  {s:5.3f}  {c:.6f}    {g:<7}  {c - g:+.6f}{flag}")
    print(f"\nsmallest sigma with g(sigma) < 2 + sigma: {threshold():.6f}")


if __name__ == "__main__":
    main()
