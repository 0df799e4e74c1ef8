"""Time sampled-shortcut reachability against BFS from every source and write CSV.

Thin wrapper over ``sxvreach bench`` that also sweeps edge densities.
"""
import argparse
import sys

from sxvreach.cli import RunConfig, bench_csv, bench_rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100,200,400")
    ap.add_argument("--mus", default="1.2,1.5,1.8")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--output", "-o")
    args = ap.parse_args(argv)

    rows = []
    for mu in (float(x) for x in args.mus.split(",")):
        cfg = RunConfig(command="bench", sizes=[int(x) for x in args.sizes.split(",")], mu=mu,
                        repeats=args.repeats, threads=args.threads, seed=args.seed)
        rows += bench_rows(cfg)
    text = bench_csv(rows)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
