"""Command line: run check suites, evaluate norms, tabulate K-functionals and
estimate best constants.

    ceslab check --suite identities --seed 42 --format text
    ceslab norm --space "Ces(Lp(1,[0,1]))" --input f.csv
    ceslab kprofile --left "Lp(1,[0,inf))" --right "Lp(1,[0,inf),pow(-1))" --input f.csv
    ceslab constant --ratio cr --budget 2000
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .interpolation import k_profile
from .lab import SuiteConfig, estimate_best_constant, render_report, run_suite
from .norms import norm
from .spaces import SpaceError, parse_space, read_element


def _tolerances(items):
    out = {}
    for item in items or []:
        key, _, val = item.partition("=")
        if not _:
            raise SpaceError(f"tolerance override {item!r} is not key=value")
        out[key.strip()] = float(val)
    return out


def cmd_check(args) -> int:
    cfg = SuiteConfig(args.suite, seed=args.seed, samples=args.samples, n=args.n, cells=args.cells,
                      eps=args.eps, tmax=args.tmax, tolerances=_tolerances(args.tol), out=args.out,
                      fmt=args.format, timing=args.timing)
    report = run_suite(cfg)
    data = render_report(report, cfg.fmt)
    if cfg.out:
        with open(cfg.out, "wb") as fh:
            fh.write(data)
        s = report.summary
        print(f"{cfg.suite}: pass {s['pass']}  fail {s['fail']}  flagged {s['flagged']}  -> {cfg.out}")
    else:
        sys.stdout.write(data.decode())
    return 0 if report.ok else 1


def cmd_norm(args) -> int:
    space = parse_space(args.space)
    x = read_element(args.input, space)
    r = norm(space, x)
    print(f"value {r.value!r}")
    print(f"error_bound {r.error_bound!r}")
    print(f"divergent {str(r.divergent).lower()}")
    if not r.converged:
        print("converged false")
    return 0


def cmd_kprofile(args) -> int:
    left, right = parse_space(args.left), parse_space(args.right)
    x = read_element(args.input, left)
    prof = k_profile(x, left, right, args.tmin, args.tmax, args.points)
    if args.out:
        prof.to_csv(args.out)
    else:
        print("t,K")
        for t, k in zip(prof.t, prof.k):
            print(f"{float(t)!r},{float(k)!r}")
    for note in prof.flags:
        print(f"# {note}", file=sys.stderr)
    return 0


def cmd_constant(args) -> int:
    est = estimate_best_constant(args.ratio, args.budget, args.seed)
    print(json.dumps({"ratio": est.ratio, "supremum": est.value, "bound": est.bound,
                      "evaluations": est.evaluations, "sample": np.asarray(est.sample).tolist()}, indent=2))
    return 0 if est.value <= est.bound else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ceslab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run a check suite and write its report")
    c.add_argument("--suite", required=True)
    c.add_argument("--seed", type=int, default=42)
    c.add_argument("--samples", type=int, default=100, help="random samples per case")
    c.add_argument("--n", type=int, default=64, help="sequence length")
    c.add_argument("--cells", type=int, default=64, help="grid cells of sampled functions")
    c.add_argument("--eps", type=float, default=1e-6, help="lower truncation on the half-line")
    c.add_argument("--tmax", type=float, default=1e6, help="upper truncation on the half-line")
    c.add_argument("--tol", action="append", metavar="KEY=VALUE",
                   help="tolerance override (exact, identity, quadrature, solver)")
    c.add_argument("--out", default=None)
    c.add_argument("--format", choices=("json", "csv", "text"), default="json")
    c.add_argument("--timing", action="store_true", help="record wall-clock time (breaks byte equality)")
    c.set_defaults(func=cmd_check)

    n = sub.add_parser("norm", help="norm of a CSV element in a described space")
    n.add_argument("--space", required=True)
    n.add_argument("--input", required=True)
    n.set_defaults(func=cmd_norm)

    k = sub.add_parser("kprofile", help="K-functional of a CSV element on a log grid")
    k.add_argument("--left", required=True)
    k.add_argument("--right", required=True)
    k.add_argument("--input", required=True)
    k.add_argument("--tmin", type=float, default=1e-4)
    k.add_argument("--tmax", type=float, default=1e4)
    k.add_argument("--points", type=int, default=64)
    k.add_argument("--out", default=None)
    k.set_defaults(func=cmd_kprofile)

    s = sub.add_parser("constant", help="empirical supremum of a registered ratio")
    s.add_argument("--ratio", required=True)
    s.add_argument("--budget", type=int, default=2000)
    s.add_argument("--seed", type=int, default=42)
    s.set_defaults(func=cmd_constant)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SpaceError, OSError, ValueError) as exc:
        print(f"ceslab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
