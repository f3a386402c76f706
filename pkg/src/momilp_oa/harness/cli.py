"""``momilp-oa`` command line."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ..driver import RunConfig, run
from ..io import generate_instance, read_instance, serialize_instance, write_result

log = logging.getLogger("momilp_oa")


def _cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    cfg = RunConfig(
        oracle=args.oracle, mode=args.mode, time_limit=args.time_limit,
        snapshot_every=1 if args.snapshots else 0, ws="relax" if args.relax else "exact",
    )
    res = run(inst, cfg)
    text = write_result(res, p=inst.p)
    if args.out:
        Path(args.out).write_bytes(text)
    else:
        sys.stdout.write(text.decode())
    if args.plot:
        from .plots import plot_result

        pts = None
        if inst.p == 2:
            from .brute import TooLarge, brute_force_Q

            try:
                pts = brute_force_Q(inst)
            except TooLarge:
                pts = None
        plot_result(res, args.plot, pts)
    return 0


def _cmd_gen(args) -> int:
    if args.count == 1 and not args.dir:
        text = serialize_instance(generate_instance(args.kind, args.p, args.n, args.seed))
        if args.out:
            Path(args.out).write_bytes(text)
        else:
            sys.stdout.write(text.decode())
        return 0
    out = Path(args.dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    for k in range(args.count):
        seed = args.seed + k
        inst = generate_instance(args.kind, args.p, args.n, seed)
        (out / f"{args.kind}_p{args.p}_n{args.n}_s{seed}.txt").write_bytes(serialize_instance(inst))
    return 0


def _cmd_verify(args) -> int:
    from .bench import verify

    inst = read_instance(args.instance)
    oracles = ("sep", "tsep") if args.oracle == "both" else (args.oracle,)
    ok = True
    for c in verify(inst, oracles):
        status = "MATCH" if c.match else "MISMATCH"
        print(f"{c.oracle}: {status}")
        if not c.match:
            ok = False
            for label, items in (("missing point", c.missing_points), ("extra point", c.extra_points),
                                 ("missing facet", c.missing_facets), ("extra facet", c.extra_facets)):
                for it in items:
                    print(f"  {label}: {' '.join(str(v) for v in it)}")
    print("MATCH" if ok else "MISMATCH")
    return 0 if ok else 1


def _cmd_bench(args) -> int:
    from .bench import aggregate, bench, format_table, format_tsv

    paths = sorted(p for p in Path(args.directory).iterdir() if p.is_file() and not p.name.startswith("."))
    if not paths:
        raise ValueError(f"no instance files in {args.directory}")
    limits = tuple(float(t) for t in args.time_limits.split(","))
    oracles = ("sep", "tsep") if args.oracle == "both" else (args.oracle,)
    rows = bench(paths, oracles, args.mode, limits, args.workers)
    agg = aggregate(rows)
    table = format_table(agg, limits)
    sys.stdout.write(table)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.with_suffix(".txt").write_text(table)
        out.with_suffix(".tsv").write_text(format_tsv(agg))
        from .plots import plot_bench

        plot_bench(agg, out.with_suffix(".png"), limits)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="momilp-oa", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="compute the extreme points and facets of an instance")
    s.add_argument("instance")
    s.add_argument("--oracle", choices=("sep", "tsep"), default="sep")
    s.add_argument("--mode", choices=("exact", "float"), default="exact")
    s.add_argument("--time-limit", type=float, default=None)
    s.add_argument("--snapshots", action="store_true", help="record the bound set after every sweep")
    s.add_argument("--relax", action="store_true", help="use the fractional knapsack relaxation")
    s.add_argument("--out", help="result file (default: stdout)")
    s.add_argument("--plot", help="write a figure of the result to this path")
    s.set_defaults(func=_cmd_solve)

    g = sub.add_parser("gen", help="generate random instances")
    g.add_argument("kind", choices=("map", "mkp"))
    g.add_argument("p", type=int)
    g.add_argument("n", type=int)
    g.add_argument("seed", type=int)
    g.add_argument("--count", type=int, default=1, help="instances with seeds seed..seed+count-1")
    g.add_argument("--dir", help="write instances into this directory")
    g.add_argument("--out", help="single instance file (default: stdout)")
    g.set_defaults(func=_cmd_gen)

    v = sub.add_parser("verify", help="solve and compare against brute force (small instances)")
    v.add_argument("instance")
    v.add_argument("--oracle", choices=("sep", "tsep", "both"), default="both")
    v.set_defaults(func=_cmd_verify)

    b = sub.add_parser("bench", help="benchmark a directory of instances")
    b.add_argument("directory")
    b.add_argument("--time-limits", default="10,100,600")
    b.add_argument("--oracle", choices=("sep", "tsep", "both"), default="both")
    b.add_argument("--mode", choices=("exact", "float"), default="float")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out", help="basename for .txt/.tsv/.png reports")
    b.set_defaults(func=_cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except Exception as e:  # noqa: BLE001
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
