"""Verification against the brute-force hull and benchmark tables."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from ..driver import RunConfig, run
from ..io import facet_key, read_instance
from .brute import BruteHull, hull_of_instance

log = logging.getLogger(__name__)

DEFAULT_LIMITS = (10.0, 100.0, 600.0)


@dataclass
class Comparison:
    oracle: str
    points_match: bool
    facets_match: bool
    missing_points: list
    extra_points: list
    missing_facets: list
    extra_facets: list

    @property
    def match(self) -> bool:
        return self.points_match and self.facets_match


def solver_sets(result) -> tuple[set, set]:
    pts = {tuple(Fraction(int(v.numerator), int(v.denominator)) for v in y) for y in result.extreme_points}
    facets = {facet_key(h) for h in result.facets}
    return pts, facets


def compare(result, hull: BruteHull) -> Comparison:
    pts, facets = solver_sets(result)
    ref_facets = {w + (a,) for w, a in hull.facets}
    return Comparison(
        result.oracle,
        pts == set(hull.extreme_points),
        facets == ref_facets,
        sorted(set(hull.extreme_points) - pts),
        sorted(pts - set(hull.extreme_points)),
        sorted(ref_facets - facets),
        sorted(facets - ref_facets),
    )


def verify(inst, oracles=("sep", "tsep"), **cfg) -> list[Comparison]:
    hull = hull_of_instance(inst)
    out = []
    for o in oracles:
        res = run(inst, RunConfig(oracle=o, **cfg))
        if not res.solved:
            raise RuntimeError(f"{o} run did not finish")
        out.append(compare(res, hull))
    return out


# -- benchmark tables ---------------------------------------------------------

def group_of(inst) -> str:
    if inst.kind == "map":
        return f"map-{inst.n}"
    if inst.kind == "mkp":
        return f"mkp-{inst.p}-{inst.n}"
    return f"pts-{inst.p}-{inst.n}"


def _run_one(args):
    path, oracle, mode, limits = args
    inst = read_instance(path)
    top = max(limits)
    res = run(inst, RunConfig(oracle=oracle, mode=mode, time_limit=top, snapshot_every=0))
    rows = []
    for t in sorted(limits):
        if t == top or (res.solved and res.stats.seconds < t):
            r = res
        else:
            r = run(inst, RunConfig(oracle=oracle, mode=mode, time_limit=t, snapshot_every=0))
        rows.append({
            "instance": Path(path).name, "group": group_of(inst), "oracle": oracle,
            "limit": t, "facets": len(r.facets), "solved": r.solved,
            "seconds": r.stats.seconds,
        })
    return rows


def bench(paths, oracles=("sep", "tsep"), mode="float", limits=DEFAULT_LIMITS, workers=1):
    """Run every instance under every time limit; returns per-run rows."""
    jobs = [(str(p), o, mode, tuple(limits)) for p in paths for o in oracles]
    rows = []
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            for part in ex.map(_run_one, jobs):
                rows.extend(part)
    else:
        for job in jobs:
            rows.extend(_run_one(job))
    return rows


def aggregate(rows) -> list[dict]:
    agg = {}
    for r in rows:
        key = (r["group"], r["oracle"], r["limit"])
        a = agg.setdefault(key, {"group": r["group"], "oracle": r["oracle"], "limit": r["limit"],
                                 "count": 0, "facets": 0, "solved": 0})
        a["count"] += 1
        a["facets"] += r["facets"]
        a["solved"] += int(r["solved"])
    out = []
    for a in agg.values():
        a["avg_facets"] = a["facets"] / a["count"]
        out.append(a)
    return out


def format_table(agg, limits=DEFAULT_LIMITS) -> str:
    """Aligned text table: one row per group, ``#fac`` and ``#sol`` per
    oracle and time limit."""
    from .plots import _group_order

    oracles = sorted({a["oracle"] for a in agg})
    groups = sorted({a["group"] for a in agg}, key=_group_order)
    limits = sorted(limits)
    idx = {(a["group"], a["oracle"], a["limit"]): a for a in agg}
    head1 = ["group"] + [o for o in oracles for _ in limits for _ in (0, 1)]
    head2 = [""] + [f"{t:g}s" for _ in oracles for t in limits for _ in (0, 1)]
    head3 = [""] + ["#fac" if k == 0 else "#sol" for _ in oracles for _ in limits for k in (0, 1)]
    body = []
    for g in groups:
        row = [g]
        for o in oracles:
            for t in limits:
                a = idx.get((g, o, t))
                row += [f"{a['avg_facets']:.1f}", str(a["solved"])] if a else ["-", "-"]
        body.append(row)
    table = [head1, head2, head3] + body
    widths = [max(len(r[i]) for r in table) for i in range(len(head1))]
    lines = []
    for r in table:
        lines.append("  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths))))
    return "\n".join(lines) + "\n"


def format_tsv(agg) -> str:
    cols = ["group", "oracle", "limit", "count", "avg_facets", "solved"]
    lines = ["\t".join(cols)]
    for a in sorted(agg, key=lambda a: (a["group"], a["oracle"], a["limit"])):
        lines.append("\t".join(f"{a[c]:.1f}" if c == "avg_facets" else str(a[c]) for c in cols))
    return "\n".join(lines) + "\n"
