"""Acceptance criteria 1-9. Each test records one PASS/FAIL line that is
printed in the terminal summary."""
import time
from fractions import Fraction

import numpy as np
import pytest

from momilp_oa import driver
from momilp_oa.driver import RunConfig, run
from momilp_oa.harness.bench import compare, solver_sets
from momilp_oa.harness.brute import brute_force_Q, hull_of_instance
from momilp_oa.harness.cli import main
from momilp_oa.io import facet_key, generate_instance, parse_result, write_instance
from momilp_oa.oracles import ExplicitSet

from conftest import SAMPLE_EXTREME, SAMPLE_FACETS, SAMPLE_POINTS, acceptance_instances, frac_points, record


def F(v):
    return Fraction(int(v.numerator), int(v.denominator))


def wdot(w, y):
    return sum(F(a) * Fraction(b) for a, b in zip(w, y))


def satisfies(h, y):
    return wdot(h.w, y) >= F(h.alpha)


def count_violations(halfspaces, points):
    """Exact count of (halfspace, point) pairs with w.y < alpha, on the
    coprime integer form of each halfspace."""
    if not halfspaces or not points:
        return 0
    keys = [facet_key(h) for h in halfspaces]
    W = np.array([k[:-1] for k in keys], dtype=object)
    A = np.array([k[-1] for k in keys], dtype=object)
    P = np.array(points, dtype=object)
    big = max(abs(int(v)) for v in W.flat) * max(abs(int(v)) for v in P.flat) * P.shape[1]
    if big < 2**62:
        W, A, P = W.astype(np.int64), A.astype(np.int64), P.astype(np.int64)
    return int(((P @ W.T) < A).sum())


def tight_rank(h, vertices, p):
    """Rank of the homogenised generators of Q+ lying on the hyperplane of h."""
    rows = [[Fraction(v) for v in y] + [Fraction(1)] for y in vertices if wdot(h.w, y) == F(h.alpha)]
    rows += [[Fraction(int(i == k)) for k in range(p)] + [Fraction(0)] for i in range(p) if F(h.w[i]) == 0]
    r = 0
    cols = p + 1
    for c in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


class Run:
    def __init__(self, name, inst):
        self.name, self.inst = name, inst


def min_value(h, points):
    """min of w.y over the points, in the coprime integer form of h."""
    key = facet_key(h)
    P = np.array(points, dtype=object)
    return min(P @ np.array(key[:-1], dtype=object)), key[-1]


@pytest.fixture(scope="module")
def corpus():
    """Criterion-2 instances solved once with both oracles; every Sep cut is
    also checked against the enumerated minimum. The reported time covers
    enumeration, brute-force hulls and both solves."""
    elapsed = 0.0
    runs = []
    alpha_errors = []
    real_separate = driver.separate
    for name, inst in acceptance_instances():
        r = Run(name, inst)
        cuts = []

        def checked(y, master, inst_, oracle):
            ans = real_separate(y, master, inst_, oracle)
            if master.kind == "sep" and ans.outside:
                cuts.append(ans.cut)
            return ans

        t0 = time.perf_counter()
        r.points = brute_force_Q(inst)
        r.hull = hull_of_instance(inst)
        driver.separate = checked
        try:
            r.sep = run(inst, RunConfig(oracle="sep", verify_alpha=True))
        finally:
            driver.separate = real_separate
        r.tsep = run(inst, RunConfig(oracle="tsep"))
        elapsed += time.perf_counter() - t0
        for h in cuts:
            best, alpha = min_value(h, r.points)
            if best != alpha:
                alpha_errors.append((name, h))
        r.sep_cuts = len(cuts)
        runs.append(r)
    return runs, alpha_errors, elapsed


def test_criterion_1_sample_set():
    t0 = time.perf_counter()
    ok = True
    for oracle in ("sep", "tsep"):
        res = run(ExplicitSet(SAMPLE_POINTS), RunConfig(oracle=oracle))
        ok &= res.solved
        ok &= frac_points(res.extreme_points) == frac_points(SAMPLE_EXTREME)
        ok &= {facet_key(h) for h in res.facets} == SAMPLE_FACETS
    ok &= hull_of_instance(ExplicitSet(SAMPLE_POINTS)).facets == {(f[:2], f[2]) for f in SAMPLE_FACETS}
    dt = time.perf_counter() - t0
    ok &= dt < 1.0
    assert record("1 sample-set reproduction", ok, f"4 points, 5 facets, both oracles, {dt:.2f}s")


def test_criterion_2_matches_brute_force(corpus):
    runs, _, dt = corpus
    matched = sum(compare(r.sep, r.hull).match and r.sep.solved for r in runs)
    ok = matched == 150 and len(runs) == 150 and dt < 300
    assert record("2 brute-force equivalence", ok, f"{matched}/{len(runs)} exact matches, {dt:.1f}s total")


def test_criterion_3_snapshots_are_lower_bounds(corpus):
    runs, _, _ = corpus
    violations = snaps = 0
    for r in runs:
        for res in (r.sep, r.tsep):
            for s in res.snapshots:
                snaps += 1
                violations += count_violations(s.halfspaces, r.points)
    assert record("3 anytime validity", violations == 0 and snaps > 0,
                  f"{violations} violations over {snaps} snapshots")


def test_criterion_4_oracles_agree(corpus):
    runs, _, _ = corpus
    same = sum(r.tsep.solved and solver_sets(r.sep) == solver_sets(r.tsep) for r in runs)
    assert record("4 sep/tsep agreement", same == len(runs), f"{same}/{len(runs)} identical")


def test_criterion_5_alpha_is_weighted_sum_optimum(corpus):
    runs, alpha_errors, _ = corpus
    checks = sum(r.sep.stats.alpha_checks for r in runs)
    cuts = sum(r.sep_cuts for r in runs)
    ok = not alpha_errors and checks > 0
    assert record("5 alpha equals ws optimum", ok,
                  f"{checks} separations rechecked by ws call, {cuts} cuts against enumeration, "
                  f"{len(alpha_errors)} mismatches")


def test_criterion_6_facets_are_supported(corpus):
    runs, _, _ = corpus
    bad = total = 0
    for r in runs:
        for res in (r.sep, r.tsep):
            p = r.inst.p
            for h in res.facets:
                total += 1
                bad += tight_rank(h, res.extreme_points, p) < p
    assert record("6 facet support", bad == 0 and total > 0, f"{total} facets, {bad} not of full rank")


def test_criterion_7_relaxation_bound(corpus):
    runs, _, _ = corpus
    chosen = [r for r in runs if r.inst.kind == "mkp" and r.inst.p == 3][:20]
    viol_q = viol_ext = 0
    solved = 0
    for r in chosen:
        res = run(r.inst, RunConfig(ws="relax", snapshot_every=0))
        solved += res.solved
        viol_q += count_violations(res.facets, r.points)
        viol_ext += sum(not satisfies(h, v) for h in res.facets for v in r.sep.extreme_points)
    ok = len(chosen) == 20 and viol_q == 0 and viol_ext == 0
    assert record("7 relaxation bound", ok,
                  f"20 instances ({solved} solved), {viol_q} point violations, {viol_ext} extreme-point violations")


@pytest.mark.parametrize("kind,n,band", [("map", 10, (20, 200)), ("mkp", 30, (15, 150))])
def test_criterion_8_large_float(kind, n, band):
    inst = generate_instance(kind, 3, n, 0)
    t0 = time.perf_counter()
    res = run(inst, RunConfig(mode="float", snapshot_every=0))
    dt = time.perf_counter() - t0
    k = len(res.facets)
    ok = res.solved and dt < 10 and band[0] <= k <= band[1]
    assert record(f"8 float smoke {kind} n={n}", ok, f"{k} facets in {dt:.2f}s")


def test_criterion_9_time_limit_zero(corpus, tmp_path):
    runs, _, _ = corpus
    good = 0
    for i, r in enumerate(runs):
        src, out = tmp_path / f"{i}.txt", tmp_path / f"{i}.res"
        write_instance(r.inst, src)
        if main(["solve", str(src), "--time-limit", "0", "--out", str(out)]) != 0:
            continue
        doc = parse_result(out.read_bytes())
        if doc.solved or not doc.facets:
            continue
        if count_violations(doc.facets, r.points) == 0:
            good += 1
    assert record("9 time-limit-0 contract", good == len(runs), f"{good}/{len(runs)} unsolved with valid bounds")
