from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momilp_oa.driver import RunConfig, init_state, match_inside, run
from momilp_oa.harness.bench import compare, solver_sets
from momilp_oa.harness.brute import brute_force_hull, brute_force_Q, hull_of_instance
from momilp_oa.io import facet_key, generate_instance
from momilp_oa.oracles import ExplicitSet

from conftest import SAMPLE_EXTREME, SAMPLE_FACETS, frac_points


@pytest.mark.parametrize("oracle", ["sep", "tsep"])
def test_sample_exact(sample, oracle):
    res = run(sample, RunConfig(oracle=oracle))
    assert res.solved
    assert frac_points(res.extreme_points) == frac_points(SAMPLE_EXTREME)
    assert {facet_key(h) for h in res.facets} == SAMPLE_FACETS


@pytest.mark.parametrize("oracle", ["sep", "tsep"])
def test_two_by_two_assignment(small_map, oracle):
    res = run(small_map, RunConfig(oracle=oracle))
    assert frac_points(res.extreme_points) == {(2, 4), (4, 2)}
    assert {facet_key(h) for h in res.facets} == {(1, 0, 2), (0, 1, 2), (1, 1, 6)}


def test_single_point_needs_no_cut():
    res = run(ExplicitSet([(3, 3)]))
    assert res.solved
    assert res.stats.cuts == 0
    assert frac_points(res.extreme_points) == {(3, 3)}
    assert {facet_key(h) for h in res.facets} == {(1, 0, 3), (0, 1, 3)}


def test_small_knapsack(small_mkp):
    res = run(small_mkp, RunConfig(oracle="tsep"))
    assert frac_points(res.extreme_points) == {(-3, -1), (-1, -3)}


def test_snapshots_start_at_ideal_orthant(sample):
    res = run(sample)
    first = res.snapshots[0]
    assert first.iteration == 0
    assert frac_points(first.vertices) == {(2, 2)}
    assert res.snapshots[-1].iteration == res.stats.sweeps
    assert len(res.snapshots) == res.stats.sweeps + 1


def test_snapshots_contain_sample_extreme_points(sample):
    res = run(sample)
    assert len(res.snapshots) >= 3
    for snap in res.snapshots:
        assert all(snap.contains(y) for y in SAMPLE_EXTREME)
    last = res.snapshots[-1]
    assert list(last.vertices) == res.extreme_points
    assert list(last.halfspaces) == res.facets


def test_snapshots_disabled(sample):
    assert run(sample, RunConfig(snapshot_every=0)).snapshots == []


@pytest.mark.parametrize("oracle", ["sep", "tsep"])
@pytest.mark.parametrize("seed", range(3))
def test_anytime_bounds_and_progress(oracle, seed):
    inst = generate_instance("mkp", 3, 9, seed)
    pts = brute_force_Q(inst)
    res = run(inst, RunConfig(oracle=oracle))
    for snap in res.snapshots:
        assert all(snap.contains(q) for q in pts)
    for a, b in zip(res.snapshots, res.snapshots[1:]):
        # each sweep shrinks the set and removes at least one vertex
        assert all(a.contains(v) for v in b.vertices)
        assert set(a.vertices) - set(b.vertices)
    assert res.stats.sweeps <= len(res.facets) + len(res.extreme_points)


def test_match_inside_tolerance(sample):
    state = init_state(sample, RunConfig(mode="float"))
    state.remember((2, 9))
    assert match_inside((2.0005, 9.0002), state, 1e-3)
    assert not match_inside((2.01, 9), state, 1e-3)
    assert match_inside((2, 9), state)
    assert not match_inside((2.0005, 9.0002), state)


@pytest.mark.parametrize("seed", range(4))
def test_oracles_agree(seed):
    inst = generate_instance("map", 3, 4, seed)
    a = run(inst, RunConfig(oracle="sep"))
    b = run(inst, RunConfig(oracle="tsep"))
    assert solver_sets(a) == solver_sets(b)
    assert compare(a, hull_of_instance(inst)).match


@pytest.mark.parametrize("seed", range(3))
def test_relaxation_gives_valid_bound(seed):
    inst = generate_instance("mkp", 3, 10, seed)
    exact = run(inst)
    relax = run(inst, RunConfig(ws="relax"))
    assert relax.solved
    assert all(all(h.satisfied_by(v) for h in relax.facets) for v in exact.extreme_points)
    assert all(all(h.satisfied_by(q) for h in relax.facets) for q in brute_force_Q(inst))


def test_time_limit_zero_returns_valid_bound():
    inst = generate_instance("mkp", 3, 10, 1)
    res = run(inst, RunConfig(time_limit=0))
    assert not res.solved
    assert res.facets
    assert all(all(h.satisfied_by(q) for h in res.facets) for q in brute_force_Q(inst))


def test_iteration_cap():
    inst = generate_instance("mkp", 3, 10, 1)
    res = run(inst, RunConfig(max_iterations=1))
    assert not res.solved
    assert res.stats.sweeps == 1


def test_alpha_checks_counted(sample):
    res = run(sample, RunConfig(verify_alpha=True))
    assert res.stats.alpha_checks > 0


@pytest.mark.parametrize("kw", [{"oracle": "dual"}, {"mode": "approx"}, {"inside_eps": 0}, {"scale_factor": 0}])
def test_bad_config(kw):
    with pytest.raises(ValueError):
        RunConfig(**kw)


@pytest.mark.parametrize("oracle", ["sep", "tsep"])
def test_float_mode_close_to_exact(oracle):
    inst = generate_instance("map", 3, 4, 5)
    exact = run(inst, RunConfig(oracle=oracle))
    fl = run(inst, RunConfig(oracle=oracle, mode="float"))
    assert fl.solved
    for v in exact.extreme_points:
        assert any(max(abs(float(a) - float(b)) for a, b in zip(v, u)) < 1e-3 for u in fl.extreme_points)


points2 = st.lists(st.tuples(st.integers(0, 12), st.integers(0, 12)), min_size=1, max_size=20)
points3 = st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6)), min_size=1, max_size=14)


@settings(max_examples=40, deadline=None)
@given(pts=st.one_of(points2, points3), oracle=st.sampled_from(["sep", "tsep"]))
def test_random_point_sets_match_hull(pts, oracle):
    res = run(ExplicitSet(pts), RunConfig(oracle=oracle, snapshot_every=0))
    hull = brute_force_hull([tuple(Fraction(v) for v in q) for q in pts])
    pts_, facets = solver_sets(res)
    assert res.solved
    assert pts_ == set(hull.extreme_points)
    assert facets == {w + (a,) for w, a in hull.facets}
