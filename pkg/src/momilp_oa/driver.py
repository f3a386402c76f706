"""Outer-approximation main loop.

Each sweep sends every vertex of the current approximation that is not yet
known to lie in ``Q+`` to a separation oracle, collects the returned cuts
and intersects them with the approximation in one batch. The run stops when
a sweep produces no cut (the approximation equals ``Q+``) or when a time or
sweep limit is hit, in which case the current approximation is still a
valid lower bound set.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import polyhedron as poly
from .oracles import get_oracle, ideal_point
from .polyhedron import Halfspace, OuterApprox
from .rational import Q
from .separation import MasterLP, separate, shift_for_tsep

log = logging.getLogger(__name__)


@dataclass
class RunConfig:
    oracle: str = "sep"  # "sep" | "tsep"
    mode: str = "exact"  # "exact" | "float"
    time_limit: Optional[float] = None
    violation_eps: object = Q(1, 1000)
    inside_eps: object = Q(1, 1000)
    scale_factor: int = 10**9
    max_iterations: Optional[int] = None
    snapshot_every: int = 1  # 0 disables snapshots
    ws: str = "exact"  # "exact" | "relax"
    verify_alpha: bool = False

    def __post_init__(self):
        if self.oracle not in ("sep", "tsep"):
            raise ValueError(f"oracle must be 'sep' or 'tsep', got {self.oracle!r}")
        if self.mode not in ("exact", "float"):
            raise ValueError(f"mode must be 'exact' or 'float', got {self.mode!r}")
        if self.violation_eps <= 0 or self.inside_eps <= 0:
            raise ValueError("tolerances must be positive")
        if self.scale_factor < 1:
            raise ValueError("scale_factor must be at least 1")

    @property
    def exact(self) -> bool:
        return self.mode == "exact"


@dataclass
class Stats:
    sweeps: int = 0
    oracle_calls: int = 0
    ws_calls: int = 0
    lp_solves: int = 0
    pivots: int = 0
    cuts: int = 0
    alpha_checks: int = 0
    seconds: float = 0.0


@dataclass(frozen=True)
class LowerBoundSet:
    iteration: int
    vertices: tuple
    halfspaces: tuple

    def contains(self, y) -> bool:
        return all(h.satisfied_by(y) for h in self.halfspaces)


@dataclass
class RunState:
    approx: OuterApprox
    master: MasterLP
    inside: list = field(default_factory=list)
    iteration: int = 0
    stats: Stats = field(default_factory=Stats)
    _inside_set: set = field(default_factory=set, repr=False)
    _inside_arr: Optional[np.ndarray] = field(default=None, repr=False)

    def remember(self, y) -> None:
        y = tuple(Q(v) for v in y)
        if y not in self._inside_set:
            self._inside_set.add(y)
            self.inside.append(y)
            self._inside_arr = None

    def inside_array(self) -> np.ndarray:
        if self._inside_arr is None:
            self._inside_arr = np.array([[float(v) for v in y] for y in self.inside], dtype=float)
        return self._inside_arr


@dataclass
class RunResult:
    solved: bool
    extreme_points: list
    facets: list
    stats: Stats
    snapshots: list = field(default_factory=list)
    oracle: str = "sep"
    mode: str = "exact"


def match_inside(y, state: RunState, eps=None) -> bool:
    """Is ``y`` a cached inside point? Exact equality when ``eps`` is None,
    otherwise a per-coordinate tolerance."""
    y = tuple(Q(v) for v in y) if eps is None else y
    if eps is None:
        return y in state._inside_set
    if tuple(Q(v) for v in y) in state._inside_set:
        return True
    if not state.inside:
        return False
    arr = state.inside_array()
    diff = np.abs(arr - np.array([float(v) for v in y]))
    return bool(np.any(np.all(diff <= float(eps), axis=1)))


def snapshot(state: RunState) -> LowerBoundSet:
    S = state.approx
    return LowerBoundSet(state.iteration, S.vertices, S.halfspaces)


def _integer_cut(w, alpha, scale: int) -> Optional[Halfspace]:
    wi = [int(math.floor(max(float(v), 0.0) * scale)) for v in w]
    if not any(wi):
        return None
    return Halfspace(tuple(wi), int(math.floor(float(alpha) * scale)))


def _dedupe(cuts, exact: bool):
    out, keys = [], []
    for c in cuts:
        k = c.normalized()
        if exact:
            if k in keys:
                continue
        else:
            kv = [float(v) for v in k.w] + [float(k.alpha)]
            if any(all(abs(a - b) <= 1e-9 * max(1.0, abs(b)) for a, b in zip(kv, o)) for o in keys):
                continue
            k = kv
        keys.append(k)
        out.append(c)
    return out


def init_state(inst, cfg: RunConfig) -> RunState:
    oracle = get_oracle(cfg.ws)
    ideal, seeds = ideal_point(inst, oracle)
    p = len(ideal)
    if cfg.oracle == "tsep":
        shift, rhs = shift_for_tsep(inst, exact=cfg.exact)
    else:
        shift, rhs = (), Q(1)
    master = MasterLP(
        cfg.oracle, p, pool=seeds, rhs_scale=rhs, shift=shift, exact=cfg.exact,
        eps=float(cfg.violation_eps), verify_alpha=cfg.verify_alpha,
    )
    state = RunState(poly.init_from_ideal(ideal), master)
    state.stats.ws_calls += p
    for y in seeds:
        state.remember(y)
    return state


def run(inst, cfg: Optional[RunConfig] = None) -> RunResult:
    cfg = cfg or RunConfig()
    start = time.perf_counter()
    oracle = get_oracle(cfg.ws)
    state = init_state(inst, cfg)
    stats = state.stats
    snaps = []
    if cfg.snapshot_every:
        snaps.append(snapshot(state))
    eps = None if cfg.exact else cfg.inside_eps

    def out_of_time() -> bool:
        return cfg.time_limit is not None and time.perf_counter() - start >= cfg.time_limit

    solved = False
    stopped = False
    while not stopped:
        if cfg.max_iterations is not None and state.iteration >= cfg.max_iterations:
            break
        if out_of_time():
            # checked before completion so a spent budget always reports unsolved
            break
        pending = [v for v in state.approx.vertices if not match_inside(v, state, eps)]
        if not pending:
            solved = True
            break
        cuts = []
        for y in pending:
            if out_of_time():
                stopped = True
                break
            if match_inside(y, state, eps):
                continue
            ans = separate(y, state.master, inst, oracle)
            stats.oracle_calls += 1
            stats.ws_calls += ans.ws_calls
            stats.lp_solves += ans.lp_solves
            stats.pivots += ans.pivots
            for d in ans.discovered:
                state.remember(d)
            if ans.outside:
                if cfg.exact:
                    cuts.append(ans.cut)
                else:
                    c = _integer_cut(*ans.cut, cfg.scale_factor)
                    if c is not None:
                        cuts.append(c)
            else:
                state.remember(y)
        cuts = _dedupe(cuts, cfg.exact)
        if not cuts:
            solved = not stopped
            break
        before = state.approx
        state.approx = poly.add_halfspaces(state.approx, cuts)
        stats.cuts += len(cuts)
        state.iteration += 1
        stats.sweeps = state.iteration
        if cfg.snapshot_every and state.iteration % cfg.snapshot_every == 0:
            snaps.append(snapshot(state))
        if state.approx is before and not stopped:
            # no cut removed a vertex: in float mode the cached-point tolerance
            # can no longer make progress
            log.warning("sweep %d added no effective cut; stopping", state.iteration)
            break
        if out_of_time():
            stopped = True
    stats.alpha_checks = state.master.alpha_checks
    stats.seconds = time.perf_counter() - start
    if cfg.snapshot_every and (not snaps or snaps[-1].iteration != state.iteration):
        snaps.append(snapshot(state))
    S = state.approx
    return RunResult(
        solved=solved,
        extreme_points=list(S.vertices),
        facets=list(S.halfspaces),
        stats=stats,
        snapshots=snaps,
        oracle=cfg.oracle,
        mode=cfg.mode,
    )
