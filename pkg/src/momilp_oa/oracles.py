"""Problem instances and weighted-sum oracles ``min {w.y : y in Q}``.

Every instance is read in the minimisation convention: knapsack profits are
kept positive in the instance but enter objective space negated. Exact calls
(integer / rational weights) break ties towards the lexicographically
smallest objective point; float calls break ties arbitrarily but
deterministically.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from math import gcd
from typing import Callable, Optional, Sequence

import numpy as np

from .rational import Q, lcm


class InfeasibleInstance(Exception):
    pass


@dataclass(frozen=True)
class AssignmentInstance:
    """``p`` cost matrices of size ``n x n``; a solution is a permutation."""

    costs: tuple  # costs[k][i][j]

    kind = "map"

    def __post_init__(self):
        c = tuple(tuple(tuple(int(x) for x in row) for row in mat) for mat in self.costs)
        object.__setattr__(self, "costs", c)
        if not c:
            raise ValueError("assignment instance needs at least one objective")
        n = len(c[0])
        for mat in c:
            if len(mat) != n or any(len(row) != n for row in mat):
                raise ValueError("cost matrices must all be n x n")

    @property
    def p(self) -> int:
        return len(self.costs)

    @property
    def n(self) -> int:
        return len(self.costs[0])


@dataclass(frozen=True)
class KnapsackInstance:
    """Multiobjective 0/1 knapsack: maximise ``p`` profit vectors subject to
    one capacity constraint."""

    profits: tuple  # profits[k][j]
    weights: tuple
    capacity: int

    kind = "mkp"

    def __post_init__(self):
        pr = tuple(tuple(int(x) for x in row) for row in self.profits)
        wt = tuple(int(x) for x in self.weights)
        object.__setattr__(self, "profits", pr)
        object.__setattr__(self, "weights", wt)
        object.__setattr__(self, "capacity", int(self.capacity))
        if not pr:
            raise ValueError("knapsack instance needs at least one objective")
        if any(len(row) != len(wt) for row in pr):
            raise ValueError("profit rows must have one entry per item")

    @property
    def p(self) -> int:
        return len(self.profits)

    @property
    def n(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class ExplicitSet:
    """``Q`` given directly as a finite list of integer points."""

    points: tuple

    kind = "pts"

    def __post_init__(self):
        pts = tuple(tuple(int(x) for x in pt) for pt in self.points)
        object.__setattr__(self, "points", pts)
        if pts and len({len(pt) for pt in pts}) != 1:
            raise ValueError("all points must have the same dimension")

    @property
    def p(self) -> int:
        return len(self.points[0]) if self.points else 0

    @property
    def n(self) -> int:
        return len(self.points)


Instance = AssignmentInstance | KnapsackInstance | ExplicitSet


@dataclass(frozen=True)
class WsResult:
    value: object
    point: tuple
    witness: Optional[tuple] = None
    # set by ws_solve when every weight is positive: the point is then a
    # certified supported point of Q
    supported: bool = False


def _is_exact(w) -> bool:
    return not any(isinstance(v, (float, np.floating)) for v in w)


def check_weight(w, p: int) -> tuple:
    if len(w) != p:
        raise ValueError(f"weight has {len(w)} components, expected {p}")
    if _is_exact(w):
        w = tuple(Q(v) for v in w)
    else:
        w = tuple(float(v) for v in w)
    if any(v < 0 for v in w) or all(v == 0 for v in w):
        raise ValueError(f"weight must be nonnegative and nonzero: {w}")
    return w


def _integer_weights(w) -> list[int]:
    L = 1
    for v in w:
        L = lcm(L, int(v.denominator))
    ints = [int(v * L) for v in w]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints]


def _exact_value(w, point):
    return sum((a * b for a, b in zip(w, point)), Q(0))


# -- explicit sets -----------------------------------------------------------

def ws_explicit(inst: ExplicitSet, w) -> WsResult:
    if not inst.points:
        raise InfeasibleInstance("explicit point set is empty")
    w = check_weight(w, inst.p)
    if _is_exact(w):
        best = min(inst.points, key=lambda y: (_exact_value(w, y), y))
        pt = tuple(Q(v) for v in best)
        return WsResult(_exact_value(w, pt), pt, (inst.points.index(best),))
    vals = [sum(a * b for a, b in zip(w, y)) for y in inst.points]
    k = int(np.argmin(vals))
    return WsResult(vals[k], tuple(Q(v) for v in inst.points[k]), (k,))


# -- assignment --------------------------------------------------------------

def hungarian(cost: Sequence[Sequence]) -> list[int]:
    """Minimum-cost perfect matching of a square matrix.

    Returns ``perm`` with row ``i`` assigned to column ``perm[i]``. Works with
    any ordered numeric type (ints, rationals, floats).
    """
    n = len(cost)
    if n == 0:
        return []
    INF = float("inf")
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    match = [0] * (n + 1)  # match[j] = row matched to column j (1-based)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta = INF
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while True:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
            if j0 == 0:
                break
    perm = [0] * n
    for j in range(1, n + 1):
        perm[match[j] - 1] = j - 1
    return perm


def assignment_point(inst: AssignmentInstance, perm) -> tuple:
    return tuple(Q(sum(mat[i][perm[i]] for i in range(inst.n))) for mat in inst.costs)


def ws_assignment(inst: AssignmentInstance, w) -> WsResult:
    """Weighted sum over permutations, solved as one assignment problem on the
    aggregated cost matrix."""
    w = check_weight(w, inst.p)
    n, p = inst.n, inst.p
    if _is_exact(w):
        W = _integer_weights(w)
        # lexicographic tie-breaking packed into one integer key per entry
        lo = min(min(min(r) for r in mat) for mat in inst.costs)
        hi = max(max(max(r) for r in mat) for mat in inst.costs)
        B = n * (hi - lo) + 1
        cost = []
        for i in range(n):
            row = []
            for j in range(n):
                key = sum(W[k] * inst.costs[k][i][j] for k in range(p))
                for k in range(p):
                    key = key * B + (inst.costs[k][i][j] - lo)
                row.append(key)
            cost.append(row)
        perm = hungarian(cost)
        pt = assignment_point(inst, perm)
        return WsResult(_exact_value(w, pt), pt, tuple(perm))
    cost = [[sum(w[k] * inst.costs[k][i][j] for k in range(p)) for j in range(n)] for i in range(n)]
    perm = hungarian(cost)
    pt = assignment_point(inst, perm)
    return WsResult(sum(w[k] * float(pt[k]) for k in range(p)), pt, tuple(perm))


# -- knapsack ----------------------------------------------------------------

_I64_LIMIT = 2**62


def _knapsack_dp(values, channels, weights, capacity, dtype):
    """0/1 knapsack maximising the key ``(value, channel_1, ..., channel_p)``
    lexicographically. Returns the chosen item indicator tuple."""
    n = len(weights)
    cap = capacity
    val = np.zeros(cap + 1, dtype=dtype)
    ch = [np.zeros(cap + 1, dtype=np.int64) for _ in channels]
    take = np.zeros((n, cap + 1), dtype=bool)
    for j in range(n):
        wt = weights[j]
        if wt > cap:
            continue
        cand = val[: cap + 1 - wt] + values[j]
        cur = val[wt:]
        better = cand > cur
        undecided = cand == cur
        cand_ch = [c[: cap + 1 - wt] + chan[j] for c, chan in zip(ch, channels)]
        for c, cc in zip(ch, cand_ch):
            cur_c = c[wt:]
            better |= undecided & (cc > cur_c)
            undecided &= cc == cur_c
        take[j, wt:] = better
        new_val = np.where(better, cand, cur)
        for c, cc in zip(ch, cand_ch):
            c[wt:] = np.where(better, cc, c[wt:])
        val[wt:] = new_val
    x = [0] * n
    c = cap
    for j in range(n - 1, -1, -1):
        if take[j, c]:
            x[j] = 1
            c -= weights[j]
    return tuple(x)


def knapsack_point(inst: KnapsackInstance, x) -> tuple:
    return tuple(-sum((Q(xj) * pj for xj, pj in zip(x, row)), Q(0)) for row in inst.profits)


def ws_knapsack(inst: KnapsackInstance, w) -> WsResult:
    """Exact 0/1 knapsack by dynamic programming over the capacity."""
    if inst.capacity < 0:
        raise InfeasibleInstance(f"negative capacity {inst.capacity}")
    w = check_weight(w, inst.p)
    p, n = inst.p, inst.n
    if _is_exact(w):
        W = _integer_weights(w)
        values = [sum(W[k] * inst.profits[k][j] for k in range(p)) for j in range(n)]
        bound = sum(abs(v) for v in values)
        dtype = np.int64 if bound < _I64_LIMIT else object
        if dtype is object:
            values = [int(v) for v in values]
    else:
        values = [sum(w[k] * inst.profits[k][j] for k in range(p)) for j in range(n)]
        dtype = np.float64
    x = _knapsack_dp(values, inst.profits, inst.weights, inst.capacity, dtype)
    pt = knapsack_point(inst, x)
    if _is_exact(w):
        return WsResult(_exact_value(w, pt), pt, x)
    return WsResult(sum(w[k] * float(pt[k]) for k in range(p)), pt, x)


def ws_knapsack_relax(inst: KnapsackInstance, w) -> WsResult:
    """Fractional knapsack by the greedy ratio rule.

    The returned point lies in the image of the LP relaxation, so cuts built
    from it are valid for the integer problem without being tight.
    """
    if inst.capacity < 0:
        raise InfeasibleInstance(f"negative capacity {inst.capacity}")
    w = check_weight(w, inst.p)
    exact = _is_exact(w)
    p, n = inst.p, inst.n
    if exact:
        agg = [sum((w[k] * inst.profits[k][j] for k in range(p)), Q(0)) for j in range(n)]
    else:
        agg = [sum(w[k] * inst.profits[k][j] for k in range(p)) for j in range(n)]
    order = sorted(range(n), key=lambda j: (-(agg[j] / inst.weights[j]), j))
    room = Q(inst.capacity)
    x = [Q(0)] * n
    for j in order:
        if room <= 0 or agg[j] <= 0:
            break
        wt = inst.weights[j]
        if wt <= room:
            x[j] = Q(1)
            room -= wt
        else:
            x[j] = room / wt
            room = Q(0)
    pt = knapsack_point(inst, x)
    if exact:
        return WsResult(_exact_value(w, pt), pt, tuple(x))
    return WsResult(sum(w[k] * float(pt[k]) for k in range(p)), pt, tuple(x))


# -- dispatch ----------------------------------------------------------------

def ws_solve(inst, w) -> WsResult:
    if isinstance(inst, ExplicitSet):
        r = ws_explicit(inst, w)
    elif isinstance(inst, AssignmentInstance):
        r = ws_assignment(inst, w)
    elif isinstance(inst, KnapsackInstance):
        r = ws_knapsack(inst, w)
    else:
        raise TypeError(f"unknown instance type {type(inst).__name__}")
    if all(v > 0 for v in w):
        r = replace(r, supported=True)
    return r


WsOracle = Callable[[object, tuple], WsResult]


def get_oracle(name: str) -> WsOracle:
    """``"exact"`` dispatches on instance kind; ``"relax"`` is the fractional
    knapsack relaxation."""
    if name == "exact":
        return ws_solve
    if name == "relax":
        return ws_knapsack_relax
    raise ValueError(f"unknown weighted-sum oracle {name!r}")


def ideal_point(inst, oracle: WsOracle = ws_solve) -> tuple[tuple, list]:
    """Componentwise minimum of ``Q`` and the ``p`` minimisers that attain it."""
    p = inst.p
    if p == 0:
        raise InfeasibleInstance("instance has no feasible point")
    pts, ideal = [], []
    for i in range(p):
        e = tuple(Q(int(i == k)) for k in range(p))
        r = oracle(inst, e)
        ideal.append(Q(r.value))
        pts.append(r.point)
    return tuple(ideal), pts


def objective_lower_bounds(inst) -> tuple:
    """A cheap componentwise lower bound on every point of ``Q``."""
    if isinstance(inst, ExplicitSet):
        return tuple(Q(min(y[k] for y in inst.points)) for k in range(inst.p))
    if isinstance(inst, AssignmentInstance):
        return tuple(Q(sum(min(row) for row in mat)) for mat in inst.costs)
    if isinstance(inst, KnapsackInstance):
        return tuple(Q(-sum(max(v, 0) for v in row)) for row in inst.profits)
    raise TypeError(f"unknown instance type {type(inst).__name__}")


def coefficient_sums(inst) -> tuple:
    """Per-objective sum of absolute objective coefficients."""
    if isinstance(inst, ExplicitSet):
        return tuple(Q(max(abs(y[k]) for y in inst.points)) for k in range(inst.p))
    if isinstance(inst, AssignmentInstance):
        return tuple(Q(sum(abs(v) for row in mat for v in row)) for mat in inst.costs)
    if isinstance(inst, KnapsackInstance):
        return tuple(Q(sum(abs(v) for v in row)) for row in inst.profits)
    raise TypeError(f"unknown instance type {type(inst).__name__}")


__all__ = [
    "AssignmentInstance", "KnapsackInstance", "ExplicitSet", "Instance", "WsResult",
    "InfeasibleInstance", "ws_solve", "ws_assignment", "ws_knapsack", "ws_knapsack_relax",
    "ws_explicit", "hungarian", "ideal_point", "get_oracle",
]
