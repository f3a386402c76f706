"""Point separation oracles driven by weighted-sum row generation.

Two master LPs are supported:

* ``sep``  -- ``min y*.w - alpha`` s.t. ``y.w - alpha >= 0`` for pooled ``y``,
  ``sum(w) = 1``, ``w >= 0``.
* ``tsep`` -- ``min y*.w`` s.t. ``y.w >= rhs`` for pooled ``y``, ``w >= 0``,
  on coordinates shifted so every point of ``Q`` is at least 1.

Rows are generated lazily: after each master solve the weighted-sum oracle is
asked for the minimiser under the current weights, and a row is added when
that minimiser violates the master. The pool of rows is shared across calls.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .oracles import WsResult, coefficient_sums, objective_lower_bounds, ws_solve
from .polyhedron import Halfspace
from .rational import Q, dot

log = logging.getLogger(__name__)


class LpError(Exception):
    pass


class LpInfeasible(LpError):
    pass


class LpUnbounded(LpError):
    pass


class IterationLimit(Exception):
    """Row generation did not settle within the configured number of rounds."""


class AlphaMismatch(AssertionError):
    """The master's alpha disagrees with the weighted-sum optimum."""


@dataclass
class LpSolution:
    objective: object
    variables: tuple
    basis_rows: frozenset
    pivots: int = 0


# -- exact simplex -----------------------------------------------------------

def _pivot(T, r, c):
    row = T[r]
    pv = row[c]
    if pv != 1:
        inv = 1 / pv
        T[r] = row = [v * inv for v in row]
    for i, other in enumerate(T):
        if i == r:
            continue
        f = other[c]
        if f != 0:
            T[i] = [a - f * b for a, b in zip(other, row)]


def _simplex(T, basis, ncols, forbidden=()):
    """Bland-rule primal simplex on tableau ``T`` (last row = reduced costs,
    last column = rhs, minimisation). Returns (status, pivots)."""
    pivots = 0
    obj = T[-1]
    m = len(T) - 1
    while True:
        obj = T[-1]
        enter = -1
        for j in range(ncols):
            if obj[j] < 0 and j not in forbidden:
                enter = j
                break
        if enter < 0:
            return "optimal", pivots
        leave = -1
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave < 0:
            return "unbounded", pivots
        _pivot(T, leave, enter)
        basis[leave] = enter
        pivots += 1


def lp_solve(rows, objective, bounds=None, maximize: bool = False) -> LpSolution:
    """Solve an LP exactly over the rationals.

    ``rows`` holds ``(coeffs, sense, rhs)`` with sense ``">="``, ``"<="`` or
    ``"="``; ``bounds[j]`` is ``"free"`` or ``">=0"`` (default ``">=0"``).
    The returned solution is a vertex of the feasible region.

    The LP typically has many rows and few variables, so the dual (few rows,
    many columns) is solved with a Bland-rule tableau simplex and the primal
    vertex is read off the simplex multipliers. ``basis_rows`` lists the
    original row indices whose dual variable ended basic; those rows are tight
    and linearly independent.
    """
    c = [Q(v) for v in objective]
    n = len(c)
    if maximize:
        c = [-v for v in c]
    if bounds is None:
        bounds = [">=0"] * n

    # primal in the form  G x >= h,  E x = f,  x free
    G, h, src_g = [], [], []
    E, f, src_e = [], [], []
    for k, (coeffs, sense, rhs) in enumerate(rows):
        a = [Q(v) for v in coeffs]
        b = Q(rhs)
        if len(a) != n:
            raise ValueError(f"row {k} has {len(a)} coefficients, expected {n}")
        if sense == ">=":
            G.append(a), h.append(b), src_g.append(k)
        elif sense == "<=":
            G.append([-v for v in a]), h.append(-b), src_g.append(k)
        elif sense in ("=", "=="):
            E.append(a), f.append(b), src_e.append(k)
        else:
            raise ValueError(f"unknown row sense {sense!r}")
    for j, bd in enumerate(bounds):
        if bd == ">=0":
            G.append([Q(int(i == j)) for i in range(n)]), h.append(Q(0)), src_g.append(-1 - j)
        elif bd != "free":
            raise ValueError(f"unknown bound {bd!r}")

    # dual: max h.y + f.z  s.t.  G^T y + E^T z = c,  y >= 0,  z = z+ - z-
    cols, cost, src = [], [], []
    for a, b, s in zip(G, h, src_g):
        cols.append(a), cost.append(-b), src.append(s)
    for a, b, s in zip(E, f, src_e):
        cols.append(a), cost.append(-b), src.append(s)
        cols.append([-v for v in a]), cost.append(b), src.append(s)
    N = len(cols)
    sign = [(-1 if c[i] < 0 else 1) for i in range(n)]

    # tableau columns: N dual vars, n artificials, rhs
    width = N + n + 1
    T = []
    for i in range(n):
        row = [sign[i] * cols[j][i] for j in range(N)]
        row += [Q(int(i == k)) for k in range(n)]
        row.append(sign[i] * c[i])
        T.append(row)
    basis = [N + i for i in range(n)]

    # phase I: minimise the artificials
    ph1 = [Q(0)] * width
    for i in range(n):
        for j in range(N):
            ph1[j] -= T[i][j]
        ph1[-1] -= T[i][-1]
    T.append(ph1)
    status, piv1 = _simplex(T, basis, N)
    if T[-1][-1] != 0:
        raise LpUnbounded("LP is unbounded or infeasible (dual infeasible)")
    # drive zero-level artificials out of the basis where possible
    for i in range(n):
        if basis[i] >= N:
            for j in range(N):
                if T[i][j] != 0:
                    _pivot(T, i, j)
                    basis[i] = j
                    piv1 += 1
                    break

    # phase II
    obj = [Q(0)] * width
    for j in range(N):
        obj[j] = Q(cost[j])
    for i in range(n):
        bj = basis[i]
        cb = cost[bj] if bj < N else Q(0)
        if cb != 0:
            obj = [a - cb * b for a, b in zip(obj, T[i])]
    T[-1] = obj
    status, piv2 = _simplex(T, basis, N, forbidden=set(range(N, N + n)))
    if status == "unbounded":
        raise LpInfeasible("LP is infeasible (dual unbounded)")

    # multipliers of the dual equalities give the primal vertex
    x = tuple(sign[i] * T[-1][N + i] for i in range(n))
    value = sum((a * b for a, b in zip(objective, x)), Q(0))
    basic_rows = frozenset(src[j] for j in basis if j < N and src[j] >= 0)
    return LpSolution(Q(value), x, basic_rows, piv1 + piv2)


def lp_solve_float(rows, objective, bounds=None, maximize: bool = False) -> LpSolution:
    """Floating-point counterpart of :func:`lp_solve` on HiGHS dual simplex."""
    from scipy.optimize import linprog

    c = np.asarray([float(v) for v in objective])
    n = len(c)
    if bounds is None:
        bounds = [">=0"] * n
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for coeffs, sense, rhs in rows:
        a = [float(v) for v in coeffs]
        if sense == ">=":
            A_ub.append([-v for v in a]), b_ub.append(-float(rhs))
        elif sense == "<=":
            A_ub.append(a), b_ub.append(float(rhs))
        else:
            A_eq.append(a), b_eq.append(float(rhs))
    res = linprog(
        -c if maximize else c,
        A_ub=np.array(A_ub) if A_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.array(A_eq) if A_eq else None,
        b_eq=np.array(b_eq) if b_eq else None,
        bounds=[(0, None) if bd == ">=0" else (None, None) for bd in bounds],
        method="highs-ds",
        options={"primal_feasibility_tolerance": 1e-9, "dual_feasibility_tolerance": 1e-9},
    )
    if res.status == 2:
        raise LpInfeasible(res.message)
    if res.status == 3:
        raise LpUnbounded(res.message)
    if res.status != 0:
        raise LpError(res.message)
    x = tuple(float(v) for v in res.x)
    return LpSolution(float(c @ res.x), x, frozenset(), int(getattr(res, "nit", 0)))


# -- master LPs --------------------------------------------------------------

@dataclass
class OracleAnswer:
    status: str  # "inside" | "outside"
    cut: Optional[Halfspace] = None
    discovered: list = field(default_factory=list)
    ws_calls: int = 0
    lp_solves: int = 0
    pivots: int = 0

    @property
    def outside(self) -> bool:
        return self.status == "outside"


@dataclass
class MasterLP:
    """Row pool and settings of one separation master, kept for a whole run."""

    kind: str
    p: int
    pool: list = field(default_factory=list)
    rhs_scale: object = 1
    shift: tuple = ()
    exact: bool = True
    eps: float = 1e-3
    verify_alpha: bool = False
    max_rounds: Optional[int] = None
    alpha_checks: int = 0
    _members: set = field(default_factory=set, repr=False)

    def __post_init__(self):
        if self.kind not in ("sep", "tsep"):
            raise ValueError(f"unknown master kind {self.kind!r}")
        if not self.shift:
            self.shift = tuple(Q(0) for _ in range(self.p))
        pool, self.pool = list(self.pool), []
        for y in pool:
            self.add(y)

    def add(self, y) -> bool:
        y = tuple(Q(v) for v in y)
        if y in self._members:
            return False
        self._members.add(y)
        self.pool.append(y)
        return True

    def __contains__(self, y) -> bool:
        return tuple(Q(v) for v in y) in self._members


def shift_for_tsep(inst, exact: bool = True) -> tuple[tuple, object]:
    """Translation making every point of ``Q`` at least 1, and the TSep rhs.

    Objectives already bounded below by 1 are left alone; otherwise the
    shift is ``1 - lower_bound``, which for knapsack instances is one plus
    the profit sum. In float mode the right-hand side is the total sum of
    absolute objective coefficients instead of 1, which only rescales w.
    """
    lb = objective_lower_bounds(inst)
    s = tuple(Q(0) if v >= 1 else 1 - v for v in lb)
    rhs = Q(1) if exact else sum(coefficient_sums(inst), Q(0))
    return s, rhs


def unshift(cut: Halfspace, shift) -> Halfspace:
    """Map ``w.(y + s) >= r`` back to ``w.y >= r - w.s``."""
    return Halfspace(cut.w, cut.alpha - dot(cut.w, shift))


def _as_weight(w, exact):
    if exact:
        return tuple(Q(v) for v in w)
    return tuple(max(float(v), 0.0) for v in w)


def _solve(rows, obj, bounds, exact):
    return lp_solve(rows, obj, bounds) if exact else lp_solve_float(rows, obj, bounds)


def _round_cap(master: MasterLP) -> int:
    if master.max_rounds is not None:
        return master.max_rounds
    return 10 * len(master.pool) + 1000


def sep_point(y_star, master: MasterLP, inst, oracle=ws_solve) -> OracleAnswer:
    """Decide ``y* in Q+`` with the normalised (sum of weights = 1) master."""
    if master.kind != "sep":
        raise ValueError("sep_point needs a 'sep' master")
    exact = master.exact
    ans = OracleAnswer("inside")
    if y_star in master:
        return ans
    p = master.p
    ys = tuple(Q(v) for v in y_star) if exact else tuple(float(v) for v in y_star)
    obj = list(ys) + [-1]
    bounds = [">=0"] * p + ["free"]
    norm = ([1] * p + [0], "=", 1)
    cap = _round_cap(master)
    while True:
        rows = [(list(y) + [-1], ">=", 0) for y in master.pool]
        rows.append(norm)
        sol = _solve(rows, obj, bounds, exact)
        ans.lp_solves += 1
        ans.pivots += sol.pivots
        w = _as_weight(sol.variables[:p], exact)
        alpha = sol.variables[p]
        r: WsResult = oracle(inst, w)
        ans.ws_calls += 1
        viol = r.value < alpha if exact else r.value < alpha - master.eps
        if not viol:
            break
        ans.discovered.append(r.point)
        if not master.add(r.point):
            log.warning("weighted-sum point already pooled yet violated; stopping row generation")
            break
        if ans.lp_solves > cap:
            raise IterationLimit(f"sep master exceeded {cap} rounds")
    if r.point not in ans.discovered:
        ans.discovered.append(r.point)
    if exact:
        check = r
        if master.verify_alpha:
            check = oracle(inst, w)
            ans.ws_calls += 1
        master.alpha_checks += 1
        if check.value != alpha:
            raise AlphaMismatch(f"alpha={alpha} but weighted-sum optimum is {check.value} at w={w}")
    gap = dot(ys, w) - alpha
    if (gap < 0) if exact else (gap < -master.eps):
        ans.status = "outside"
        ans.cut = Halfspace(w, alpha) if exact else (w, float(alpha))
    return ans


def tsep_point(y_star, master: MasterLP, inst, oracle=ws_solve) -> OracleAnswer:
    """Target-cut separation on shifted coordinates; the returned cut is in
    original coordinates."""
    if master.kind != "tsep":
        raise ValueError("tsep_point needs a 'tsep' master")
    exact = master.exact
    ans = OracleAnswer("inside")
    if y_star in master:
        return ans
    p = master.p
    s = master.shift
    rhs = master.rhs_scale
    if exact:
        ys = tuple(Q(v) + si for v, si in zip(y_star, s))
        sh = s
    else:
        ys = tuple(float(v) + float(si) for v, si in zip(y_star, s))
        sh = tuple(float(si) for si in s)
        rhs = float(rhs)
    bounds = [">=0"] * p
    cap = _round_cap(master)
    while True:
        if exact:
            rows = [([a + b for a, b in zip(y, sh)], ">=", rhs) for y in master.pool]
        else:
            rows = [([float(a) + b for a, b in zip(y, sh)], ">=", rhs) for y in master.pool]
        sol = _solve(rows, ys, bounds, exact)
        ans.lp_solves += 1
        ans.pivots += sol.pivots
        w = _as_weight(sol.variables, exact)
        if not any(w):
            raise LpError("target master returned a zero weight")
        r: WsResult = oracle(inst, w)
        ans.ws_calls += 1
        shifted = r.value + dot(w, sh)
        viol = shifted < rhs if exact else shifted < rhs - master.eps
        if not viol:
            break
        ans.discovered.append(r.point)
        if not master.add(r.point):
            log.warning("weighted-sum point already pooled yet violated; stopping row generation")
            break
        if ans.lp_solves > cap:
            raise IterationLimit(f"tsep master exceeded {cap} rounds")
    if r.point not in ans.discovered:
        ans.discovered.append(r.point)
    val = dot(ys, w)
    if (val < rhs) if exact else (val < rhs - master.eps):
        ans.status = "outside"
        if exact:
            ans.cut = unshift(Halfspace(w, rhs), s)
        else:
            ans.cut = (w, rhs - dot(w, sh))
    return ans


def separate(y_star, master: MasterLP, inst, oracle=ws_solve) -> OracleAnswer:
    if master.kind == "sep":
        return sep_point(y_star, master, inst, oracle)
    return tsep_point(y_star, master, inst, oracle)
