"""Brute-force reference for small instances.

Enumerates ``Q`` outright and builds the upper image ``conv(Q) + R^p_>=``
from every ``p``-subset of candidate generators. Nothing here touches the
solver modules; floats are only used to discard hopeless candidates before
every surviving facet is recomputed and checked in integer arithmetic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np
from scipy.optimize import linprog

from ..oracles import AssignmentInstance, ExplicitSet, KnapsackInstance


class TooLarge(Exception):
    pass


MAX_ASSIGNMENT_N = 8
MAX_KNAPSACK_N = 20
MAX_POINTS = 5000
MAX_DIM = 5


@dataclass(frozen=True)
class BruteHull:
    extreme_points: frozenset  # tuples of Fraction
    facets: frozenset  # (w tuple of int, alpha int), coprime


def brute_force_Q(inst) -> list[tuple]:
    """Every point of ``Q`` (deduplicated, sorted), as tuples of ints."""
    if isinstance(inst, ExplicitSet):
        return sorted(set(inst.points))
    if isinstance(inst, AssignmentInstance):
        if inst.n > MAX_ASSIGNMENT_N:
            raise TooLarge(f"assignment with n={inst.n} > {MAX_ASSIGNMENT_N}")
        pts = set()
        for perm in itertools.permutations(range(inst.n)):
            pts.add(tuple(sum(mat[i][perm[i]] for i in range(inst.n)) for mat in inst.costs))
        return sorted(pts)
    if isinstance(inst, KnapsackInstance):
        n = inst.n
        if n > MAX_KNAPSACK_N:
            raise TooLarge(f"knapsack with n={n} > {MAX_KNAPSACK_N}")
        if inst.capacity < 0:
            return []
        masks = np.arange(1 << n, dtype=np.int64)
        bits = ((masks[:, None] >> np.arange(n)) & 1).astype(np.int64)
        feasible = bits @ np.array(inst.weights, dtype=np.int64) <= inst.capacity
        prof = -(bits[feasible] @ np.array(inst.profits, dtype=np.int64).T)
        return sorted(set(map(tuple, prof.tolist())))
    raise TypeError(f"unknown instance type {type(inst).__name__}")


def nondominated(points) -> list[tuple]:
    arr = np.asarray(points, dtype=np.int64)
    keep = []
    for i in range(len(arr)):
        le = np.all(arr <= arr[i], axis=1)
        lt = np.any(arr < arr[i], axis=1)
        if not np.any(le & lt):
            keep.append(tuple(int(v) for v in arr[i]))
    return sorted(set(keep))


def _maybe_extreme(nd: list[tuple]) -> list[tuple]:
    """Drop points that are convex combinations of the others plus a
    nonnegative direction (floating LP; rechecked exactly later)."""
    if len(nd) <= 2:
        return list(nd)
    arr = np.asarray(nd, dtype=float)
    out = []
    for i in range(len(arr)):
        others = np.delete(arr, i, axis=0)
        m = len(others)
        res = linprog(
            np.zeros(m),
            A_ub=others.T, b_ub=arr[i],
            A_eq=np.ones((1, m)), b_eq=[1.0],
            bounds=[(0, None)] * m, method="highs",
        )
        if res.status != 0:
            out.append(nd[i])
    return out


def _int_det(m: list[list[int]]) -> int:
    """Fraction-free (Bareiss) determinant."""
    a = [row[:] for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _exact_normal(rows: list[list[int]]) -> list[int]:
    """Generalised cross product of ``p`` vectors in ``Z^(p+1)``."""
    d = len(rows[0])
    out = []
    for j in range(d):
        minor = [[r[c] for c in range(d) if c != j] for r in rows]
        out.append((-1) ** j * _int_det(minor))
    return out


def _coprime(v: list[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def _facets_from(cands: list[tuple], p: int) -> set:
    gens = [(1,) + tuple(c) for c in cands] + [(0,) + tuple(int(i == j) for j in range(p)) for i in range(p)]
    G = np.asarray(gens, dtype=float)
    scale = max(1.0, float(np.abs(G).max()))
    facets = set()
    combos = np.array(list(itertools.combinations(range(len(gens)), p)), dtype=np.int64)
    if len(combos) == 0:
        return facets
    chunk = 20000
    for start in range(0, len(combos), chunk):
        idx = combos[start:start + chunk]
        idx = idx[idx[:, 0] < len(cands)]  # at least one point
        if len(idx) == 0:
            continue
        A = G[idx]  # (M, p, p+1)
        normals = np.empty((len(idx), p + 1))
        for j in range(p + 1):
            normals[:, j] = (-1) ** j * np.linalg.det(np.delete(A, j, axis=2))
        norm = np.abs(normals).max(axis=1)
        ok = norm > 0.5
        normals[ok] /= norm[ok, None]
        vals = normals @ G.T
        tol = 1e-7 * scale
        pos = np.all(vals >= -tol, axis=1) & ok
        neg = np.all(vals <= tol, axis=1) & ok
        for r in np.nonzero(pos | neg)[0]:
            nrm = _exact_normal([list(gens[k]) for k in idx[r]])
            if not any(nrm[1:]):
                continue
            side = [sum(a * b for a, b in zip(nrm, g)) for g in gens]
            if all(v <= 0 for v in side):
                nrm = [-x for x in nrm]
            elif not all(v >= 0 for v in side):
                continue
            # normal (beta, w): beta + w.y >= 0, i.e. w.y >= -beta
            facets.add(_coprime(nrm[1:] + [-nrm[0]]))
    return facets


def _rank(rows) -> int:
    m = [[Fraction(v) for v in r] for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def brute_force_hull(points) -> BruteHull:
    pts = sorted(set(tuple(int(v) for v in y) for y in points))
    if not pts:
        raise ValueError("empty point set")
    if len(pts) > MAX_POINTS:
        raise TooLarge(f"{len(pts)} points > {MAX_POINTS}")
    p = len(pts[0])
    if p > MAX_DIM:
        raise TooLarge(f"dimension {p} > {MAX_DIM}")
    nd = nondominated(pts)
    cands = _maybe_extreme(nd)
    while True:
        facets = _facets_from(cands, p)
        missed = [y for y in nd if y not in cands
                  and any(sum(a * b for a, b in zip(f[:-1], y)) < f[-1] for f in facets)]
        if not missed:
            break
        cands = sorted(set(cands) | set(missed))
    extreme = set()
    for y in cands:
        tight = [f[:-1] for f in facets if sum(a * b for a, b in zip(f[:-1], y)) == f[-1]]
        if len(tight) >= p and _rank(tight) == p:
            extreme.add(tuple(Fraction(v) for v in y))
    return BruteHull(frozenset(extreme), frozenset((tuple(f[:-1]), f[-1]) for f in facets))


def hull_of_instance(inst) -> BruteHull:
    return brute_force_hull(brute_force_Q(inst))
