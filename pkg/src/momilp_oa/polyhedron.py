"""Outer approximations of the upper image in double description form.

An :class:`OuterApprox` is a polyhedron ``{y : w.y >= alpha for all stored
halfspaces}`` whose recession cone is always the nonnegative orthant, so the
generator side is the vertex list plus the fixed unit rays ``e_1..e_p``.
Cuts are intersected with the standard double-description update; all
arithmetic is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .rational import Q, dot, rank

Point = tuple


class EmptyPolyhedron(Exception):
    """Intersection with a batch of cuts left no point."""


@dataclass(frozen=True)
class Halfspace:
    """The set ``{y : w.y >= alpha}`` with a nonnegative, nonzero normal."""

    w: tuple
    alpha: object

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(Q(v) for v in self.w))
        object.__setattr__(self, "alpha", Q(self.alpha))

    @property
    def dim(self) -> int:
        return len(self.w)

    def value(self, y) -> object:
        """Slack ``w.y - alpha``; negative means ``y`` violates the halfspace."""
        return dot(self.w, y) - self.alpha

    def satisfied_by(self, y) -> bool:
        return self.value(y) >= 0

    def normalized(self) -> "Halfspace":
        s = sum(self.w)
        return Halfspace(tuple(v / s for v in self.w), self.alpha / s)

    def is_valid_normal(self) -> bool:
        return all(v >= 0 for v in self.w) and any(v != 0 for v in self.w)

    def __str__(self):
        terms = " + ".join(f"{v}*y{i + 1}" for i, v in enumerate(self.w) if v != 0)
        return f"{terms} >= {self.alpha}"


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _ray_masks(halfspaces: Sequence[Halfspace], p: int) -> list[int]:
    masks = []
    for i in range(p):
        m = 0
        for j, h in enumerate(halfspaces):
            if h.w[i] == 0:
                m |= 1 << j
        masks.append(m)
    return masks


def _vertex_mask(v, halfspaces: Sequence[Halfspace]) -> int:
    m = 0
    for j, h in enumerate(halfspaces):
        if dot(h.w, v) == h.alpha:
            m |= 1 << j
    return m


@dataclass(frozen=True)
class OuterApprox:
    """Double description of a polyhedron ``S`` with recession cone ``R^p_>=``.

    ``vertices`` is kept in lexicographic order. ``masks[k]`` is the bitset of
    halfspace indices tight at ``vertices[k]``.
    """

    dim: int
    vertices: tuple
    halfspaces: tuple
    masks: tuple = field(repr=False, compare=False, default=())

    @property
    def rays(self) -> tuple:
        p = self.dim
        return tuple(tuple(Q(int(i == j)) for j in range(p)) for i in range(p))

    def contains(self, y) -> bool:
        return contains(self, y)

    def tight_generators(self, h: Halfspace) -> tuple[list, list]:
        """Vertices and ray indices lying on the boundary of ``h``."""
        verts = [v for v in self.vertices if dot(h.w, v) == h.alpha]
        rays = [i for i in range(self.dim) if h.w[i] == 0]
        return verts, rays


def _build(p: int, verts: Iterable, halfspaces: Sequence[Halfspace]) -> OuterApprox:
    hs = tuple(halfspaces)
    vs = sorted(set(tuple(v) for v in verts))
    masks = tuple(_vertex_mask(v, hs) for v in vs)
    return OuterApprox(p, tuple(vs), hs, masks)


def init_from_ideal(ideal) -> OuterApprox:
    """The orthant ``ideal + R^p_>=`` as a double description."""
    y = tuple(Q(v) for v in ideal)
    p = len(y)
    if p == 0:
        raise ValueError("ideal point must have at least one coordinate")
    hs = [Halfspace(tuple(Q(int(i == k)) for k in range(p)), y[i]) for i in range(p)]
    return _build(p, [y], hs)


def vertices(S: OuterApprox) -> list:
    return list(S.vertices)


def contains(S: OuterApprox, y) -> bool:
    y = tuple(Q(v) for v in y)
    if len(y) != S.dim:
        raise ValueError(f"point has {len(y)} coordinates, expected {S.dim}")
    return all(dot(h.w, y) >= h.alpha for h in S.halfspaces)


def _intersect_one(p, verts, masks, hs, cut):
    """One double-description step. Returns new (verts, masks) or None if the
    cut removes no vertex."""
    vals = [dot(cut.w, v) - cut.alpha for v in verts]
    minus = [k for k, s in enumerate(vals) if s < 0]
    if not minus:
        return None
    bit = 1 << len(hs)
    ray_masks = _ray_masks(hs, p)
    need = p - 1

    keep_idx = [k for k, s in enumerate(vals) if s >= 0]
    plus = [k for k in keep_idx if vals[k] > 0]
    new_verts: dict = {}

    def adjacent(z, a, b, b_is_ray):
        # combinatorial test: no third generator is tight on every constraint
        # shared by the pair
        for k in range(len(verts)):
            if k == a or (not b_is_ray and k == b):
                continue
            if masks[k] & z == z:
                return False
        for i in range(p):
            if b_is_ray and i == b:
                continue
            if ray_masks[i] & z == z:
                return False
        return True

    for a in minus:
        va, sa, ma = verts[a], vals[a], masks[a]
        for b in plus:
            z = ma & masks[b]
            if _popcount(z) < need or not adjacent(z, a, b, False):
                continue
            vb, sb = verts[b], vals[b]
            t = sa / (sa - sb)
            pt = tuple(x + t * (yb - x) for x, yb in zip(va, vb))
            new_verts[pt] = z | bit
        for i in range(p):
            if cut.w[i] == 0:
                continue
            z = ma & ray_masks[i]
            if _popcount(z) < need or not adjacent(z, a, i, True):
                continue
            pt = list(va)
            pt[i] = pt[i] - sa / cut.w[i]
            new_verts[tuple(pt)] = z | bit

    out_v, out_m = [], []
    for k in keep_idx:
        out_v.append(verts[k])
        out_m.append(masks[k] | (bit if vals[k] == 0 else 0))
    for pt, m in new_verts.items():
        out_v.append(pt)
        out_m.append(m)
    return out_v, out_m


def _is_facet(p, hs_index, h, verts, masks) -> bool:
    bit = 1 << hs_index
    rows = [(1,) + tuple(v) for v, m in zip(verts, masks) if m & bit]
    rows += [(0,) + tuple(int(i == k) for k in range(p)) for i in range(p) if h.w[i] == 0]
    if len(rows) < p:
        return False
    return rank(rows) >= p


def add_halfspaces(S: OuterApprox, cuts: Iterable[Halfspace]) -> OuterApprox:
    """Intersect ``S`` with every cut and drop halfspaces that are no longer
    facets. Cuts that are positive multiples of stored halfspaces, or that
    remove no vertex, leave ``S`` unchanged."""
    p = S.dim
    verts = list(S.vertices)
    masks = list(S.masks)
    hs = list(S.halfspaces)
    seen = {h.normalized() for h in hs}
    changed = False
    for cut in cuts:
        if not isinstance(cut, Halfspace):
            cut = Halfspace(*cut)
        if cut.dim != p:
            raise ValueError(f"cut has dimension {cut.dim}, expected {p}")
        if not cut.is_valid_normal():
            raise ValueError(f"cut normal must be nonnegative and nonzero: {cut}")
        key = cut.normalized()
        if key in seen:
            continue
        step = _intersect_one(p, verts, masks, hs, cut)
        if step is None:
            continue
        verts, masks = step
        hs.append(cut)
        seen.add(key)
        changed = True
        if not verts:
            raise EmptyPolyhedron(f"no point left after cut {cut}")
    if not changed:
        return S
    keep = [j for j, h in enumerate(hs) if _is_facet(p, j, h, verts, masks)]
    hs = [hs[j] for j in keep]
    return _build(p, verts, hs)


def from_halfspaces(p: int, halfspaces: Sequence[Halfspace]) -> OuterApprox:
    """Build a double description from scratch: start at the componentwise
    lower bounds implied by the axis halfspaces and add the rest."""
    lo = [None] * p
    rest = []
    for h in halfspaces:
        nz = [i for i, v in enumerate(h.w) if v != 0]
        if len(nz) == 1:
            i = nz[0]
            b = h.alpha / h.w[i]
            lo[i] = b if lo[i] is None else max(lo[i], b)
        else:
            rest.append(h)
    if any(v is None for v in lo):
        raise ValueError("every coordinate needs an axis-parallel lower bound")
    return add_halfspaces(init_from_ideal(lo), rest)
