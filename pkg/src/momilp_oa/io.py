"""Instance and result files, plus the random instance generators.

Instance files are whitespace-separated tokens::

    map p n            # then p blocks of n x n integer cost matrices
    mkp p n            # then capacity, n weights, p rows of n profits
    pts p n            # then n rows of p integer coordinates

Result files are ``key: value`` header lines followed by ``point`` and
``facet`` rows; coordinates are exact rationals written as ``num/den``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .oracles import AssignmentInstance, ExplicitSet, KnapsackInstance
from .polyhedron import Halfspace
from .rational import Q, fmt, integer_form


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)
        self.line = line
        self.col = col


class ValidationError(ValueError):
    pass


KINDS = ("map", "mkp", "pts")


def _tokens(text: str):
    for ln, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0]
        col = 0
        for tok in body.split():
            col = body.index(tok, col) + 1
            yield tok, ln, col
            col += len(tok) - 1


class _Reader:
    def __init__(self, text):
        self.it = _tokens(text)
        self.last = (None, 1, 1)

    def next(self, what="token"):
        try:
            self.last = next(self.it)
        except StopIteration:
            raise ParseError(f"unexpected end of input, expected {what}", self.last[1], self.last[2])
        return self.last

    def int(self, what="integer") -> int:
        tok, ln, col = self.next(what)
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected {what}, got {tok!r}", ln, col) from None

    def done(self):
        try:
            tok, ln, col = next(self.it)
        except StopIteration:
            return
        raise ParseError(f"trailing token {tok!r}", ln, col)


def parse_instance(data) -> object:
    text = data.decode() if isinstance(data, (bytes, bytearray)) else str(data)
    r = _Reader(text)
    kind, ln, col = r.next("instance kind")
    kind = kind.lower()
    if kind not in KINDS:
        raise ParseError(f"unknown instance kind {kind!r}, expected one of {KINDS}", ln, col)
    p = r.int("objective count p")
    n = r.int("size n")
    if p < 1 or n < 0:
        raise ValidationError(f"need p >= 1 and n >= 0, got p={p}, n={n}")
    if kind == "map":
        costs = [[[r.int("cost") for _ in range(n)] for _ in range(n)] for _ in range(p)]
        r.done()
        if n < 1:
            raise ValidationError("assignment instance needs n >= 1")
        return AssignmentInstance(costs)
    if kind == "mkp":
        cap = r.int("capacity")
        weights = [r.int("item weight") for _ in range(n)]
        profits = [[r.int("profit") for _ in range(n)] for _ in range(p)]
        r.done()
        if any(w <= 0 for w in weights):
            raise ValidationError("item weights must be positive")
        if any(v <= 0 for row in profits for v in row):
            raise ValidationError("profits must be positive")
        if cap < 0:
            raise ValidationError("capacity must be nonnegative")
        return KnapsackInstance(profits, weights, cap)
    pts = [[r.int("coordinate") for _ in range(p)] for _ in range(n)]
    r.done()
    if n < 1:
        raise ValidationError("explicit point set must be nonempty")
    return ExplicitSet(pts)


def _row(xs) -> str:
    return " ".join(str(int(x)) for x in xs)


def serialize_instance(inst) -> bytes:
    out = [f"{inst.kind} {inst.p} {inst.n}"]
    if isinstance(inst, AssignmentInstance):
        for k, mat in enumerate(inst.costs):
            if k:
                out.append("")
            out.extend(_row(row) for row in mat)
    elif isinstance(inst, KnapsackInstance):
        out.append(str(inst.capacity))
        out.append(_row(inst.weights))
        out.extend(_row(row) for row in inst.profits)
    elif isinstance(inst, ExplicitSet):
        out.extend(_row(pt) for pt in inst.points)
    else:
        raise TypeError(f"unknown instance type {type(inst).__name__}")
    return ("\n".join(out) + "\n").encode()


def read_instance(path) -> object:
    return parse_instance(Path(path).read_bytes())


def write_instance(inst, path) -> None:
    Path(path).write_bytes(serialize_instance(inst))


def generate_instance(kind: str, p: int, n: int, seed: int):
    """Random instance: assignment costs uniform in [1, 20]; knapsack profits
    and weights uniform in [1, 1000] with capacity ceil(sum(weights) / 2)."""
    if p < 2 or n < 1:
        raise ValueError(f"need p >= 2 and n >= 1, got p={p}, n={n}")
    rng = np.random.default_rng(seed)
    kind = kind.lower()
    if kind == "map":
        return AssignmentInstance(rng.integers(1, 20, size=(p, n, n), endpoint=True).tolist())
    if kind == "mkp":
        profits = rng.integers(1, 1000, size=(p, n), endpoint=True).tolist()
        weights = rng.integers(1, 1000, size=n, endpoint=True).tolist()
        return KnapsackInstance(profits, weights, math.ceil(sum(weights) / 2))
    raise ValueError(f"cannot generate instances of kind {kind!r}")


# -- results -----------------------------------------------------------------

@dataclass
class ResultDoc:
    """Parsed form of a result file."""

    header: dict
    points: list
    facets: list
    snapshots: dict = field(default_factory=dict)

    @property
    def solved(self) -> bool:
        return self.header.get("solved") == "true"


def facet_key(h: Halfspace) -> tuple:
    w, a = integer_form(h.w, h.alpha)
    return w + (a,)


def write_result(result, p: Optional[int] = None) -> bytes:
    pts = sorted(tuple(Q(v) for v in y) for y in result.extreme_points)
    facets = sorted(facet_key(h) for h in result.facets)
    if p is None:
        p = len(pts[0]) if pts else (len(facets[0]) - 1 if facets else 0)
    st = result.stats
    lines = [
        f"solved: {'true' if result.solved else 'false'}",
        f"oracle: {result.oracle}",
        f"mode: {result.mode}",
        f"p: {p}",
        f"points: {len(pts)}",
        f"facets: {len(facets)}",
        f"ws_calls: {st.ws_calls}",
        f"cuts: {st.cuts}",
        f"sweeps: {st.sweeps}",
        f"seconds: {st.seconds:.3f}",
        f"snapshots: {len(result.snapshots)}",
    ]
    lines += ["point " + " ".join(fmt(v) for v in y) for y in pts]
    lines += ["facet " + " ".join(str(v) for v in f) for f in facets]
    for snap in result.snapshots:
        for f in sorted(facet_key(h) for h in snap.halfspaces):
            lines.append(f"snapshot {snap.iteration} " + " ".join(str(v) for v in f))
    return ("\n".join(lines) + "\n").encode()


def parse_result(data) -> ResultDoc:
    text = data.decode() if isinstance(data, (bytes, bytearray)) else str(data)
    header, points, facets, snaps = {}, [], [], {}
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "point":
            points.append(tuple(Q(t) for t in rest.split()))
        elif head == "facet":
            vals = tuple(int(t) for t in rest.split())
            facets.append(Halfspace(vals[:-1], vals[-1]))
        elif head == "snapshot":
            it, *vals = rest.split()
            vals = [int(t) for t in vals]
            snaps.setdefault(int(it), []).append(Halfspace(vals[:-1], vals[-1]))
        elif head.endswith(":"):
            header[head[:-1]] = rest.strip()
        else:
            raise ParseError(f"unrecognised result line {line!r}", ln, 1)
    return ResultDoc(header, points, facets, snaps)
