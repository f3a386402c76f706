from fractions import Fraction

import pytest

from momilp_oa.io import generate_instance
from momilp_oa.oracles import AssignmentInstance, ExplicitSet, KnapsackInstance

# 14-point biobjective example with 4 extreme points and 5 facets
SAMPLE_POINTS = [
    (2, 9), (3, 7), (4, 6), (4, 7), (5, 4), (5, 5), (5, 6),
    (6, 4), (6, 6), (7, 2), (7, 3), (7, 4), (7, 6), (8, 5),
]
SAMPLE_EXTREME = [(2, 9), (3, 7), (5, 4), (7, 2)]
SAMPLE_FACETS = {(1, 0, 2), (0, 1, 2), (2, 1, 13), (3, 2, 23), (1, 1, 9)}

ACCEPTANCE_LINES: list[str] = []


def acceptance_instances():
    """100 knapsack (n <= 12, p in {2,3,4}) and 50 assignment (n <= 4, p = 3)
    instances with fixed seeds."""
    out = []
    for i in range(100):
        p = (2, 3, 4)[i % 3]
        n = 6 + i % 7
        out.append((f"mkp-p{p}-n{n}-s{1000 + i}", generate_instance("mkp", p, n, 1000 + i)))
    for i in range(50):
        n = 2 + i % 3
        out.append((f"map-p3-n{n}-s{2000 + i}", generate_instance("map", 3, n, 2000 + i)))
    return out


def record(criterion: str, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {criterion}  {detail}".rstrip())
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def sample():
    return ExplicitSet(SAMPLE_POINTS)


@pytest.fixture
def sample_extreme_set():
    return ExplicitSet(SAMPLE_EXTREME)


@pytest.fixture
def small_map():
    return AssignmentInstance([[[1, 2], [2, 1]], [[2, 1], [1, 2]]])


@pytest.fixture
def small_mkp():
    return KnapsackInstance([[3, 1], [1, 3]], [1, 1], 1)


def frac_points(pts):
    return {tuple(Fraction(v) for v in y) for y in pts}
