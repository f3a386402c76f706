"""Outer approximation of the upper image of multiobjective mixed-integer
linear programs, using only weighted-sum oracle calls."""
from .driver import RunConfig, RunResult, run
from .io import generate_instance, parse_instance, read_instance, write_result
from .oracles import AssignmentInstance, ExplicitSet, KnapsackInstance, ws_solve
from .polyhedron import Halfspace, OuterApprox, add_halfspaces, init_from_ideal

__version__ = "0.1.0"

__all__ = [
    "RunConfig", "RunResult", "run", "generate_instance", "parse_instance", "read_instance",
    "write_result", "AssignmentInstance", "ExplicitSet", "KnapsackInstance", "ws_solve",
    "Halfspace", "OuterApprox", "add_halfspaces", "init_from_ideal",
]
