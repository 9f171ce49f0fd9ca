"""Counterexample-guided solving of pfwCSP problems."""

from .loop import Sat, SolveResult, SolverOptions, StopSignal, Unknown, Unsat, solve
from .resolution import match_atom, resolution_closure
from .store import ExampleStore
from .synthesis import Synthesized, synthesize
from .unsat import UnsatCheck, check_examples_unsat, enumerate_simple_cycles
from .validation import ValidationResult, validate
from .wfcheck import find_cycle, relation_matrix

__all__ = [
    # Loop
    "Sat",
    "SolveResult",
    "SolverOptions",
    "StopSignal",
    "Unknown",
    "Unsat",
    "solve",
    # Phases
    "ExampleStore",
    "Synthesized",
    "UnsatCheck",
    "ValidationResult",
    "check_examples_unsat",
    "enumerate_simple_cycles",
    "match_atom",
    "resolution_closure",
    "synthesize",
    "validate",
    # Well-foundedness spot check
    "find_cycle",
    "relation_matrix",
]
