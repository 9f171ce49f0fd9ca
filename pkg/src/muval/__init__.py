"""muval: validity checking for fixpoint logic programs.

A MuCLP program (nested least and greatest fixpoint predicate definitions
plus a query) is reduced to a pfwCSP clause problem, which is then solved
by counterexample-guided template synthesis against an SMT solver. The
De Morgan dual is solved alongside so that either side can decide.
"""

from importlib import metadata

from .core import (
    RunConfig,
    load_config_file,
    load_pfwcsp,
    load_program,
    muval_solve,
    pcsat_solve,
    solve_pfwcsp,
    solve_program,
)
from .errors import MuvalError
from .logic import Program, bounded_evaluate, demorgan_dual, parse_muclp
from .pcsp import CandidateSolution, PfwCsp, classify, parse_pfwcsp
from .reduction import reduce_program, reduce_with_trace
from .schema import FinalReport, IterationRecord, RunStats

try:
    __version__ = metadata.version("muval")
except metadata.PackageNotFoundError:  # pragma: no cover - fallback for dev installs
    __version__ = "0.0.0"

__all__ = [
    "__version__",
    # Configuration
    "RunConfig",
    "load_config_file",
    # Solving
    "muval_solve",
    "pcsat_solve",
    "solve_pfwcsp",
    "solve_program",
    # Logic
    "Program",
    "bounded_evaluate",
    "demorgan_dual",
    "parse_muclp",
    # pfwCSP
    "CandidateSolution",
    "PfwCsp",
    "classify",
    "parse_pfwcsp",
    "reduce_program",
    "reduce_with_trace",
    # I/O
    "load_pfwcsp",
    "load_program",
    # Schema
    "FinalReport",
    "IterationRecord",
    "RunStats",
    # Errors
    "MuvalError",
]
