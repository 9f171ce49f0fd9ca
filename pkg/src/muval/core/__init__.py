"""Configuration, file I/O and run orchestration."""

from .config import RunConfig, apply_overrides, load_config_file, parse_config_text
from .io import (
    append_iteration_jsonl,
    load_pfwcsp,
    load_program,
    write_iteration_log,
    write_pfwcsp,
    write_program,
    write_report,
)
from .parallel import run_sides_parallel
from .sequential import run_sides_sequential
from .side import SideJob, SideResult, run_side
from .solver import (
    bounded_solve,
    decide,
    muval_solve,
    pcsat_solve,
    reduce_both,
    solve_pfwcsp,
    solve_program,
)

__all__ = [
    # Configuration
    "RunConfig",
    "apply_overrides",
    "load_config_file",
    "parse_config_text",
    # Engines
    "SideJob",
    "SideResult",
    "run_side",
    "run_sides_parallel",
    "run_sides_sequential",
    # Solver
    "bounded_solve",
    "decide",
    "muval_solve",
    "pcsat_solve",
    "reduce_both",
    "solve_pfwcsp",
    "solve_program",
    # I/O
    "append_iteration_jsonl",
    "load_pfwcsp",
    "load_program",
    "write_iteration_log",
    "write_pfwcsp",
    "write_program",
    "write_report",
]
