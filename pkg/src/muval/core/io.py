"""I/O operations for problems, iteration logs and reports."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from ..logic.ast import Program
from ..logic.parser import parse_muclp
from ..logic.printer import format_program
from ..pcsp.model import PfwCsp
from ..pcsp.smtlib import format_pfwcsp, parse_pfwcsp
from ..schema import FinalReport, IterationRecord


def _read(path: Path) -> str:
    with path.open("r", encoding="utf-8") as f:
        return f.read()


def load_program(path: Path) -> Program:
    """Load a MuCLP program.

    Args:
        path: Path to a ``.muclp`` file.

    Returns:
        The parsed, sort-checked program.

    Raises:
        ParseError: On syntax errors.
        SortError: On ill-sorted input.
    """
    return parse_muclp(_read(Path(path)))


def load_pfwcsp(path: Path) -> PfwCsp:
    """Load a pfwCSP problem in the SMT-LIB2 based clause format."""
    return parse_pfwcsp(_read(Path(path)))


def _write(text: str, output_path: Path) -> None:
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with output_path.open("w", encoding="utf-8") as f:
        f.write(text)


def write_program(program: Program, output_path: Path) -> None:
    _write(format_program(program), output_path)


def write_pfwcsp(problem: PfwCsp, output_path: Path) -> None:
    _write(format_pfwcsp(problem), output_path)


def append_iteration_jsonl(record: IterationRecord, output_path: Path) -> None:
    """Append a single iteration record to a JSONL file.

    Args:
        record: Record to append.
        output_path: Path to the JSONL log.
    """
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)

    with output_path.open("a", encoding="utf-8") as f:
        record_dict = record.model_dump(exclude_none=True)
        f.write(json.dumps(record_dict, ensure_ascii=False) + "\n")


def write_iteration_log(records: Iterable[IterationRecord], output_path: Path) -> None:
    """Write iteration records to a JSONL file, replacing its contents."""
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)

    with output_path.open("w", encoding="utf-8") as f:
        for record in records:
            record_dict = record.model_dump(exclude_none=True)
            f.write(json.dumps(record_dict, ensure_ascii=False) + "\n")


def write_report(report: FinalReport, output_path: Path) -> None:
    _write(report.model_dump_json(indent=2), output_path)
