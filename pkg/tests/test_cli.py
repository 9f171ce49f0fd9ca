"""Tests for CLI interface."""

from __future__ import annotations

import json
from pathlib import Path
from unittest.mock import MagicMock, patch

import pytest
from conftest import MU_OUTSIDE, NU_OUTSIDE, P_TERM

from muval.cli import (
    EXIT_CODES,
    EXIT_USAGE,
    cmd_version,
    create_parser,
    create_pcsat_parser,
    main,
    pcsat_main,
)
from muval.logic import parse_muclp
from muval.schema import FinalReport

LOOP_LTS = """\
vars s: int;
trans a: s = 0 /\\ s' = 1 \\/ s = 1 /\\ s' = 0;
trans b: s = 2 /\\ s' = 2;
init: s = 0;
"""

SELF_LOOP_LTS = """\
vars s: int;
labels a, b;
trans a: s = 0 /\\ s' = 0;
"""

INFINITELY_OFTEN_A = """\
states q0, q1;
initial q0;
final q0;
q0 -a-> q0;
q1 -a-> q0;
q0 -*-> q1;
q1 -*-> q1;
"""


def _write(tmp_path: Path, name: str, text: str) -> Path:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def _exit_code(argv, entry=main) -> int:
    with pytest.raises(SystemExit) as exc_info:
        entry(argv)
    return exc_info.value.code


def test_create_parser() -> None:
    """Test that argument parser is created correctly."""
    parser = create_parser()
    assert parser.prog == "muval"

    args = parser.parse_args(["version"])
    assert args.command == "version"

    args = parser.parse_args(["solve", "prog.muclp"])
    assert args.command == "solve"
    assert args.file == Path("prog.muclp")
    assert args.bounded is None
    assert args.no_dual is False
    assert args.timeout is None

    args = parser.parse_args(["encode", "bisim", "a.lts", "b.lts", "-o", "out.muclp"])
    assert args.kind == "bisim"
    assert args.inputs == [Path("a.lts"), Path("b.lts")]


def test_create_pcsat_parser() -> None:
    """Test the pcsat argument parser."""
    args = create_pcsat_parser().parse_args(["problem.smt2", "--negate-cochc", "-vv"])
    assert args.file == Path("problem.smt2")
    assert args.negate_cochc is True
    assert args.verbose == 2


def test_cmd_version(capsys: pytest.CaptureFixture) -> None:
    """Test version command output."""
    cmd_version()
    captured = capsys.readouterr()
    assert captured.out.strip()


def test_main_without_command(capsys: pytest.CaptureFixture) -> None:
    """Test that a bare invocation prints help and succeeds."""
    assert _exit_code([]) == 0
    assert "solve" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [["solve"], ["frobnicate"], ["solve", "x.muclp", "--timeout", "soon"]],
)
def test_usage_errors(argv, capsys: pytest.CaptureFixture) -> None:
    """Test that usage errors exit with the usage code."""
    assert _exit_code(argv) == EXIT_USAGE
    assert "Error:" in capsys.readouterr().err


def test_solve_missing_file(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    """Test solve command fails when the input file doesn't exist."""
    assert _exit_code(["solve", str(tmp_path / "absent.muclp")]) == EXIT_USAGE
    assert "Input file not found" in capsys.readouterr().err


@pytest.mark.parametrize(
    "text,bound,verdict,code",
    [
        (NU_OUTSIDE, "0", "valid", 0),
        (MU_OUTSIDE, "0", "invalid", 1),
        (P_TERM, "2", "out-of-domain", 2),
    ],
)
def test_solve_bounded(
    text: str,
    bound: str,
    verdict: str,
    code: int,
    tmp_path: Path,
    capsys: pytest.CaptureFixture,
) -> None:
    """Test the bounded reference evaluation and its exit codes."""
    path = _write(tmp_path, "prog.muclp", text)
    assert _exit_code(["solve", str(path), "--bounded", bound]) == code
    assert capsys.readouterr().out.strip() == verdict


def test_solve_bounded_negative(tmp_path: Path) -> None:
    """Test that a negative bound is a usage error."""
    path = _write(tmp_path, "prog.muclp", NU_OUTSIDE)
    assert _exit_code(["solve", str(path), "--bounded=-1"]) == EXIT_USAGE


def test_solve_parse_error(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    """Test that malformed programs are reported as usage errors."""
    path = _write(tmp_path, "bad.muclp", "query X(;\n")
    with patch("muval.core.config.shutil.which", return_value="/usr/bin/z3"):
        assert _exit_code(["solve", str(path)]) == EXIT_USAGE
    assert "Error:" in capsys.readouterr().err


@patch("muval.core.config.shutil.which", return_value=None)
def test_solve_missing_solver(
    mock_which: MagicMock, tmp_path: Path, capsys: pytest.CaptureFixture
) -> None:
    """Test that a missing SMT solver is reported before solving."""
    path = _write(tmp_path, "prog.muclp", NU_OUTSIDE)
    assert _exit_code(["solve", str(path), "--smt-solver", "cvc-none"]) == EXIT_USAGE
    assert "cvc-none" in capsys.readouterr().err


@pytest.mark.parametrize("verdict", sorted(EXIT_CODES))
@patch("muval.core.config.shutil.which", return_value="/usr/bin/z3")
@patch("muval.cli.muval_solve")
def test_solve_exit_codes(
    mock_solve: MagicMock,
    mock_which: MagicMock,
    verdict: str,
    tmp_path: Path,
    capsys: pytest.CaptureFixture,
) -> None:
    """Test that each verdict maps to its exit code."""
    mock_solve.return_value = FinalReport(verdict=verdict, reason="budget")
    path = _write(tmp_path, "prog.muclp", NU_OUTSIDE)
    assert _exit_code(["solve", str(path)]) == EXIT_CODES[verdict]
    out = capsys.readouterr().out
    assert out.splitlines()[0] == verdict
    assert "; budget" in out


@patch("muval.core.config.shutil.which", return_value="/usr/bin/z3")
@patch("muval.cli.muval_solve")
def test_solve_passes_flags_and_writes_report(
    mock_solve: MagicMock, mock_which: MagicMock, tmp_path: Path
) -> None:
    """Test that flags reach the configuration and the report is written."""
    mock_solve.return_value = FinalReport(
        verdict="invalid", side="dual", certificate="sat\n(model\n)\n"
    )
    path = _write(tmp_path, "prog.muclp", NU_OUTSIDE)
    conf = _write(tmp_path, "muval.conf", "timeout = 40\nmax_iterations = 5\n")
    report = tmp_path / "out" / "report.json"
    code = _exit_code(
        [
            "solve",
            str(path),
            "--config",
            str(conf),
            "--max-iterations",
            "9",
            "--no-dual",
            "--suppress-flags",
            "--seed",
            "1",
            "--debug",
            "--report",
            str(report),
        ]
    )
    assert code == 1
    cfg = mock_solve.call_args.args[1]
    assert cfg.timeout == 40.0
    assert cfg.max_iterations == 9
    assert cfg.parallel_dual is False
    assert cfg.suppress_flags is True
    assert cfg.seed == 1
    assert cfg.verify_cores is True
    assert cfg.smt_backend().verify_cores is True
    data = json.loads(report.read_text(encoding="utf-8"))
    assert data["verdict"] == "invalid"
    assert data["side"] == "dual"


@patch("muval.core.config.shutil.which", return_value="/usr/bin/z3")
@patch("muval.cli.pcsat_solve")
def test_pcsat_prints_certificate(
    mock_solve: MagicMock,
    mock_which: MagicMock,
    tmp_path: Path,
    capsys: pytest.CaptureFixture,
    nested_pcsp_text: str,
) -> None:
    """Test that pcsat prints the certificate, which starts with the answer."""
    mock_solve.return_value = FinalReport(verdict="sat", certificate="sat\n(model\n)")
    path = _write(tmp_path, "nested.smt2", nested_pcsp_text)
    assert _exit_code([str(path), "--negate-cochc"], pcsat_main) == 0
    assert capsys.readouterr().out == "sat\n(model\n)\n"
    assert mock_solve.call_args.args[1].negate_cochc is True


def test_pcsat_missing_file(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    """Test pcsat fails when the input file doesn't exist."""
    assert _exit_code([str(tmp_path / "absent.smt2")], pcsat_main) == EXIT_USAGE
    assert "Input file not found" in capsys.readouterr().err


def test_encode_buchi_with_check(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    """Test encoding a Büchi problem and cross-checking it."""
    lts = _write(tmp_path, "loop.lts", LOOP_LTS)
    automaton = _write(tmp_path, "often_a.buchi", INFINITELY_OFTEN_A)
    out = tmp_path / "often_a.muclp"
    main(["encode", "buchi", str(lts), str(automaton), "-o", str(out), "--check", "2"])
    captured = capsys.readouterr().out
    assert "explicit-state: valid" in captured
    assert "bounded evaluation: valid" in captured
    program = parse_muclp(out.read_text(encoding="utf-8"))
    assert len(program.equations) == 2


def test_encode_bisim_pair(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    """Test a ground bisimilarity query from the command line."""
    left = _write(tmp_path, "loop.lts", LOOP_LTS)
    right = _write(tmp_path, "self.lts", SELF_LOOP_LTS)
    out = tmp_path / "bisim.muclp"
    argv = ["encode", "bisim", str(left), str(right), "-o", str(out)]
    main(argv + ["--pair", "0", "0", "--check", "1"])
    captured = capsys.readouterr().out
    assert "explicit-state: valid" in captured
    assert "bounded evaluation: valid" in captured


@pytest.mark.parametrize(
    "extra",
    [
        ["--pair", "0"],
        ["--pair", "0", "maybe"],
        [],
    ],
)
def test_encode_bisim_bad_query(tmp_path: Path, extra) -> None:
    """Test malformed bisimilarity queries."""
    left = _write(tmp_path, "loop.lts", LOOP_LTS)
    right = _write(tmp_path, "self.lts", SELF_LOOP_LTS)
    argv = ["encode", "bisim", str(left), str(right), "-o", str(tmp_path / "o.muclp")]
    assert _exit_code(argv + extra) == EXIT_USAGE


def test_encode_rejects_misplaced_options(tmp_path: Path) -> None:
    """Test that bisimilarity options are refused for other encodings."""
    lts = _write(tmp_path, "loop.lts", LOOP_LTS)
    automaton = _write(tmp_path, "often_a.buchi", INFINITELY_OFTEN_A)
    out = str(tmp_path / "o.muclp")
    argv = ["encode", "buchi", str(lts), str(automaton), "-o", out]
    assert _exit_code(argv + ["--lower", "s1 = s2"]) == EXIT_USAGE


def test_encode_wrong_input_count(
    tmp_path: Path, capsys: pytest.CaptureFixture
) -> None:
    """Test that each encoding checks its number of inputs."""
    lts = _write(tmp_path, "loop.lts", LOOP_LTS)
    out = str(tmp_path / "o.muclp")
    assert _exit_code(["encode", "buchi", str(lts), "-o", out]) == EXIT_USAGE
    assert "takes 2 input file(s)" in capsys.readouterr().err
