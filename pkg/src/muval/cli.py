"""Command-line interface for muval and pcsat."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, NoReturn, Optional, Sequence, Tuple

from . import __version__
from .core import (
    RunConfig,
    bounded_solve,
    load_config_file,
    muval_solve,
    pcsat_solve,
    write_program,
    write_report,
)
from .encoders import (
    Implication,
    Pairs,
    bisim_params,
    check_bisimulation,
    check_buchi,
    encode_bisimulation,
    encode_buchi,
    encode_ltl_game,
    encode_reachability_game,
    encode_safety_game,
    load_buchi,
    load_game,
    load_lts,
    solve_game,
)
from .errors import MuvalError
from .logic import Program, Verdict, bounded_evaluate, parse_formula
from .schema import FinalReport

EXIT_CODES: Dict[str, int] = {
    "valid": 0,
    "sat": 0,
    "invalid": 1,
    "unsat": 1,
    "unknown": 2,
    "timeout": 2,
}
EXIT_USAGE = 3

ENCODINGS = ("buchi", "safety-game", "reach-game", "ltl-game", "bisim")


class _Parser(argparse.ArgumentParser):
    """Reports usage errors with exit code 3."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        print(f"Error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("file", type=Path, help="Input file")
    parser.add_argument(
        "--timeout",
        type=float,
        default=None,
        help="Wall-clock budget in seconds (default: 300)",
    )
    parser.add_argument(
        "--max-iterations",
        type=int,
        default=None,
        help="CEGIS iteration budget (default: 200)",
    )
    parser.add_argument(
        "--smt-solver",
        default=None,
        help="SMT solver executable speaking SMT-LIB2 on stdin (default: z3)",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="Random seed for deterministic runs",
    )
    parser.add_argument(
        "--log",
        type=Path,
        default=None,
        help="Write one JSON record per CEGIS iteration to this file",
    )
    parser.add_argument(
        "--report",
        type=Path,
        default=None,
        help="Write the final report as JSON to this file",
    )
    parser.add_argument(
        "--config",
        type=Path,
        default=None,
        help="key = value configuration file; flags override it",
    )
    parser.add_argument(
        "--progress",
        action="store_true",
        help="Show progress bars",
    )
    parser.add_argument(
        "--debug",
        action="store_true",
        help="Re-check every unsat core returned by the SMT solver",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Log INFO (-v) or DEBUG (-vv) messages",
    )


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser for ``muval``.

    Returns:
        Configured ArgumentParser.
    """
    parser = _Parser(
        prog="muval",
        description="muval - validity checking for fixpoint logic programs",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # Version command
    subparsers.add_parser("version", help="Show package version")

    # Solve command
    solve_parser = subparsers.add_parser(
        "solve",
        help="Decide the validity of a MuCLP program",
    )
    _add_run_options(solve_parser)
    solve_parser.add_argument(
        "--no-dual",
        action="store_true",
        help="Solve primal and dual one after another in this process",
    )
    solve_parser.add_argument(
        "--emit-pcsp",
        type=Path,
        default=None,
        help="Write the reduced primal pfwCSP to this file",
    )
    solve_parser.add_argument(
        "--suppress-flags",
        action="store_true",
        help="Drop Boolean flags that are true at every call site",
    )
    solve_parser.add_argument(
        "--bounded",
        type=int,
        default=None,
        metavar="N",
        help="Evaluate over [-N, N] instead of running CEGIS",
    )

    # Encode command
    encode_parser = subparsers.add_parser(
        "encode",
        help="Encode a verification problem as a MuCLP program",
    )
    encode_parser.add_argument("kind", choices=ENCODINGS, help="Problem kind")
    encode_parser.add_argument(
        "inputs",
        type=Path,
        nargs="+",
        help="buchi: LTS BUCHI; games: GAME; bisim: LTS LTS",
    )
    encode_parser.add_argument(
        "-o",
        "--out",
        type=Path,
        required=True,
        help="Output .muclp file",
    )
    encode_parser.add_argument(
        "--check",
        type=int,
        default=None,
        metavar="BOUND",
        help="Compare the encoding with the explicit-state answer on [-BOUND, BOUND]",
    )
    bisim_query = encode_parser.add_mutually_exclusive_group()
    bisim_query.add_argument(
        "--pair",
        nargs="+",
        action="append",
        default=None,
        metavar="V",
        help="bisim: left then right state values of a pair to relate",
    )
    bisim_query.add_argument(
        "--lower",
        default=None,
        metavar="FORMULA",
        help="bisim: formula that implies bisimilarity",
    )
    bisim_query.add_argument(
        "--upper",
        default=None,
        metavar="FORMULA",
        help="bisim: formula implied by bisimilarity",
    )
    encode_parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Log INFO (-v) or DEBUG (-vv) messages",
    )

    return parser


def create_pcsat_parser() -> argparse.ArgumentParser:
    """Create the argument parser for ``pcsat``."""
    parser = _Parser(
        prog="pcsat",
        description="pcsat - satisfiability of pfwCSP clause problems",
    )
    _add_run_options(parser)
    parser.add_argument(
        "--negate-cochc",
        action="store_true",
        help="Solve coCHC problems through their negated CHC problem",
    )
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )


def _fail(message: str, code: int = EXIT_USAGE) -> NoReturn:
    print(f"Error: {message}", file=sys.stderr)
    sys.exit(code)


def build_config(args: argparse.Namespace) -> RunConfig:
    """Layer flags over the configuration file over the defaults.

    Raises:
        ConfigError: On a bad configuration file or budget.
    """
    cfg = load_config_file(args.config) if args.config else RunConfig()
    flags: Dict[str, Any] = {
        "timeout": args.timeout,
        "max_iterations": args.max_iterations,
        "smt_solver": args.smt_solver,
        "seed": args.seed,
        "log_path": args.log,
    }
    updates = {key: value for key, value in flags.items() if value is not None}
    if args.progress:
        updates["progress"] = True
    if getattr(args, "debug", False):
        updates["verify_cores"] = True
    if getattr(args, "no_dual", False):
        updates["parallel_dual"] = False
    if getattr(args, "suppress_flags", False):
        updates["suppress_flags"] = True
    if getattr(args, "negate_cochc", False):
        updates["negate_cochc"] = True
    cfg = dataclasses.replace(cfg, **updates)
    cfg.validate()
    return cfg


def print_report(report: FinalReport, with_verdict: bool = True) -> None:
    if with_verdict or not report.certificate:
        print(report.verdict)
    if report.certificate:
        print(report.certificate)
    if report.reason:
        print(f"; {report.reason}")


def _finish(
    report: FinalReport, args: argparse.Namespace, with_verdict: bool
) -> NoReturn:
    print_report(report, with_verdict)
    if args.report is not None:
        write_report(report, args.report)
    sys.exit(EXIT_CODES[report.verdict])


def cmd_version() -> None:
    """Show package version."""
    print(__version__)


def cmd_solve(args: argparse.Namespace) -> None:
    """Decide a ``.muclp`` file and exit with its verdict code.

    Args:
        args: Parsed command-line arguments.
    """
    if not args.file.exists():
        _fail(f"Input file not found: {args.file}")
    if args.bounded is not None:
        if args.bounded < 0:
            _fail("--bounded must not be negative")
        try:
            verdict = bounded_solve(args.file, args.bounded, args.timeout)
        except ValueError as e:
            _fail(str(e))
        except MuvalError as e:
            _fail(str(e), 2)
        print(verdict.value)
        sys.exit({Verdict.VALID: 0, Verdict.INVALID: 1}.get(verdict, 2))

    try:
        cfg = build_config(args)
        report = muval_solve(args.file, cfg, args.emit_pcsp)
    except ValueError as e:
        _fail(str(e))
    except MuvalError as e:
        print(f"Internal error: {e}", file=sys.stderr)
        sys.exit(2)
    _finish(report, args, with_verdict=True)


def _parse_value(text: str) -> Any:
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return int(text)
    except ValueError:
        _fail(f"not an integer or Boolean state value: {text}")


def _bisim_query(args: argparse.Namespace, lts1, lts2):
    x1, x2 = bisim_params(lts1, lts2)
    if args.pair:
        pairs: List[Tuple[tuple, tuple]] = []
        for values in args.pair:
            parsed = tuple(_parse_value(v) for v in values)
            if len(parsed) != len(x1) + len(x2):
                _fail(f"--pair needs {len(x1) + len(x2)} values, got {len(parsed)}")
            pairs.append((parsed[: len(x1)], parsed[len(x1) :]))
        return Pairs(tuple(pairs))
    text = args.lower if args.lower is not None else args.upper
    if text is None:
        _fail("bisim needs --pair, --lower or --upper")
    formula = parse_formula(text, dict(x1 + x2), preds={}, funs={})
    return Implication(formula, "lower" if args.lower is not None else "upper")


def build_encoding(
    kind: str, inputs: Sequence[Path], args: argparse.Namespace
) -> Tuple[Program, Callable[[int], bool]]:
    """Encode the inputs and return the program with its explicit-state oracle."""
    expected = {"buchi": 2, "bisim": 2}.get(kind, 1)
    if len(inputs) != expected:
        _fail(f"{kind} takes {expected} input file(s), got {len(inputs)}")
    if kind == "buchi":
        lts = load_lts(inputs[0])
        automaton = load_buchi(inputs[1], lts.labels)
        return encode_buchi(lts, automaton), lambda n: check_buchi(lts, automaton, n)
    if kind == "bisim":
        lts1, lts2 = load_lts(inputs[0]), load_lts(inputs[1])
        query = _bisim_query(args, lts1, lts2)
        program = encode_bisimulation(lts1, lts2, query)
        return program, lambda n: check_bisimulation(lts1, lts2, query, n)
    game = load_game(inputs[0])
    encoder = {
        "safety-game": encode_safety_game,
        "reach-game": encode_reachability_game,
        "ltl-game": encode_ltl_game,
    }[kind]
    return encoder(game), lambda n: solve_game(game, n)


def cmd_encode(args: argparse.Namespace) -> None:
    """Write the MuCLP encoding of a verification problem.

    Args:
        args: Parsed command-line arguments.
    """
    for path in args.inputs:
        if not path.exists():
            _fail(f"Input file not found: {path}")
    if args.kind != "bisim" and (args.pair or args.lower or args.upper):
        _fail("--pair, --lower and --upper only apply to bisim")
    try:
        program, oracle = build_encoding(args.kind, args.inputs, args)
        write_program(program, args.out)
        print(f"Wrote {len(program.equations)} equation(s) to {args.out}")
        if args.check is None:
            return
        expected = oracle(args.check)
        verdict = bounded_evaluate(program, args.check)
    except ValueError as e:
        _fail(str(e))
    except MuvalError as e:
        _fail(str(e), 2)
    print(f"explicit-state: {'valid' if expected else 'invalid'}")
    print(f"bounded evaluation: {verdict.value}")
    if verdict is not Verdict.OUT_OF_DOMAIN and (verdict is Verdict.VALID) != expected:
        _fail("encoding disagrees with the explicit-state answer", 2)


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Main entry point for the ``muval`` CLI."""
    parser = create_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        sys.exit(0)

    if args.command == "version":
        cmd_version()
        return
    configure_logging(args.verbose)
    if args.command == "solve":
        cmd_solve(args)
    elif args.command == "encode":
        cmd_encode(args)
    else:
        parser.print_help()
        sys.exit(EXIT_USAGE)


def pcsat_main(argv: Optional[Sequence[str]] = None) -> None:
    """Main entry point for the ``pcsat`` CLI."""
    args = create_pcsat_parser().parse_args(argv)
    configure_logging(args.verbose)
    if not args.file.exists():
        _fail(f"Input file not found: {args.file}")
    try:
        cfg = build_config(args)
        report = pcsat_solve(args.file, cfg)
    except ValueError as e:
        _fail(str(e))
    except MuvalError as e:
        print(f"Internal error: {e}", file=sys.stderr)
        sys.exit(2)
    _finish(report, args, with_verdict=False)


if __name__ == "__main__":
    main()
