"""One CEGIS run over one clause problem, as used by both run engines."""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, List, Literal, Optional

from tqdm import tqdm

from ..cegis import Sat, StopSignal, Unsat, solve
from ..pcsp.model import CandidateSolution, PfwCsp
from ..pcsp.ops import classify
from ..pcsp.smtlib import format_examples, format_solution
from ..schema import IterationRecord, RunStats, Side
from ..smt.backend import SmtBackend
from .config import RunConfig

logger = logging.getLogger(__name__)

Outcome = Literal["sat", "unsat", "unknown", "timeout"]


@dataclass
class SideJob:
    """A clause problem and the side of the validity question it stands for."""

    problem: PfwCsp
    side: Optional[Side] = None


@dataclass
class SideResult:
    """Picklable outcome of :func:`run_side`.

    Attributes:
        side: Which problem was solved (``None`` for plain pcsat runs).
        outcome: ``sat``, ``unsat``, ``unknown`` or ``timeout``.
        certificate: Printed solution or example set for definitive outcomes.
        solution: The solution itself on ``sat``.
        reason: Why the run gave up.
        stats: Counters of the run.
        records: One record per CEGIS iteration.
    """

    side: Optional[Side]
    outcome: Outcome
    certificate: Optional[str] = None
    solution: Optional[CandidateSolution] = None
    reason: Optional[str] = None
    stats: RunStats = field(default_factory=RunStats)
    records: List[IterationRecord] = field(default_factory=list)

    @property
    def definitive(self) -> bool:
        return self.outcome in ("sat", "unsat")

    @classmethod
    def gave_up(
        cls, side: Optional[Side], reason: str, timeout: bool = False
    ) -> "SideResult":
        return cls(side, "timeout" if timeout else "unknown", reason=reason)


def _kill_on_stop(
    stop: StopSignal, backend: SmtBackend, finished: threading.Event
) -> None:
    while not finished.is_set():
        if stop.is_set():
            backend.kill()
            return
        finished.wait(0.1)


def run_side(
    job: SideJob,
    cfg: RunConfig,
    stop: Optional[StopSignal] = None,
    on_record: Optional[Callable[[IterationRecord], None]] = None,
    timeout: Optional[float] = None,
    position: int = 0,
) -> SideResult:
    """Solve ``job.problem`` with a backend of its own.

    Args:
        job: Problem and side label.
        cfg: Run configuration.
        stop: Cooperative cancellation; also kills the SMT child when set.
        on_record: Receives each iteration record as it is produced.
        timeout: Overrides ``cfg.timeout`` for this run.
        position: tqdm bar row, so parallel sides do not overwrite each other.

    Returns:
        The outcome, with its certificate already re-verified by the loop.
    """
    options = cfg.solver_options()
    if timeout is not None:
        options.timeout = timeout
    backend = cfg.smt_backend()
    records: List[IterationRecord] = []
    label = job.side or "pcsat"
    finished = threading.Event()
    if stop is not None:
        watcher = threading.Thread(
            target=_kill_on_stop, args=(stop, backend, finished), daemon=True
        )
        watcher.start()
    started = time.monotonic()

    with tqdm(
        total=cfg.max_iterations,
        desc=f"Solving {label}",
        unit="iter",
        position=position,
        disable=not cfg.progress,
    ) as pbar:

        def on_iteration(record: IterationRecord) -> None:
            record.side = job.side
            records.append(record)
            if on_record is not None:
                on_record(record)
            pbar.update(1)

        try:
            result = solve(job.problem, backend, options, stop, on_iteration)
        finally:
            finished.set()
            backend.close()

    stats = RunStats(
        iterations=result.iterations,
        smt_calls=backend.calls,
        wall_time=time.monotonic() - started,
        examples=records[-1].num_examples if records else 0,
        classification=classify(job.problem).value,
    )
    if isinstance(result, Sat):
        return SideResult(
            job.side, "sat", format_solution(result.solution), result.solution,
            stats=stats, records=records,
        )
    if isinstance(result, Unsat):
        stats.examples = len(result.examples)
        certificate = format_examples(result.examples)
        return SideResult(
            job.side, "unsat", certificate, stats=stats, records=records
        )
    message = f"{label} gave up after {result.iterations} iteration(s): {result.reason}"
    if cfg.progress:
        tqdm.write(f"Warning: {message}")
    else:
        logger.warning(message)
    outcome: Outcome = "timeout" if result.timeout else "unknown"
    return SideResult(
        job.side, outcome, reason=result.reason, stats=stats, records=records
    )
