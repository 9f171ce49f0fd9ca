"""Multiprocessing-based solving engine for the primal and dual problems."""

from __future__ import annotations

import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures import TimeoutError as FuturesTimeout
from concurrent.futures import as_completed
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from tqdm import tqdm

from ..cegis import StopSignal
from ..errors import MuvalError, SmtBackendError
from .config import RunConfig
from .io import write_iteration_log
from .side import SideJob, SideResult, run_side

# Seconds granted past the time budget for sides to notice the stop event.
_GRACE = 5.0

_WORKER_STOP: Optional[StopSignal] = None


def _init_worker(stop: StopSignal) -> None:
    global _WORKER_STOP

    _WORKER_STOP = stop


def _worker_solve(job: SideJob, cfg: RunConfig, position: int) -> SideResult:
    try:
        result = run_side(job, cfg, stop=_WORKER_STOP, position=position)
    except (SmtBackendError, OSError) as exc:
        return SideResult.gave_up(job.side, f"run failed: {exc}")
    if _WORKER_STOP is not None and _WORKER_STOP.is_set() and not result.definitive:
        result.reason = "cancelled"
    return result


def run_sides_parallel(
    jobs: Sequence[SideJob],
    cfg: RunConfig,
    jsonl_path: Optional[Path] = None,
) -> List[SideResult]:
    """Solve the jobs in separate processes until one answers definitively.

    Each worker owns its own SMT child. Cancellation goes through a shared
    event that the workers poll between iterations and that also kills their
    SMT children. Iteration records are written once all workers are done.
    """
    ctx = mp.get_context("spawn")
    results: Dict[int, SideResult] = {}

    with ctx.Manager() as manager:
        stop = manager.Event()
        with ProcessPoolExecutor(
            max_workers=len(jobs),
            mp_context=ctx,
            initializer=_init_worker,
            initargs=(stop,),
        ) as executor:
            futures = {
                executor.submit(_worker_solve, job, cfg, position): position
                for position, job in enumerate(jobs)
            }
            try:
                for future in as_completed(futures, timeout=cfg.timeout + _GRACE):
                    position = futures[future]
                    try:
                        result = future.result()
                    except MuvalError:
                        stop.set()
                        raise
                    except Exception as exc:
                        side = jobs[position].side
                        tqdm.write(f"Warning: {side} worker failed: {exc}")
                        result = SideResult.gave_up(side, f"worker failed: {exc}")
                    results[position] = result
                    if result.definitive:
                        stop.set()
            except FuturesTimeout:
                stop.set()
                tqdm.write("Warning: time budget exhausted, cancelling remaining runs")
                for position in futures.values():
                    if position not in results:
                        results[position] = SideResult.gave_up(
                            jobs[position].side, "time budget exhausted", timeout=True
                        )

    ordered = [results[position] for position in range(len(jobs))]
    if jsonl_path is not None:
        write_iteration_log(
            (record for result in ordered for record in result.records), jsonl_path
        )
    return ordered
