"""In-process solving engine."""

from __future__ import annotations

import time
from pathlib import Path
from typing import List, Optional, Sequence

from tqdm import tqdm

from ..errors import SmtBackendError
from .config import RunConfig
from .io import append_iteration_jsonl
from .side import SideJob, SideResult, run_side


def run_sides_sequential(
    jobs: Sequence[SideJob],
    cfg: RunConfig,
    jsonl_path: Optional[Path] = None,
) -> List[SideResult]:
    """Solve the jobs one after another, stopping at the first definitive answer.

    All jobs share the ``cfg.timeout`` budget. Iteration records are appended
    to ``jsonl_path`` as they are produced.
    """
    results: List[SideResult] = []
    started = time.monotonic()

    def on_record(record) -> None:
        if jsonl_path is not None:
            append_iteration_jsonl(record, jsonl_path)

    for job in jobs:
        remaining = cfg.timeout - (time.monotonic() - started)
        if remaining <= 0:
            results.append(SideResult.gave_up(job.side, "time budget exhausted", True))
            continue
        try:
            result = run_side(job, cfg, on_record=on_record, timeout=remaining)
        except (SmtBackendError, OSError) as exc:
            tqdm.write(f"Warning: {job.side or 'pcsat'} run failed: {exc}")
            result = SideResult.gave_up(job.side, str(exc))
        results.append(result)
        if result.definitive:
            break
    return results
