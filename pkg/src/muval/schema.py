from __future__ import annotations

from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field

Side = Literal["primal", "dual"]


class Counterexample(BaseModel):
    clause: int
    theta: Dict[str, Union[int, bool]] = Field(default_factory=dict)


class IterationRecord(BaseModel):
    """One CEGIS iteration, as written to the JSONL iteration log.

    Attributes:
        side: Which of the two runs produced the record (absent for pcsat).
        iteration: 1-based iteration number.
        candidate: Rendered candidate per function or predicate variable.
        failed_clauses: Indices of the clauses the candidate violates.
        counterexamples: One term assignment per failed clause.
        num_examples: Size of the example store after the iteration.
        params: Template parameters per variable.
        cycles: Cycles learnt while checking the examples.
        note: Free-form remark (e.g. why the run stopped).
    """

    side: Optional[Side] = None
    iteration: int
    candidate: Dict[str, str] = Field(default_factory=dict)
    failed_clauses: List[int] = Field(default_factory=list)
    counterexamples: List[Counterexample] = Field(default_factory=list)
    num_examples: int = 0
    params: Dict[str, Dict[str, int]] = Field(default_factory=dict)
    cycles: List[List[str]] = Field(default_factory=list)
    note: Optional[str] = None


class RunStats(BaseModel):
    iterations: int = 0
    smt_calls: int = 0
    wall_time: float = 0.0
    examples: int = 0
    classification: Optional[str] = None


class FinalReport(BaseModel):
    """Outcome of a ``muval solve`` or ``pcsat`` run.

    Attributes:
        verdict: Final answer.
        side: The run that decided the verdict.
        certificate: Solution or example set backing a definitive verdict.
        reason: Why the run gave up, for ``unknown`` and ``timeout``.
        stats: Counters of the deciding run.
    """

    verdict: Literal["valid", "invalid", "sat", "unsat", "unknown", "timeout"]
    side: Optional[Side] = None
    certificate: Optional[str] = None
    reason: Optional[str] = None
    stats: RunStats = Field(default_factory=RunStats)
