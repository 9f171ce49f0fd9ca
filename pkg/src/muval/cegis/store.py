"""Accumulated example instances and the unit facts they force."""

from __future__ import annotations

import logging
from typing import Dict, Iterator, List, Optional, Set, Tuple

from ..logic.ast import BOT, TOP, BoolLit, IntLit, PredApp
from ..pcsp.model import Clause, ExampleInstance

logger = logging.getLogger(__name__)


def is_ground_atom(app: PredApp) -> bool:
    return all(isinstance(a, (IntLit, BoolLit)) for a in app.args)


class ExampleStore:
    """Ground instances without duplicates, plus derived positive/negative facts.

    Two instances are the same when their folded clauses are equal; the
    first one added keeps its source clause and assignment.
    """

    def __init__(self) -> None:
        self.instances: List[ExampleInstance] = []
        self._seen: Dict[Clause, int] = {}
        self.positives: Set[PredApp] = set()
        self.negatives: Set[PredApp] = set()
        self.conflict: Optional[ExampleInstance] = None

    def __len__(self) -> int:
        return len(self.instances)

    def __iter__(self) -> Iterator[ExampleInstance]:
        return iter(self.instances)

    def __contains__(self, ex: ExampleInstance) -> bool:
        return ex.clause in self._seen

    def add(self, ex: ExampleInstance) -> bool:
        """Store ``ex``; ``False`` if an equal instance is already present."""
        if ex.clause in self._seen:
            return False
        self._seen[ex.clause] = len(self.instances)
        self.instances.append(ex)
        return True

    def sources(self) -> Dict[int, List[int]]:
        """Instance indices per source clause."""
        out: Dict[int, List[int]] = {}
        for i, ex in enumerate(self.instances):
            out.setdefault(ex.source, []).append(i)
        return out

    def _open_literals(
        self, clause: Clause
    ) -> Optional[Tuple[List[PredApp], List[PredApp]]]:
        """Literals not yet decided by the facts; ``None`` once ``clause`` holds."""
        if clause.constraint == TOP:
            return None
        if clause.constraint != BOT:
            # constraint still mentions function variables
            return None
        pos: List[PredApp] = []
        neg: List[PredApp] = []
        for app in clause.pos:
            if app in self.positives:
                return None
            if app not in self.negatives:
                pos.append(app)
        for app in clause.neg:
            if app in self.negatives:
                return None
            if app not in self.positives:
                neg.append(app)
        return pos, neg

    def propagate(self) -> int:
        """Unit propagation to a fixpoint; returns the number of new facts.

        Only atoms whose arguments are literals become facts. A clause left
        without open literals is recorded as :attr:`conflict`.
        """
        added = 0
        changed = True
        while changed:
            changed = False
            for ex in self.instances:
                open_lits = self._open_literals(ex.clause)
                if open_lits is None:
                    continue
                pos, neg = open_lits
                if not pos and not neg:
                    if self.conflict is None:
                        self.conflict = ex
                        logger.debug(
                            "example from clause %d is contradicted", ex.source
                        )
                    continue
                if len(pos) + len(neg) != 1:
                    continue
                if pos and is_ground_atom(pos[0]):
                    self.positives.add(pos[0])
                elif neg and is_ground_atom(neg[0]):
                    self.negatives.add(neg[0])
                else:
                    continue
                added += 1
                changed = True
        return added
