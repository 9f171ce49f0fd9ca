"""Clausal form of a nu-only program."""

from __future__ import annotations

from typing import List

from ..errors import ClauseShapeError
from ..logic.ast import Fixpoint, PredApp, Program, Var, forall, implies
from ..logic.transform import prenex_cnf
from ..pcsp.model import Clause


def _add_clauses(out: List[Clause], f) -> int:
    _, literal_sets = prenex_cnf(f)
    added = 0
    for lits in literal_sets:
        clause = Clause.from_literals(lits)
        if clause not in out:
            out.append(clause)
            added += 1
    return added


def elim_nu(p: Program) -> List[Clause]:
    """Clauses of the query plus ``X(x) => body`` for every equation.

    Each defined predicate now stands for an under-approximation of its
    greatest fixpoint, so the clause set is satisfiable exactly when the
    query holds.

    Raises:
        ClauseShapeError: If a ``mu`` equation is left.
        ResidualExistentialError: If an existential survived Skolemization.
    """
    clauses: List[Clause] = []
    _add_clauses(clauses, p.query)
    for eq in p.equations:
        if eq.kind is not Fixpoint.NU:
            raise ClauseShapeError(f"equation {eq.head} is still a least fixpoint")
        head = PredApp(eq.head, tuple(Var(n, s) for n, s in eq.params))
        _add_clauses(clauses, forall(eq.params, implies(head, eq.body)))
    return clauses
