"""Skolemization of positive existentials."""

from __future__ import annotations

import logging
from typing import List, Optional, Tuple

from ..logic.ast import (
    BoolLit,
    Equation,
    Exists,
    Forall,
    Formula,
    FunApp,
    FunSort,
    Params,
    Program,
    Sort,
    Var,
    disj,
)
from ..logic.names import NameSupply
from ..logic.transform import map_formula, nnf, program_names, simplify, subst_vars
from .trace import SkolemFunction

logger = logging.getLogger(__name__)

SKOLEM_PREFIX = "sk_"


class _Skolemizer:
    def __init__(self, supply: NameSupply) -> None:
        self.supply = supply
        self.functions: List[SkolemFunction] = []

    def run(self, f: Formula, scope: Params, site: str) -> Formula:
        def hook(g: Formula) -> Optional[Formula]:
            if isinstance(g, Forall):
                inner = scope + ((g.var, g.sort),)
                return Forall(g.var, g.sort, self.run(g.body, inner, site))
            if isinstance(g, Exists):
                if g.sort is Sort.BOOL:
                    # a Boolean witness is just a case split
                    branches = (
                        simplify(subst_vars(g.body, {g.var: BoolLit(v)}))
                        for v in (True, False)
                    )
                    return self.run(disj(*branches), scope, site)
                name = self.supply.fresh(SKOLEM_PREFIX + g.var)
                fsort = FunSort(tuple(s for _, s in scope), g.sort)
                self.functions.append(SkolemFunction(name, fsort, site, g.var))
                witness = FunApp(name, tuple(Var(n, s) for n, s in scope), g.sort)
                return self.run(subst_vars(g.body, {g.var: witness}), scope, site)
            return None

        return map_formula(f, hook)


def elim_ex(
    p: Program, supply: Optional[NameSupply] = None
) -> Tuple[Program, List[SkolemFunction]]:
    """Replace every positive existential by a fresh function variable.

    Bodies and query are first put into negation normal form, so the only
    existentials left are positive ones. A binder ``x`` under the universals
    ``y1..yn`` (equation parameters first, then enclosing ``forall`` binders)
    becomes ``sk_x(y1, ..., yn)``. Boolean existentials are expanded into a
    disjunction of both cases instead.

    Args:
        p: Well-formed program with a closed query.
        supply: Name supply shared with later reduction steps.

    Returns:
        The existential-free program and the introduced Skolem functions.
    """
    supply = supply or NameSupply(program_names(p))
    sk = _Skolemizer(supply)
    query = sk.run(nnf(p.query), (), "query")
    equations = tuple(
        Equation(eq.head, eq.params, eq.kind, sk.run(nnf(eq.body), eq.params, eq.head))
        for eq in p.equations
    )
    if sk.functions:
        logger.info(
            "skolemized %d existential(s): %s",
            len(sk.functions),
            ", ".join(s.name for s in sk.functions),
        )
    return Program(equations, query), sk.functions
