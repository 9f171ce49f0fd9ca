"""Clauses, pfwCSP problems, candidate solutions and example instances."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Tuple, Union

from ..errors import ClauseShapeError, OddArityError, SortError, UnboundPredicateError
from ..logic.ast import (
    BOT,
    Exists,
    Forall,
    Formula,
    FunSort,
    Lambda,
    Not,
    Params,
    PredApp,
    Sort,
    Truth,
    Var,
    disj,
)
from ..logic.printer import format_lambda
from ..logic.transform import (
    canonical,
    free_vars,
    fun_apps,
    is_formula,
    subst_term_vars,
    subst_vars,
    walk,
)

Value = Union[int, bool]


@dataclass(frozen=True)
class Clause:
    """``constraint \\/ pos_1 \\/ ... \\/ not neg_1 \\/ ...`` with implicit universals.

    Attributes:
        constraint: Quantifier-free formula without predicate variables; it
            may mention function variables.
        pos: Positive predicate literals.
        neg: Negated predicate literals (stored without the ``Not``).
        term_vars: Free term variables, in order of first occurrence.
    """

    constraint: Formula
    pos: Tuple[PredApp, ...] = ()
    neg: Tuple[PredApp, ...] = ()
    term_vars: Params = ()

    @classmethod
    def from_literals(cls, literals: Iterable[Formula]) -> "Clause":
        """Sort a disjunction's literals into the clause shape.

        Raises:
            ClauseShapeError: If a constraint literal mentions a predicate
                variable or a quantifier.
        """
        pos: List[PredApp] = []
        neg: List[PredApp] = []
        rest: List[Formula] = []
        for lit in literals:
            if isinstance(lit, PredApp):
                if lit not in pos:
                    pos.append(lit)
            elif isinstance(lit, Not) and isinstance(lit.body, PredApp):
                if lit.body not in neg:
                    neg.append(lit.body)
            else:
                for node in walk(lit):
                    if isinstance(node, PredApp):
                        raise ClauseShapeError(
                            f"predicate variable {node.name} occurs inside a constraint"
                        )
                    if isinstance(node, (Forall, Exists)):
                        raise ClauseShapeError("quantifier inside a clause constraint")
                rest.append(lit)
        return cls.build(disj(*rest), pos, neg)

    @classmethod
    def build(
        cls,
        constraint: Formula,
        pos: Iterable[PredApp] = (),
        neg: Iterable[PredApp] = (),
    ) -> "Clause":
        pos, neg = tuple(pos), tuple(neg)
        body = disj(constraint, *pos, *(Not(a) for a in neg))
        return cls(constraint, pos, neg, tuple(free_vars(body).items()))

    def as_formula(self) -> Formula:
        head = () if self.constraint == BOT else (self.constraint,)
        return disj(*head, *self.pos, *(Not(a) for a in self.neg))

    @property
    def pred_names(self) -> Tuple[str, ...]:
        seen: Dict[str, None] = {}
        for app in self.pos + self.neg:
            seen.setdefault(app.name, None)
        return tuple(seen)

    @property
    def fun_names(self) -> Tuple[str, ...]:
        seen: Dict[str, None] = {}
        for app in fun_apps(self.as_formula()):
            seen.setdefault(app.name, None)
        return tuple(seen)

    @property
    def is_ground(self) -> bool:
        return not self.term_vars


@dataclass(frozen=True)
class PfwCsp:
    """A clause set with well-founded predicate variables and function variables.

    Attributes:
        clauses: The constraints, in input order.
        preds: Sorts of every predicate variable, well-founded ones included.
        wf: Names of the well-founded predicate variables.
        funs: Sorts of the function variables.
    """

    clauses: Tuple[Clause, ...] = ()
    preds: Mapping[str, FunSort] = field(default_factory=dict)
    wf: FrozenSet[str] = frozenset()
    funs: Mapping[str, FunSort] = field(default_factory=dict)

    def validate(self) -> None:
        for name in self.wf:
            fsort = self.preds.get(name)
            if fsort is None:
                raise UnboundPredicateError(
                    f"well-founded variable {name} is not declared"
                )
            if fsort.arity % 2:
                raise OddArityError(
                    f"well-founded variable {name} has odd arity {fsort.arity}"
                )
            half = fsort.arity // 2
            if fsort.args[:half] != fsort.args[half:]:
                raise SortError(f"well-founded variable {name} relates different sorts")
        for i, clause in enumerate(self.clauses):
            for app in clause.pos + clause.neg:
                fsort = self.preds.get(app.name)
                if fsort is None:
                    raise UnboundPredicateError(
                        f"clause {i}: undeclared predicate {app.name}"
                    )
                if fsort.arity != len(app.args):
                    raise SortError(
                        f"clause {i}: {app.name} expects {fsort.arity} arguments, "
                        f"got {len(app.args)}"
                    )
            for name in clause.fun_names:
                if name not in self.funs:
                    raise UnboundPredicateError(
                        f"clause {i}: undeclared function {name}"
                    )

    @property
    def ordinary_preds(self) -> Dict[str, FunSort]:
        return {n: s for n, s in self.preds.items() if n not in self.wf}

    def wf_half(self, name: str) -> Tuple[Sort, ...]:
        fsort = self.preds[name]
        return fsort.args[: fsort.arity // 2]

    def unknowns(self) -> List[str]:
        """Every predicate and function variable, predicates first."""
        return list(self.preds) + list(self.funs)


@dataclass(frozen=True)
class CandidateSolution:
    """Closed lambdas for predicate and function variables."""

    preds: Mapping[str, Lambda] = field(default_factory=dict)
    funs: Mapping[str, Lambda] = field(default_factory=dict)

    def substitution(self) -> Dict[str, Lambda]:
        return {**self.preds, **self.funs}

    def key(self) -> Tuple[Tuple[str, object], ...]:
        """Structural identity, insensitive to parameter names."""
        out = []
        for name, lam in sorted(self.substitution().items()):
            renaming = {n: f"%a{i}" for i, (n, _) in enumerate(lam.params)}
            out.append((name, _rename_params(lam, renaming)))
        return tuple(out)

    def render(self) -> Dict[str, str]:
        items = sorted(self.substitution().items())
        return {name: format_lambda(lam) for name, lam in items}


def _rename_params(lam: Lambda, renaming: Mapping[str, str]) -> object:
    mapping = {n: Var(renaming[n], s) for n, s in lam.params}
    if is_formula(lam.body):
        return canonical(subst_vars(lam.body, mapping))
    return subst_term_vars(lam.body, mapping)


@dataclass(frozen=True)
class ExampleInstance:
    """A ground clause obtained from clause ``source`` under ``theta``."""

    clause: Clause
    source: int
    theta: Tuple[Tuple[str, Value], ...] = ()

    @property
    def trivially_true(self) -> bool:
        return self.clause.constraint == Truth(True)
