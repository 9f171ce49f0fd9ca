"""Sorted first-order syntax for MuCLP programs and pfwCSP clauses.

All nodes are frozen dataclasses, so values are immutable, hashable and safe
to share between concurrently running solver pipelines. Build compound nodes
through :func:`add`, :func:`conj` and :func:`disj`, which flatten nested
sums/connectives; the parser produces the same canonical shapes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Optional, Tuple, Union


class Sort(str, Enum):
    INT = "int"
    BOOL = "bool"
    PROP = "prop"


@dataclass(frozen=True)
class FunSort:
    """Sort of a function or predicate variable; predicates return PROP."""

    args: Tuple[Sort, ...]
    ret: Sort

    @property
    def arity(self) -> int:
        return len(self.args)


class Fixpoint(str, Enum):
    MU = "mu"
    NU = "nu"

    def flip(self) -> "Fixpoint":
        return Fixpoint.NU if self is Fixpoint.MU else Fixpoint.MU


# --------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort = Sort.INT


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Add:
    """n-ary sum; subtraction is an addend wrapped in :class:`Neg`."""

    args: Tuple["Term", ...]


@dataclass(frozen=True)
class Neg:
    arg: "Term"


@dataclass(frozen=True)
class Mul:
    """Multiplication by an integer constant."""

    coeff: int
    arg: "Term"


@dataclass(frozen=True)
class Ite:
    cond: "Formula"
    then: "Term"
    other: "Term"


@dataclass(frozen=True)
class FunApp:
    """Application of a function variable (Skolem function, template, ...)."""

    name: str
    args: Tuple["Term", ...]
    sort: Sort = Sort.INT


Term = Union[Var, IntLit, BoolLit, Add, Neg, Mul, Ite, FunApp]


# --------------------------------------------------------------------------
# Formulas

CMP_OPS = ("=", "!=", "<=", "<", ">=", ">")
NEGATED_CMP = {"=": "!=", "!=": "=", "<=": ">", "<": ">=", ">=": "<", ">": "<="}


@dataclass(frozen=True)
class Truth:
    value: bool


@dataclass(frozen=True)
class Cmp:
    op: str
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Holds:
    """A Boolean-sorted term used as an atomic formula."""

    term: Term


@dataclass(frozen=True)
class PredApp:
    name: str
    args: Tuple[Term, ...]


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    args: Tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    args: Tuple["Formula", ...]


@dataclass(frozen=True)
class Forall:
    var: str
    sort: Sort
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    sort: Sort
    body: "Formula"


Formula = Union[Truth, Cmp, Holds, PredApp, Not, And, Or, Forall, Exists]
Quantifier = Union[Forall, Exists]

TOP = Truth(True)
BOT = Truth(False)

Params = Tuple[Tuple[str, Sort], ...]


@dataclass(frozen=True)
class Lambda:
    """Closed abstraction ``λparams. body`` used by substitutions and solutions."""

    params: Params
    body: Union[Formula, Term]


@dataclass(frozen=True)
class Equation:
    head: str
    params: Params
    kind: Fixpoint
    body: Formula

    @property
    def sort(self) -> FunSort:
        return FunSort(tuple(s for _, s in self.params), Sort.PROP)


@dataclass(frozen=True)
class Program:
    """Ordered fixpoint equations plus a query; order is semantically relevant."""

    equations: Tuple[Equation, ...]
    query: Formula

    @property
    def heads(self) -> Tuple[str, ...]:
        return tuple(eq.head for eq in self.equations)

    def equation(self, head: str) -> Optional[Equation]:
        for eq in self.equations:
            if eq.head == head:
                return eq
        return None

    def signature(self) -> Dict[str, FunSort]:
        return {eq.head: eq.sort for eq in self.equations}


# --------------------------------------------------------------------------
# Smart constructors


def add(*terms: Term) -> Term:
    flat = []
    for t in terms:
        if isinstance(t, Add):
            flat.extend(t.args)
        else:
            flat.append(t)
    if not flat:
        return IntLit(0)
    if len(flat) == 1:
        return flat[0]
    return Add(tuple(flat))


def negate_term(t: Term) -> Term:
    if isinstance(t, IntLit):
        return IntLit(-t.value)
    if isinstance(t, Neg):
        return t.arg
    if isinstance(t, Mul):
        return Mul(-t.coeff, t.arg)
    return Neg(t)


def sub(a: Term, b: Term) -> Term:
    return add(a, negate_term(b))


def conj(*formulas: Formula) -> Formula:
    flat = []
    for f in formulas:
        if isinstance(f, And):
            flat.extend(f.args)
        else:
            flat.append(f)
    if not flat:
        return TOP
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(*formulas: Formula) -> Formula:
    flat = []
    for f in formulas:
        if isinstance(f, Or):
            flat.extend(f.args)
        else:
            flat.append(f)
    if not flat:
        return BOT
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def implies(a: Formula, b: Formula) -> Formula:
    return disj(Not(a), b)


def forall(params: Iterable[Tuple[str, Sort]], body: Formula) -> Formula:
    for name, sort in reversed(list(params)):
        body = Forall(name, sort, body)
    return body


def exists(params: Iterable[Tuple[str, Sort]], body: Formula) -> Formula:
    for name, sort in reversed(list(params)):
        body = Exists(name, sort, body)
    return body


def default_value(sort: Sort) -> Term:
    """Canonical dummy literal of a sort (0 for Int, false for Bool)."""
    return BoolLit(False) if sort is Sort.BOOL else IntLit(0)


def literal(value: Union[int, bool]) -> Term:
    if isinstance(value, bool):
        return BoolLit(value)
    return IntLit(value)


def as_formula(t: Term) -> Formula:
    """View a Boolean term as a formula."""
    if isinstance(t, BoolLit):
        return Truth(t.value)
    return Holds(t)
