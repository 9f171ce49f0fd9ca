"""SMT-LIB2 s-expression reader and conversion into the muval AST."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Union

import pyparsing as pp

from ..errors import ParseError, SortError
from ..logic.ast import (
    BOT,
    TOP,
    Add,
    BoolLit,
    Cmp,
    Exists,
    Forall,
    Formula,
    FunApp,
    FunSort,
    Holds,
    IntLit,
    Ite,
    Mul,
    Neg,
    Not,
    PredApp,
    Sort,
    Term,
    Var,
    add,
    conj,
    disj,
    negate_term,
)
from ..logic.transform import term_sort

pp.ParserElement.enable_packrat()

SExpr = Union[str, List["SExpr"]]

_quoted = pp.QuotedString('"', unquote_results=False) | pp.QuotedString(
    "|", unquote_results=False
)
_sexpr = pp.nested_expr(opener="(", closer=")", ignore_expr=_quoted)
_atom = _quoted | pp.Regex(r'[^\s()";|]+')
_document = pp.ZeroOrMore(_sexpr | _atom)
_document.ignore(";" + pp.rest_of_line)


def parse_sexprs(text: str) -> List[SExpr]:
    """Read every top-level s-expression (or bare atom) in ``text``."""
    try:
        return _document.parse_string(text, parse_all=True).as_list()
    except pp.ParseException as exc:
        raise ParseError(
            f"malformed s-expression: {exc.msg}", exc.lineno, exc.col
        ) from None


def symbol(name: str) -> str:
    """Strip ``|...|`` quoting from an SMT-LIB symbol."""
    if len(name) >= 2 and name[0] == "|" and name[-1] == "|":
        return name[1:-1]
    return name


SORTS = {"Int": Sort.INT, "Bool": Sort.BOOL}


def parse_sort(sx: SExpr) -> Sort:
    if isinstance(sx, str) and sx in SORTS:
        return SORTS[sx]
    raise SortError(f"unsupported sort {sx!r}")


_CMP = {"<=": "<=", "<": "<", ">=": ">=", ">": ">"}
_LOGICAL = {"and", "or", "not", "=>", "=", "distinct", "forall", "exists", "xor"}


@dataclass
class SymbolTable:
    """Sorts of the variables, predicates and functions visible to a conversion."""

    variables: Dict[str, Sort] = field(default_factory=dict)
    preds: Dict[str, FunSort] = field(default_factory=dict)
    funs: Dict[str, FunSort] = field(default_factory=dict)

    def bind(self, names: Mapping[str, Sort]) -> "SymbolTable":
        return SymbolTable({**self.variables, **names}, self.preds, self.funs)


class _Converter:
    def __init__(self, table: SymbolTable) -> None:
        self.table = table
        self.lets: Dict[str, Union[Term, Formula]] = {}

    # -- sort inference --------------------------------------------------

    def sort_of(self, sx: SExpr) -> Sort:
        if isinstance(sx, str):
            name = symbol(sx)
            if sx in ("true", "false"):
                return Sort.BOOL
            if sx.lstrip("-").isdigit():
                return Sort.INT
            if name in self.lets:
                bound = self.lets[name]
                return term_sort(bound) if _is_term(bound) else Sort.BOOL
            if name in self.table.variables:
                return self.table.variables[name]
            if name in self.table.funs:
                return self.table.funs[name].ret
            if name in self.table.preds:
                return Sort.BOOL
            raise SortError(f"unknown symbol {name}")
        head = sx[0] if sx else None
        if not isinstance(head, str):
            raise SortError(f"cannot infer sort of {sx!r}")
        if head in ("+", "-", "*"):
            return Sort.INT
        if head == "ite":
            return self.sort_of(sx[2])
        if head in _LOGICAL or head in _CMP:
            return Sort.BOOL
        if head == "let":
            saved = dict(self.lets)
            self._bind_lets(sx[1])
            try:
                return self.sort_of(sx[2])
            finally:
                self.lets = saved
        name = symbol(head)
        if name in self.table.funs:
            return self.table.funs[name].ret
        if name in self.table.preds:
            return Sort.BOOL
        raise SortError(f"unknown function {name}")

    def _bind_lets(self, bindings: SExpr) -> None:
        new = {}
        for name, value in bindings:
            if self.sort_of(value) is Sort.BOOL:
                new[symbol(name)] = self.formula(value)
            else:
                new[symbol(name)] = self.term(value)
        self.lets.update(new)

    # -- terms -----------------------------------------------------------

    def term(self, sx: SExpr) -> Term:
        if isinstance(sx, str):
            if sx == "true":
                return BoolLit(True)
            if sx == "false":
                return BoolLit(False)
            if sx.isdigit():
                return IntLit(int(sx))
            name = symbol(sx)
            if name in self.lets:
                bound = self.lets[name]
                if not _is_term(bound):
                    raise SortError(f"let-bound formula {name} used as a term")
                return bound
            if name in self.table.variables:
                return Var(name, self.table.variables[name])
            fsort = self.table.funs.get(name)
            if fsort is not None and fsort.arity == 0:
                return FunApp(name, (), fsort.ret)
            raise SortError(f"unknown symbol {name}")
        head, args = sx[0], sx[1:]
        if head == "+":
            return add(*(self.term(a) for a in args))
        if head == "-":
            if len(args) == 1:
                return negate_term(self.term(args[0]))
            first, *rest = (self.term(a) for a in args)
            return add(first, *(negate_term(r) for r in rest))
        if head == "*":
            factors = [self.term(a) for a in args]
            coeff = 1
            others = []
            for f in factors:
                if isinstance(f, IntLit):
                    coeff *= f.value
                else:
                    others.append(f)
            if not others:
                return IntLit(coeff)
            if len(others) > 1:
                raise SortError("nonlinear multiplication")
            return others[0] if coeff == 1 else Mul(coeff, others[0])
        if head == "ite":
            return Ite(self.formula(args[0]), self.term(args[1]), self.term(args[2]))
        if head == "let":
            saved = dict(self.lets)
            self._bind_lets(args[0])
            try:
                return self.term(args[1])
            finally:
                self.lets = saved
        name = symbol(head) if isinstance(head, str) else None
        fsort = self.table.funs.get(name) if name else None
        if fsort is None:
            raise SortError(f"unknown function {head!r}")
        if len(args) != fsort.arity:
            raise SortError(f"{name} expects {fsort.arity} arguments, got {len(args)}")
        return FunApp(name, tuple(self.term(a) for a in args), fsort.ret)

    # -- formulas --------------------------------------------------------

    def formula(self, sx: SExpr) -> Formula:
        if isinstance(sx, str):
            if sx == "true":
                return TOP
            if sx == "false":
                return BOT
            name = symbol(sx)
            if name in self.lets:
                bound = self.lets[name]
                return Holds(bound) if _is_term(bound) else bound
            if name in self.table.preds and self.table.preds[name].arity == 0:
                return PredApp(name, ())
            return Holds(self.term(sx))
        head, args = sx[0], sx[1:]
        if head == "and":
            return conj(*(self.formula(a) for a in args))
        if head == "or":
            return disj(*(self.formula(a) for a in args))
        if head == "not":
            return Not(self.formula(args[0]))
        if head == "=>":
            *premises, conclusion = (self.formula(a) for a in args)
            return disj(*(Not(p) for p in premises), conclusion)
        if head == "xor":
            a, b = self.formula(args[0]), self.formula(args[1])
            return disj(conj(a, Not(b)), conj(Not(a), b))
        if head in ("=", "distinct"):
            return self._equality(head, args)
        if head in _CMP:
            terms = [self.term(a) for a in args]
            return conj(*(Cmp(_CMP[head], l, r) for l, r in zip(terms, terms[1:])))
        if head in ("forall", "exists"):
            binders = [(symbol(v), parse_sort(s)) for v, s in args[0]]
            inner = _Converter(self.table.bind(dict(binders)))
            inner.lets = {k: v for k, v in self.lets.items() if k not in dict(binders)}
            body = inner.formula(args[1])
            node = Forall if head == "forall" else Exists
            for var, sort in reversed(binders):
                body = node(var, sort, body)
            return body
        if head == "ite":
            cond = self.formula(args[0])
            then, other = self.formula(args[1]), self.formula(args[2])
            return disj(conj(cond, then), conj(Not(cond), other))
        if head == "let":
            saved = dict(self.lets)
            self._bind_lets(args[0])
            try:
                return self.formula(args[1])
            finally:
                self.lets = saved
        if head == "!":
            return self.formula(args[0])
        name = symbol(head) if isinstance(head, str) else None
        psort = self.table.preds.get(name) if name else None
        if psort is not None:
            if len(args) != psort.arity:
                raise SortError(
                    f"{name} expects {psort.arity} arguments, got {len(args)}"
                )
            return PredApp(name, tuple(self.term(a) for a in args))
        return Holds(self.term(sx))

    def _equality(self, head: str, args: List[SExpr]) -> Formula:
        if self.sort_of(args[0]) is Sort.BOOL:
            parts = [self.formula(a) for a in args]
            pairs = [
                disj(conj(a, b), conj(Not(a), Not(b))) for a, b in zip(parts, parts[1:])
            ]
            if head == "distinct":
                return conj(*(Not(p) for p in pairs))
            return conj(*pairs)
        terms = [self.term(a) for a in args]
        if head == "distinct":
            return conj(
                *(Cmp("!=", a, b) for i, a in enumerate(terms) for b in terms[i + 1 :])
            )
        return conj(*(Cmp("=", a, b) for a, b in zip(terms, terms[1:])))


def _is_term(x: object) -> bool:
    return isinstance(x, (Var, IntLit, BoolLit, FunApp, Ite, Mul, Add, Neg))


def to_formula(sx: SExpr, table: Optional[SymbolTable] = None) -> Formula:
    return _Converter(table or SymbolTable()).formula(sx)


def to_term(sx: SExpr, table: Optional[SymbolTable] = None) -> Term:
    return _Converter(table or SymbolTable()).term(sx)


def to_value(sx: SExpr) -> Union[int, bool]:
    """Literal value of a model entry such as ``5``, ``(- 3)`` or ``true``."""
    if isinstance(sx, str):
        if sx == "true":
            return True
        if sx == "false":
            return False
        if sx.isdigit():
            return int(sx)
    elif len(sx) == 2 and sx[0] == "-" and isinstance(sx[1], str) and sx[1].isdigit():
        return -int(sx[1])
    raise SortError(f"not an integer or boolean literal: {sx!r}")
