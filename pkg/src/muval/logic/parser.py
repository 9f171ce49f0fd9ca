"""MuCLP text grammar.

Parsing happens in two passes. The pyparsing grammar below builds untyped
``_Raw`` nodes; :class:`_Resolver` then resolves scopes and sorts, decides
whether an application denotes a predicate or a function, and gives every
quantifier binder a program-wide fresh name.

Concrete syntax::

    query <formula>;
    X(x: int, b: bool) =mu <formula>;
    Y(y: int) =nu <formula>;

with ``not`` > ``/\\`` > ``\\/`` > ``=>`` (right associative) and quantifier
bodies extending as far right as possible. ``#`` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Tuple

import pyparsing as pp

from ..errors import DuplicateEquationError, OpenQueryError, ParseError, SortError
from ..errors import UnboundPredicateError
from .ast import (
    BoolLit,
    Cmp,
    Equation,
    Exists,
    Fixpoint,
    Forall,
    Formula,
    FunApp,
    FunSort,
    Holds,
    IntLit,
    Ite,
    Mul,
    Not,
    PredApp,
    Program,
    Sort,
    Term,
    Truth,
    Var,
    add,
    conj,
    disj,
    negate_term,
)
from .names import NameSupply
from .transform import term_sort

pp.ParserElement.enable_packrat()

KEYWORDS = ("forall", "exists", "not", "true", "false", "ite", "query")


@dataclass(frozen=True)
class _Raw:
    kind: str
    args: Tuple[Any, ...]
    line: int = 0
    col: int = 0


def _located(kind: str, build):
    def action(s: str, loc: int, toks: pp.ParseResults) -> _Raw:
        return _Raw(kind, build(toks), pp.lineno(loc, s), pp.col(loc, s))

    return action


def _fold_left(kind: str):
    def action(toks: pp.ParseResults) -> _Raw:
        items = list(toks[0])
        node = items[0]
        for op, rhs in zip(items[1::2], items[2::2]):
            node = _Raw(kind, (op, node, rhs))
        return node

    return action


def _fold_nary(kind: str):
    def action(toks: pp.ParseResults) -> _Raw:
        return _Raw(kind, tuple(toks[0][0::2]))

    return action


def _fold_right_implies(toks: pp.ParseResults) -> _Raw:
    items = list(toks[0])[0::2]
    node = items[-1]
    for lhs in reversed(items[:-1]):
        node = _Raw("implies", (lhs, node))
    return node


def _unary(kind: str):
    def action(toks: pp.ParseResults) -> _Raw:
        return _Raw(kind, (toks[0][1],))

    return action


def _build_grammar() -> Dict[str, pp.ParserElement]:
    LPAR, RPAR, COMMA, COLON, DOT, SEMI = map(pp.Suppress, "(),:.;")
    keyword = pp.MatchFirst([pp.Keyword(k) for k in KEYWORDS])
    ident = (~keyword + pp.Regex(r"[A-Za-z_][A-Za-z0-9_']*")).set_name("identifier")

    formula = pp.Forward().set_name("formula")
    term = pp.Forward().set_name("term")

    integer = pp.Regex(r"\d+").set_parse_action(
        lambda t: _Raw("int", (int(t[0]),))
    )
    boolean = (pp.Keyword("true") | pp.Keyword("false")).set_parse_action(
        lambda t: _Raw("bool", (t[0] == "true",))
    )
    term_list = pp.Group(pp.Opt(term + pp.ZeroOrMore(COMMA + term)))
    app = (ident + LPAR + term_list + RPAR).set_parse_action(
        _located("app", lambda t: (t[0], tuple(t[1])))
    )
    name = ident.copy().set_parse_action(_located("ident", lambda t: (t[0],)))
    ite = (
        pp.Suppress(pp.Keyword("ite"))
        + LPAR
        + formula
        + COMMA
        + term
        + COMMA
        + term
        + RPAR
    )
    ite.set_parse_action(lambda t: _Raw("ite", (t[0], t[1], t[2])))

    term_operand = integer | ite | boolean | app | name
    term <<= pp.infix_notation(
        term_operand,
        [
            (pp.Literal("-"), 1, pp.OpAssoc.RIGHT, _unary("neg")),
            (pp.Literal("*"), 2, pp.OpAssoc.LEFT, _fold_left("mul")),
            (pp.one_of("+ -"), 2, pp.OpAssoc.LEFT, _fold_left("add")),
        ],
    )

    sort = pp.Keyword("int") | pp.Keyword("bool")
    param = pp.Group(ident + COLON + sort)
    params = pp.Group(param + pp.ZeroOrMore(COMMA + param))

    cmp_op = pp.one_of("<= >= != = < >")
    comparison = (term + cmp_op + term).set_parse_action(
        _located("cmp", lambda t: (t[1], t[0], t[2]))
    )
    quantifier = (
        (pp.Keyword("forall") | pp.Keyword("exists")) + params + DOT + formula
    ).set_parse_action(
        lambda t: _Raw(t[0], (tuple((p[0], p[1]) for p in t[1]), t[2]))
    )
    atom = quantifier | comparison | app | boolean | name
    formula <<= pp.infix_notation(
        atom,
        [
            (pp.Keyword("not"), 1, pp.OpAssoc.RIGHT, _unary("not")),
            (pp.Literal("/\\"), 2, pp.OpAssoc.LEFT, _fold_nary("and")),
            (pp.Literal("\\/"), 2, pp.OpAssoc.LEFT, _fold_nary("or")),
            (pp.Literal("=>"), 2, pp.OpAssoc.RIGHT, _fold_right_implies),
        ],
    )

    kind = pp.Suppress("=") + (pp.Keyword("mu") | pp.Keyword("nu"))
    equation = (
        ident + LPAR + pp.Group(pp.Opt(params)) + RPAR + kind + formula + SEMI
    ).set_parse_action(
        _located(
            "eqn",
            lambda t: (
                t[0],
                tuple((p[0], p[1]) for p in (t[1][0] if t[1] else [])),
                t[2],
                t[3],
            ),
        )
    )
    program = (
        pp.Suppress(pp.Keyword("query"))
        + formula
        + SEMI
        + pp.Group(pp.ZeroOrMore(equation))
    )
    comment = pp.Regex(r"#.*")
    for element in (program, formula, term):
        element.ignore(comment)
    return {
        "program": program + pp.StringEnd(),
        "formula": formula + pp.StringEnd(),
        "term": term + pp.StringEnd(),
    }


_GRAMMAR = _build_grammar()


def _run(which: str, text: str) -> pp.ParseResults:
    try:
        return _GRAMMAR[which].parse_string(text, parse_all=True)
    except pp.ParseException as exc:
        raise ParseError(exc.msg, exc.lineno, exc.col) from None


# --------------------------------------------------------------------------
# Resolution


class _Resolver:
    """Scope, sort and binder resolution over raw syntax trees."""

    def __init__(
        self,
        preds: Mapping[str, FunSort],
        funs: Optional[Dict[str, FunSort]] = None,
        supply: Optional[NameSupply] = None,
        implicit_funs: bool = True,
    ) -> None:
        self.preds = dict(preds)
        self.funs: Dict[str, FunSort] = funs if funs is not None else {}
        self.supply = supply or NameSupply()
        self.implicit_funs = implicit_funs
        self.in_query = False

    # -- terms -----------------------------------------------------------

    def term(self, raw: _Raw, scope: Mapping[str, Tuple[str, Sort]]) -> Term:
        kind = raw.kind
        if kind == "int":
            return IntLit(raw.args[0])
        if kind == "bool":
            return BoolLit(raw.args[0])
        if kind == "ident":
            name = raw.args[0]
            if name in scope:
                actual, sort = scope[name]
                return Var(actual, sort)
            fsort = self.funs.get(name)
            if fsort is not None and fsort.arity == 0:
                return FunApp(name, (), fsort.ret)
            if self.in_query:
                raise OpenQueryError(
                    f"free variable {name} in query (line {raw.line}, col {raw.col})"
                )
            raise SortError(f"unbound variable {name} (line {raw.line}, col {raw.col})")
        if kind == "app":
            return self._fun_app(raw, scope)
        if kind == "neg":
            return negate_term(self._int_term(raw.args[0], scope))
        if kind == "add":
            op, lhs, rhs = raw.args
            left = self._int_term(lhs, scope)
            right = self._int_term(rhs, scope)
            return add(left, negate_term(right) if op == "-" else right)
        if kind == "mul":
            _, lhs, rhs = raw.args
            left = self._int_term(lhs, scope)
            right = self._int_term(rhs, scope)
            if isinstance(left, IntLit) and isinstance(right, IntLit):
                return IntLit(left.value * right.value)
            if isinstance(left, IntLit):
                return Mul(left.value, right)
            if isinstance(right, IntLit):
                return Mul(right.value, left)
            raise SortError(
                "nonlinear multiplication: one factor must be an integer literal"
            )
        if kind == "ite":
            cond = self.formula(raw.args[0], scope)
            then = self.term(raw.args[1], scope)
            other = self.term(raw.args[2], scope)
            if term_sort(then) != term_sort(other):
                raise SortError("ite branches have different sorts")
            return Ite(cond, then, other)
        raise SortError(f"expected a term, found {kind}")

    def _int_term(self, raw: _Raw, scope) -> Term:
        t = self.term(raw, scope)
        if term_sort(t) is not Sort.INT:
            raise SortError(f"integer expected (line {raw.line}, col {raw.col})")
        return t

    def _args(
        self, raw_args, expected: Tuple[Sort, ...], name: str, scope
    ) -> Tuple[Term, ...]:
        if len(raw_args) != len(expected):
            raise SortError(
                f"{name} expects {len(expected)} arguments, got {len(raw_args)}"
            )
        out = []
        for i, (r, s) in enumerate(zip(raw_args, expected)):
            t = self.term(r, scope)
            if term_sort(t) is not s:
                raise SortError(f"argument {i + 1} of {name} must be {s.value}")
            out.append(t)
        return tuple(out)

    def _fun_app(self, raw: _Raw, scope) -> Term:
        name, raw_args = raw.args
        if name in self.preds:
            raise SortError(f"predicate {name} used as a term (line {raw.line})")
        fsort = self.funs.get(name)
        if fsort is None:
            if not self.implicit_funs:
                raise SortError(f"undeclared function {name} (line {raw.line})")
            args = tuple(self.term(r, scope) for r in raw_args)
            self.funs[name] = FunSort(tuple(term_sort(a) for a in args), Sort.INT)
            return FunApp(name, args, Sort.INT)
        return FunApp(name, self._args(raw_args, fsort.args, name, scope), fsort.ret)

    # -- formulas --------------------------------------------------------

    def formula(self, raw: _Raw, scope: Mapping[str, Tuple[str, Sort]]) -> Formula:
        kind = raw.kind
        if kind == "bool":
            return Truth(raw.args[0])
        if kind == "ident":
            name = raw.args[0]
            if name in scope:
                actual, sort = scope[name]
                if sort is not Sort.BOOL:
                    raise SortError(f"integer variable {name} used as a formula")
                return Holds(Var(actual, sort))
            return self._pred_app(raw, name, (), scope)
        if kind == "app":
            name, raw_args = raw.args
            return self._pred_app(raw, name, raw_args, scope)
        if kind == "cmp":
            op, lhs, rhs = raw.args
            left, right = self.term(lhs, scope), self.term(rhs, scope)
            ls, rs = term_sort(left), term_sort(right)
            if ls != rs:
                raise SortError(
                    f"comparison between {ls.value} and {rs.value} (line {raw.line})"
                )
            if ls is Sort.BOOL and op not in ("=", "!="):
                raise SortError(f"ordering {op} on booleans (line {raw.line})")
            return Cmp(op, left, right)
        if kind == "not":
            return Not(self.formula(raw.args[0], scope))
        if kind == "and":
            return conj(*(self.formula(a, scope) for a in raw.args))
        if kind == "or":
            return disj(*(self.formula(a, scope) for a in raw.args))
        if kind == "implies":
            premise = self.formula(raw.args[0], scope)
            return disj(Not(premise), self.formula(raw.args[1], scope))
        if kind in ("forall", "exists"):
            params, body = raw.args
            inner = dict(scope)
            binders = []
            for var, sort_name in params:
                actual = self.supply.fresh(var)
                sort = Sort(sort_name)
                inner[var] = (actual, sort)
                binders.append((actual, sort))
            result = self.formula(body, inner)
            node = Forall if kind == "forall" else Exists
            for actual, sort in reversed(binders):
                result = node(actual, sort, result)
            return result
        if kind in ("int", "neg", "add", "mul", "ite"):
            t = self.term(raw, scope)
            if term_sort(t) is not Sort.BOOL:
                raise SortError("integer term used as a formula")
            return Holds(t)
        raise SortError(f"unexpected {kind}")

    def _pred_app(self, raw: _Raw, name: str, raw_args, scope) -> Formula:
        psort = self.preds.get(name)
        if psort is not None:
            return PredApp(name, self._args(raw_args, psort.args, name, scope))
        fsort = self.funs.get(name)
        if fsort is not None and fsort.ret is Sort.BOOL:
            args = self._args(raw_args, fsort.args, name, scope)
            return Holds(FunApp(name, args, Sort.BOOL))
        raise UnboundPredicateError(
            f"undefined predicate {name} (line {raw.line}, col {raw.col})"
        )


def _collect_identifiers(raw: Any, out: set) -> None:
    if isinstance(raw, _Raw):
        if raw.kind in ("app", "eqn"):
            out.add(raw.args[0])
        if raw.kind == "eqn":
            out.update(name for name, _ in raw.args[1])
        for a in raw.args:
            _collect_identifiers(a, out)
    elif isinstance(raw, (tuple, list, pp.ParseResults)):
        for a in raw:
            _collect_identifiers(a, out)


def parse_muclp(text: str) -> Program:
    """Parse and resolve a MuCLP program.

    Args:
        text: Program text in the MuCLP grammar.

    Returns:
        Sort-checked program whose quantifier binders are globally fresh.

    Raises:
        ParseError: On syntax errors (with line and column).
        SortError: On ill-sorted terms or arity mismatches.
        DuplicateEquationError: If two equations share a head.
        UnboundPredicateError: If an undefined predicate is applied.
        OpenQueryError: If the query has free term variables.
    """
    parsed = _run("program", text)
    raw_query, raw_eqns = parsed[0], list(parsed[1])

    preds: Dict[str, FunSort] = {}
    for eqn in raw_eqns:
        head, params, _, _ = eqn.args
        if head in preds:
            raise DuplicateEquationError(
                f"equation for {head} defined twice (line {eqn.line})"
            )
        names = [p for p, _ in params]
        if len(set(names)) != len(names):
            raise SortError(
                f"repeated parameter in equation for {head} (line {eqn.line})"
            )
        preds[head] = FunSort(tuple(Sort(s) for _, s in params), Sort.PROP)

    taken: set = set()
    _collect_identifiers(list(parsed), taken)
    resolver = _Resolver(preds, supply=NameSupply(taken))

    equations = []
    for eqn in raw_eqns:
        head, params, kind, body = eqn.args
        typed = tuple((p, Sort(s)) for p, s in params)
        scope = {p: (p, s) for p, s in typed}
        resolved = resolver.formula(body, scope)
        equations.append(Equation(head, typed, Fixpoint(kind), resolved))
    resolver.in_query = True
    query = resolver.formula(raw_query, {})
    return Program(tuple(equations), query)


def parse_formula(
    text: str,
    variables: Mapping[str, Sort],
    preds: Optional[Mapping[str, FunSort]] = None,
    funs: Optional[Mapping[str, FunSort]] = None,
) -> Formula:
    """Parse a stand-alone formula over the given free variables.

    Used by the structured ``.lts``/``.game`` formats, which share the
    expression syntax of MuCLP programs.
    """
    parsed = _run("formula", text)
    taken = set(variables)
    _collect_identifiers(list(parsed), taken)
    resolver = _Resolver(
        dict(preds or {}),
        dict(funs or {}),
        NameSupply(taken),
        implicit_funs=funs is None,
    )
    scope = {name: (name, sort) for name, sort in variables.items()}
    return resolver.formula(parsed[0], scope)


def parse_term(text: str, variables: Mapping[str, Sort]) -> Term:
    parsed = _run("term", text)
    resolver = _Resolver({}, implicit_funs=False)
    return resolver.term(parsed[0], {n: (n, s) for n, s in variables.items()})


__all__: List[str] = ["parse_muclp", "parse_formula", "parse_term", "KEYWORDS"]
