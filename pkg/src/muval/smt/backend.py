"""Validity and satisfiability queries against an external SMT-LIB2 solver."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..errors import InternalSolverError, SmtBackendError, SortError
from ..logic.ast import Forall, Formula, FunSort, Lambda, Not, Sort, Term, Var
from ..logic.transform import free_vars, fun_apps, pred_apps, term_sort
from .printer import declare_const, declare_fun, named, smt_formula, smt_term
from .process import SmtProcess
from .sexpr import (
    SExpr,
    SymbolTable,
    parse_sort,
    symbol,
    to_formula,
    to_term,
    to_value,
)

logger = logging.getLogger(__name__)

Value = Union[int, bool]


class Status(str, Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


@dataclass
class SmtQuery:
    """One self-contained satisfiability query.

    Attributes:
        consts: Declared constants and their sorts.
        funs: Declared uninterpreted functions/predicates.
        assertions: ``(name, formula)`` pairs; a ``None`` name asserts anonymously.
        logic: SMT-LIB logic string.
        values: Terms whose model values are requested on ``sat``.
        unsat_core: Whether to request an unsat core on ``unsat``.
    """

    consts: Dict[str, Sort] = field(default_factory=dict)
    funs: Dict[str, FunSort] = field(default_factory=dict)
    assertions: List[Tuple[Optional[str], Formula]] = field(default_factory=list)
    logic: str = "QF_LIA"
    values: Sequence[Term] = ()
    unsat_core: bool = False


@dataclass
class SmtOutcome:
    status: Status
    values: Dict[Term, Value] = field(default_factory=dict)
    core: Tuple[str, ...] = ()
    reason: str = ""


@dataclass
class ValidityResult:
    """Outcome of a validity check.

    ``valid`` is ``True``/``False``, or ``None`` when the backend gave no answer.
    ``countermodel`` assigns the prefix variables on ``False``.
    """

    valid: Optional[bool]
    countermodel: Dict[str, Value] = field(default_factory=dict)
    reason: str = ""


def split_prefix(f: Formula) -> Tuple[List[Tuple[str, Sort]], Formula]:
    prefix = []
    while isinstance(f, Forall):
        prefix.append((f.var, f.sort))
        f = f.body
    return prefix, f


class SmtBackend:
    """Process-backed solver front end; one instance per CEGIS run.

    Args:
        command: Executable and arguments (e.g. ``["z3", "-in", "-smt2"]``).
        timeout: Per-query limit in seconds, also enforced by a watchdog.
        seed: Random seed passed to the solver.
        verify_cores: Re-check every unsat core with a follow-up query and
            raise :class:`InternalSolverError` when it is not unsatisfiable.
    """

    def __init__(
        self,
        command: Sequence[str],
        timeout: Optional[float] = 10.0,
        seed: Optional[int] = None,
        verify_cores: bool = False,
    ) -> None:
        hard_limit = None if timeout is None else timeout + 5.0
        self.process = SmtProcess(command, hard_limit)
        self.timeout = timeout
        self.seed = seed
        self.verify_cores = verify_cores
        self.calls = 0

    def _preamble(self, query: SmtQuery) -> List[str]:
        lines = ["(reset)", "(set-option :print-success false)"]
        lines.append("(set-option :produce-models true)")
        if query.unsat_core:
            lines.append("(set-option :produce-unsat-cores true)")
        if self.seed is not None:
            lines.append(f"(set-option :random-seed {self.seed})")
        if self.timeout is not None:
            lines.append(f"(set-option :timeout {int(self.timeout * 1000)})")
        lines.append(f"(set-logic {query.logic})")
        for name, sort in query.consts.items():
            lines.append(declare_const(name, sort))
        for name, fsort in query.funs.items():
            lines.append(declare_fun(name, fsort))
        for name, f in query.assertions:
            if name is not None and query.unsat_core:
                body = named(f, name)
            else:
                body = smt_formula(f)
            lines.append(f"(assert {body})")
        return lines

    def check_sat_named(self, query: SmtQuery) -> SmtOutcome:
        """Run one query; backend failures become ``UNKNOWN`` with a reason."""
        try:
            return self._check(query)
        except SmtBackendError as exc:
            logger.warning("SMT backend failure: %s", exc)
            return SmtOutcome(Status.UNKNOWN, reason=str(exc))

    def _check(self, query: SmtQuery) -> SmtOutcome:
        self.calls += 1
        responses = self.process.request(self._preamble(query) + ["(check-sat)"])
        status = _status(responses)
        if status is Status.SAT:
            values: Dict[Term, Value] = {}
            if query.values:
                terms = " ".join(smt_term(t) for t in query.values)
                reply = self.process.request([f"(get-value ({terms}))"])
                values = _values(reply, query.values)
            return SmtOutcome(status, values=values)
        if status is Status.UNSAT:
            core: Tuple[str, ...] = ()
            if query.unsat_core:
                reply = self.process.request(["(get-unsat-core)"])
                core = _core(reply)
                if self.verify_cores:
                    self._recheck_core(query, core)
            return SmtOutcome(status, core=core)
        reply = self.process.request(["(get-info :reason-unknown)"])
        return SmtOutcome(Status.UNKNOWN, reason=_reason(reply))

    def _recheck_core(self, query: SmtQuery, core: Tuple[str, ...]) -> None:
        wanted = set(core)
        sub = SmtQuery(
            consts=query.consts,
            funs=query.funs,
            assertions=[
                (n, f) for n, f in query.assertions if n is None or n in wanted
            ],
            logic=query.logic,
        )
        responses = self.process.request(self._preamble(sub) + ["(check-sat)"])
        if _status(responses) is not Status.UNSAT:
            raise InternalSolverError(
                f"unsat core {sorted(wanted)} does not re-check as unsat"
            )

    def check_validity(self, f: Formula) -> ValidityResult:
        """Decide a universally quantified formula with a quantifier-free matrix.

        The negated matrix is asserted over fresh constants; a model is a
        countermodel restricted to the prefix (and otherwise free) variables.
        """
        prefix, matrix = split_prefix(f)
        variables = dict(prefix)
        for name, sort in free_vars(matrix).items():
            variables.setdefault(name, sort)
        funs = {}
        for app in fun_apps(matrix):
            funs[app.name] = FunSort(tuple(term_sort(a) for a in app.args), app.sort)
        if any(True for _ in pred_apps(matrix)):
            raise SortError("validity check on a formula with predicate variables")
        query = SmtQuery(
            consts=variables,
            funs=funs,
            assertions=[(None, Not(matrix))],
            logic="QF_UFLIA" if funs else "QF_LIA",
            values=tuple(Var(n, s) for n, s in variables.items()),
        )
        outcome = self.check_sat_named(query)
        if outcome.status is Status.UNSAT:
            return ValidityResult(True)
        if outcome.status is Status.SAT:
            model = {t.name: v for t, v in outcome.values.items() if isinstance(t, Var)}
            return ValidityResult(False, countermodel=model)
        return ValidityResult(None, reason=outcome.reason or "unknown")

    def close(self) -> None:
        self.process.close()

    def kill(self) -> None:
        self.process.kill()

    def __enter__(self) -> "SmtBackend":
        return self

    def __exit__(self, *exc: object) -> None:
        self.close()


# --------------------------------------------------------------------------
# Response parsing


def _raise_on_error(responses: List[SExpr]) -> None:
    for r in responses:
        if isinstance(r, list) and r and r[0] == "error":
            raise SmtBackendError(f"solver error: {' '.join(map(str, r[1:]))}", str(r))


def _status(responses: List[SExpr]) -> Status:
    _raise_on_error(responses)
    atoms = [r for r in responses if isinstance(r, str)]
    if len(atoms) != 1 or atoms[0] not in ("sat", "unsat", "unknown"):
        raise SmtBackendError("unexpected check-sat response", str(responses))
    return Status(atoms[0])


def _values(responses: List[SExpr], requested: Sequence[Term]) -> Dict[Term, Value]:
    _raise_on_error(responses)
    if len(responses) != 1 or not isinstance(responses[0], list):
        raise SmtBackendError("unexpected get-value response", str(responses))
    pairs = responses[0]
    if len(pairs) != len(requested):
        raise SmtBackendError(
            "get-value returned the wrong number of entries", str(pairs)
        )
    out: Dict[Term, Value] = {}
    for term, pair in zip(requested, pairs):
        if not isinstance(pair, list) or len(pair) != 2:
            raise SmtBackendError("malformed get-value entry", str(pair))
        try:
            out[term] = to_value(pair[1])
        except SortError as exc:
            raise SmtBackendError(f"non-integer model value: {exc}", str(pair)) from exc
    return out


def _core(responses: List[SExpr]) -> Tuple[str, ...]:
    _raise_on_error(responses)
    if len(responses) != 1 or not isinstance(responses[0], list):
        raise SmtBackendError("unexpected get-unsat-core response", str(responses))
    return tuple(symbol(n) for n in responses[0] if isinstance(n, str))


def _reason(responses: List[SExpr]) -> str:
    for r in responses:
        if isinstance(r, list) and len(r) >= 2:
            return str(r[1]).strip('"')
    return "unknown"


def parse_model(model: SExpr, table: SymbolTable) -> Dict[str, Union[Value, Lambda]]:
    """Convert a ``(get-model)`` reply into constant values and lambdas.

    Accepts both ``((define-fun ...) ...)`` and ``(model (define-fun ...) ...)``.
    """
    if not isinstance(model, list):
        raise SmtBackendError("model is not a list", str(model))
    entries = model[1:] if model and model[0] == "model" else model
    out: Dict[str, Union[Value, Lambda]] = {}
    for entry in entries:
        if not (
            isinstance(entry, list) and len(entry) == 5 and entry[0] == "define-fun"
        ):
            raise SmtBackendError("unexpected model entry", str(entry))
        _, name, params, ret, body = entry
        name = symbol(name)
        binders = tuple((symbol(v), parse_sort(s)) for v, s in params)
        ret_sort = parse_sort(ret)
        scope = table.bind(dict(binders))
        if not binders:
            try:
                out[name] = to_value(body)
                continue
            except SortError:
                pass
        if ret_sort is Sort.BOOL:
            converted = to_formula(body, scope)
        else:
            converted = to_term(body, scope)
        out[name] = Lambda(binders, converted)
    return out

