"""DNF templates for ordinary predicate variables."""

from __future__ import annotations

import itertools
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..errors import TemplateError
from ..logic.ast import (
    BOT,
    BoolLit,
    Formula,
    Holds,
    Lambda,
    Not,
    Sort,
    TOP,
    Term,
    conj,
    disj,
)
from ..logic.transform import fold_term, simplify
from .affine import Affine, Template, Theta, nonneg
from .params import OrdinaryParams

Valuation = Tuple[bool, ...]


class PredicateTemplate(Template):
    """``\\/_i /\\_j c_ij0 + sum_k c_ijk * x_k >= 0`` over the Int arguments.

    A predicate with Boolean parameters gets one independent DNF per
    valuation of those parameters.

    Attributes:
        name: Predicate variable.
        sorts: Argument sorts.
        record: Template parameters.
        blocks: DNF atoms per Boolean valuation, indexed ``[i][j]``.
    """

    def __init__(
        self,
        name: str,
        sorts: Sequence[Sort],
        record: OrdinaryParams,
        bool_split_cap: int = 6,
    ) -> None:
        self.name = name
        self.sorts = tuple(sorts)
        self.record = record
        self.int_pos = [k for k, s in enumerate(self.sorts) if s is not Sort.BOOL]
        self.bool_pos = [k for k, s in enumerate(self.sorts) if s is Sort.BOOL]
        if len(self.bool_pos) > bool_split_cap:
            raise TemplateError(
                f"{name} has {len(self.bool_pos)} Boolean parameters; "
                f"the case-split cap is {bool_split_cap}"
            )
        self.blocks: Dict[Valuation, List[List[Affine]]] = {}
        valuations = itertools.product((False, True), repeat=len(self.bool_pos))
        arity = len(self.int_pos)
        for v, valuation in enumerate(valuations):
            tag = f"{name}!{v}" if self.bool_pos else name
            self.blocks[valuation] = [
                [
                    Affine.fresh(f"{tag}!c{i}_{j}", arity, record.ac, record.ad)
                    for j in range(record.nc)
                ]
                for i in range(record.nd)
            ]

    def affines(self) -> Iterator[Affine]:
        for block in self.blocks.values():
            for row in block:
                yield from row

    def _selector(self, valuation: Valuation, args: Sequence[Term]) -> Formula:
        parts: List[Formula] = []
        for k, wanted in zip(self.bool_pos, valuation):
            arg = args[k]
            if isinstance(arg, BoolLit):
                if arg.value != wanted:
                    return BOT
                continue
            parts.append(Holds(arg) if wanted else Not(Holds(arg)))
        return conj(*parts)

    def _dnf(
        self,
        block: List[List[Affine]],
        int_args: Sequence[Term],
        theta: Optional[Theta],
    ) -> Formula:
        if theta is None:
            rows = [conj(*(nonneg(a.at(int_args)) for a in row)) for row in block]
            return disj(*rows)
        rows = [
            conj(*(nonneg(a.concrete(theta, int_args)) for a in row)) for row in block
        ]
        return simplify(disj(*rows))

    def _build(self, args: Sequence[Term], theta: Optional[Theta] = None) -> Formula:
        args = tuple(fold_term(a) for a in args)
        int_args = [args[k] for k in self.int_pos]
        cases = []
        for valuation, block in self.blocks.items():
            selector = self._selector(valuation, args)
            if selector == BOT:
                continue
            dnf = self._dnf(block, int_args, theta)
            cases.append(dnf if selector == TOP else conj(selector, dnf))
        return disj(*cases)

    def apply(self, args: Sequence[Term]) -> Formula:
        return self._build(args)

    def extract(self, theta: Theta) -> Lambda:
        return Lambda(self.params(), simplify(self._build(self.formal_args(), theta)))
