"""Piecewise-affine templates for function variables."""

from __future__ import annotations

from typing import Iterator, List, Optional, Sequence

from ..errors import TemplateError
from ..logic.ast import Formula, Ite, Lambda, Sort, Term, conj
from ..logic.transform import fold_term
from .affine import Affine, Template, Theta, nonneg
from .params import FunctionParams


class FunctionTemplate(Template):
    """``ite(D_1, e_1, ite(D_2, e_2, ... e_nd))`` with affine pieces ``e_i``.

    Each discriminator ``D_i`` is a conjunction of ``nc`` affine atoms. The
    last piece is unguarded, so every instance is total.
    """

    def __init__(
        self,
        name: str,
        sorts: Sequence[Sort],
        record: FunctionParams,
        ret: Sort = Sort.INT,
    ) -> None:
        if ret is not Sort.INT:
            raise TemplateError(f"function variable {name} must return Int")
        self.name = name
        self.sorts = tuple(sorts)
        self.record = record
        arity = len(self.sorts)
        self.pieces = [
            Affine.fresh(f"{name}!e{i}", arity, record.ec, record.ed)
            for i in range(record.nd)
        ]
        self.guards = [
            [
                Affine.fresh(f"{name}!d{i}_{j}", arity, record.dc, record.dd)
                for j in range(record.nc)
            ]
            for i in range(record.nd - 1)
        ]

    def affines(self) -> Iterator[Affine]:
        yield from self.pieces
        for guard in self.guards:
            yield from guard

    def _build(self, args: Sequence[Term], theta: Optional[Theta] = None) -> Term:
        args = tuple(fold_term(a) for a in args)

        def piece(a: Affine) -> Term:
            return a.at(args) if theta is None else a.concrete(theta, args)

        def guard(row: List[Affine]) -> Formula:
            return conj(*(nonneg(piece(a)) for a in row))

        result = piece(self.pieces[-1])
        for i in range(len(self.pieces) - 2, -1, -1):
            result = Ite(guard(self.guards[i]), piece(self.pieces[i]), result)
        return result

    def apply(self, args: Sequence[Term]) -> Term:
        return self._build(args)

    def extract(self, theta: Theta) -> Lambda:
        return Lambda(self.params(), fold_term(self._build(self.formal_args(), theta)))
