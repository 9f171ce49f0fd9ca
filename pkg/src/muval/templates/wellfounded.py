"""Lexicographic piecewise-affine ranking templates for well-founded variables.

For a variable of arity ``2k`` the template relates ``x`` (the first ``k``
arguments) to ``y`` (the last ``k``). Level ``i`` has ``np`` affine pieces
``r_ij`` guarded by discriminators ``D_ij``; the relation holds when

* every applicable piece is non-negative at ``x``,
* at every level some discriminator applies at ``x`` and at ``y``,
* some level ``i`` strictly decreases while all earlier levels do not grow.

A level decreases when every applicable piece at ``x`` exceeds every
applicable piece at ``y``. Whatever the coefficients, the minimum applicable
piece per level is a measure into the naturals that drops lexicographically
along each edge, so every instance is well-founded.
"""

from __future__ import annotations

from typing import Iterator, List, Optional, Sequence

from ..errors import OddArityError
from ..logic.ast import TOP, Cmp, Formula, Lambda, Not, Sort, Term, conj, disj
from ..logic.transform import fold_term, simplify
from .affine import Affine, Template, Theta, nonneg
from .params import WfParams


class WellFoundedTemplate(Template):
    def __init__(self, name: str, sorts: Sequence[Sort], record: WfParams) -> None:
        if len(sorts) % 2:
            raise OddArityError(
                f"well-founded variable {name} has odd arity {len(sorts)}"
            )
        self.name = name
        self.sorts = tuple(sorts)
        self.record = record
        half = len(self.sorts) // 2
        self.ranks = [
            [
                Affine.fresh(f"{name}!r{i}_{j}", half, record.rc, record.rd)
                for j in range(record.np)
            ]
            for i in range(record.nl)
        ]
        guarded = record.np >= 2
        self.guards = [
            [
                [
                    Affine.fresh(f"{name}!d{i}_{j}_{m}", half, record.dc, record.dd)
                    for m in range(record.nc if guarded else 0)
                ]
                for j in range(record.np)
            ]
            for i in range(record.nl)
        ]

    def affines(self) -> Iterator[Affine]:
        for level in self.ranks:
            yield from level
        for level in self.guards:
            for row in level:
                yield from row

    def _build(self, args: Sequence[Term], theta: Optional[Theta] = None) -> Formula:
        args = tuple(fold_term(a) for a in args)
        half = len(args) // 2
        x, y = args[:half], args[half:]

        def value(a: Affine, at: Sequence[Term]) -> Term:
            return a.at(at) if theta is None else a.concrete(theta, at)

        def applies(i: int, j: int, at: Sequence[Term]) -> Formula:
            return conj(*(nonneg(value(a, at)) for a in self.guards[i][j]))

        def unless(*conds: Formula) -> List[Formula]:
            return [Not(c) for c in conds if c != TOP]

        def compare(op: str, i: int) -> Formula:
            parts = []
            for j, rx in enumerate(self.ranks[i]):
                for k, ry in enumerate(self.ranks[i]):
                    parts.append(
                        disj(
                            *unless(applies(i, j, x), applies(i, k, y)),
                            Cmp(op, value(rx, x), value(ry, y)),
                        )
                    )
            return conj(*parts)

        bounded = conj(
            *(
                disj(*unless(applies(i, j, x)), nonneg(value(r, x)))
                for i, level in enumerate(self.ranks)
                for j, r in enumerate(level)
            )
        )
        covered = conj(
            *(
                disj(*(applies(i, j, at) for j in range(len(self.ranks[i]))))
                for i in range(len(self.ranks))
                for at in (x, y)
            )
        )
        decrease = disj(
            *(
                conj(compare(">", i), *(compare(">=", m) for m in range(i)))
                for i in range(len(self.ranks))
            )
        )
        parts: List[Formula] = [bounded]
        if any(row for level in self.guards for row in level):
            parts.append(covered)
        parts.append(decrease)
        return conj(*parts)

    def apply(self, args: Sequence[Term]) -> Formula:
        return self._build(args)

    def extract(self, theta: Theta) -> Lambda:
        return Lambda(self.params(), simplify(self._build(self.formal_args(), theta)))
