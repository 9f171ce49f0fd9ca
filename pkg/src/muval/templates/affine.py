"""Affine expressions with unknown integer coefficients."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable, List, Mapping, Sequence, Tuple, Union

from ..logic.ast import (
    Cmp,
    Formula,
    IntLit,
    Ite,
    Lambda,
    Mul,
    Params,
    Sort,
    Term,
    Var,
    add,
    as_formula,
    conj,
)
from ..logic.transform import fold_term, term_sort

Theta = Mapping[str, int]


def unknown(name: str) -> Var:
    return Var(name, Sort.INT)


def as_int(t: Term) -> Term:
    """Integer coordinate of a template argument; Booleans become 0/1."""
    if term_sort(t) is Sort.BOOL:
        return fold_term(Ite(as_formula(t), IntLit(1), IntLit(0)))
    return t


def scale(coeff: str, t: Term, bound: int) -> Term:
    """``coeff * t`` kept linear.

    A literal ``t`` gives an ordinary scalar product; otherwise the product
    is split over every value ``coeff`` may take, ``|coeff| <= bound``.
    """
    t = fold_term(t)
    c = unknown(coeff)
    if isinstance(t, IntLit):
        if t.value == 0:
            return IntLit(0)
        return c if t.value == 1 else Mul(t.value, c)
    result: Term = fold_term(Mul(bound, t))
    for k in range(bound - 1, -bound - 1, -1):
        result = Ite(Cmp("=", c, IntLit(k)), fold_term(Mul(k, t)), result)
    return result


@dataclass(frozen=True)
class Affine:
    """``const + sum coeffs[k] * x_k`` over unknown coefficients.

    Attributes:
        const: Unknown for the constant term.
        coeffs: Unknowns for the variable coefficients.
        coeff_bound: Bound on the sum of absolute coefficients.
        const_bound: Bound on the absolute constant.
    """

    const: str
    coeffs: Tuple[str, ...]
    coeff_bound: int
    const_bound: int

    @classmethod
    def fresh(
        cls, prefix: str, arity: int, coeff_bound: int, const_bound: int
    ) -> "Affine":
        return cls(
            f"{prefix}_0",
            tuple(f"{prefix}_{k + 1}" for k in range(arity)),
            coeff_bound,
            const_bound,
        )

    @property
    def unknowns(self) -> Tuple[str, ...]:
        return (self.const,) + self.coeffs

    def aux(self) -> Tuple[str, ...]:
        return tuple(f"{c}!abs" for c in self.coeffs)

    def at(self, args: Sequence[Term]) -> Term:
        """The expression at ``args``, over the unknowns."""
        parts = [
            scale(c, as_int(a), self.coeff_bound) for c, a in zip(self.coeffs, args)
        ]
        return add(unknown(self.const), *parts)

    def concrete(self, theta: Theta, args: Sequence[Term]) -> Term:
        """The expression at ``args`` with coefficients taken from ``theta``."""
        parts = [Mul(theta.get(c, 0), as_int(a)) for c, a in zip(self.coeffs, args)]
        return fold_term(add(IntLit(theta.get(self.const, 0)), *parts))

    def shape(self) -> Formula:
        """``sum |c_k| <= coeff_bound`` and ``|const| <= const_bound``.

        Absolute values use one auxiliary unknown per coefficient, so the
        constraint stays a conjunction.
        """
        parts: List[Formula] = [
            Cmp("<=", unknown(self.const), IntLit(self.const_bound)),
            Cmp(">=", unknown(self.const), IntLit(-self.const_bound)),
        ]
        for c, u in zip(self.coeffs, self.aux()):
            parts.append(Cmp(">=", unknown(u), unknown(c)))
            parts.append(Cmp(">=", unknown(u), Mul(-1, unknown(c))))
        if self.coeffs:
            total = add(*(unknown(u) for u in self.aux()))
            parts.append(Cmp("<=", total, IntLit(self.coeff_bound)))
        return conj(*parts)


def nonneg(t: Term) -> Formula:
    return Cmp(">=", t, IntLit(0))


def formal_params(sorts: Sequence[Sort]) -> Params:
    return tuple((f"x{i}", s) for i, s in enumerate(sorts))


class Template(ABC):
    """A family member for one function or predicate variable.

    Attributes:
        name: The variable the template stands for.
        sorts: Argument sorts of the variable.
    """

    name: str
    sorts: Tuple[Sort, ...]

    @abstractmethod
    def affines(self) -> Iterable[Affine]:
        """Every affine building block, in a fixed order."""

    @abstractmethod
    def apply(self, args: Sequence[Term]) -> Union[Formula, Term]:
        """The skeleton at ``args``; coefficients stay unknown."""

    @abstractmethod
    def extract(self, theta: Theta) -> Lambda:
        """The closed candidate for ``theta`` with constants folded."""

    def unknowns(self) -> Tuple[str, ...]:
        out: List[str] = []
        for a in self.affines():
            out.extend(a.unknowns)
        return tuple(out)

    def shape(self) -> Formula:
        return conj(*(a.shape() for a in self.affines()))

    def params(self) -> Params:
        return formal_params(self.sorts)

    def formal_args(self) -> Tuple[Term, ...]:
        return tuple(Var(n, s) for n, s in self.params())
