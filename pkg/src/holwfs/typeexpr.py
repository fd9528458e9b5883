"""Simple types of the language: individuals, booleans, and arrows between them.

Three syntactic classes live here.  Functional types ``i^n -> i`` type
function symbols, predicate types ``rho_1 -> ... -> rho_n -> o`` type
predicates, and argument types (``i`` or a predicate type) type the
parameters of predicates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Iota:
    def __str__(self):
        return "i"


@dataclass(frozen=True)
class Omicron:
    def __str__(self):
        return "o"


@dataclass(frozen=True)
class FunArrow:
    """The functional type ``i -> ... -> i`` with ``arity`` arguments."""

    arity: int

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("function arity must be positive")

    def __str__(self):
        return "->".join(["i"] * (self.arity + 1))


@dataclass(frozen=True)
class PredArrow:
    arg: TypeExpr
    result: TypeExpr

    def __post_init__(self):
        if not is_argument(self.arg):
            raise ValueError(f"{self.arg} is not an argument type")
        if not is_predicate(self.result):
            raise ValueError(f"{self.result} is not a predicate type")

    def __str__(self):
        arg = str(self.arg)
        if isinstance(self.arg, PredArrow):
            arg = f"({arg})"
        return f"{arg}->{self.result}"


TypeExpr = Union[Iota, Omicron, FunArrow, PredArrow]

IOTA = Iota()
OMICRON = Omicron()


def is_predicate(t) -> bool:
    return isinstance(t, (Omicron, PredArrow))


def is_argument(t) -> bool:
    return isinstance(t, Iota) or is_predicate(t)


def arrow(*types) -> PredArrow:
    """``arrow(a, b, c)`` builds ``a -> b -> c`` (right associative)."""
    result = types[-1]
    for t in reversed(types[:-1]):
        result = PredArrow(t, result)
    return result


def flatten(t) -> tuple[tuple, TypeExpr]:
    """Split ``rho_1 -> ... -> rho_n -> o`` into its argument types and ``o``."""
    args = []
    while isinstance(t, PredArrow):
        args.append(t.arg)
        t = t.result
    return tuple(args), t


def order(t) -> int:
    """Type order: 0 for base types, otherwise 1 + max order of the arguments."""
    if isinstance(t, PredArrow):
        return max(order(t.arg) + 1, order(t.result))
    if isinstance(t, FunArrow):
        return 1
    return 0
