"""Totally ordered weight algebras with an absorbing maximal Error value."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Union

Weight = Union[int, float]

INT_MAX = 2**63 - 1
INF = math.inf
NEG_INF = -math.inf


def _plus_up(a: Weight, b: Weight) -> Weight:
    s = a + b
    return s if s <= INT_MAX else INF


def _plus_down(a: Weight, b: Weight) -> Weight:
    s = a + b
    return s if s <= INT_MAX else NEG_INF


def _max(a: Weight, b: Weight) -> Weight:
    s = a if a >= b else b
    return s if s <= INT_MAX else INF


@dataclass(frozen=True)
class WeightAlgebra:
    """(Weights, order, combine, neutral, Error).

    `descending` flips the order: a precedes b when a >= b (max-plus)."""

    name: str
    combine: Callable[[Weight, Weight], Weight]
    neutral: Weight
    error: Weight
    descending: bool = False

    def le(self, a: Weight, b: Weight) -> bool:
        return a >= b if self.descending else a <= b

    def better(self, a: Weight, b: Weight) -> bool:
        """Strictly precedes in the order."""
        return a > b if self.descending else a < b

    def minimum(self, a: Weight, b: Weight) -> Weight:
        return b if self.better(b, a) else a

    def min_of(self, values: Iterable[Weight]) -> Weight:
        best = self.error
        for x in values:
            if self.better(x, best):
                best = x
        return best

    def fold(self, values: Iterable[Weight]) -> Weight:
        acc = self.neutral
        for x in values:
            acc = self.combine(acc, x)
        return acc

    def is_error(self, a: Weight) -> bool:
        return a == self.error

    def validate_weight(self, a: Weight) -> None:
        if not isinstance(a, int) or isinstance(a, bool) or abs(a) > INT_MAX:
            raise ValueError(f"{self.name}: weight {a!r} is not a 64-bit integer")

    def to_json(self, a: Weight):
        return "ERROR" if self.is_error(a) else int(a)


MIN_PLUS = WeightAlgebra("min-plus", _plus_up, 0, INF)
MAX_PLUS = WeightAlgebra("max-plus", _plus_down, 0, NEG_INF, descending=True)
MIN_MAX = WeightAlgebra("min-max", _max, 0, INF)
# feasibility only: OK = 0 precedes Error
BOOLEAN = WeightAlgebra("boolean", _max, 0, INF)

ALGEBRAS = {a.name: a for a in (MIN_PLUS, MAX_PLUS, MIN_MAX, BOOLEAN)}


def get_algebra(name: str) -> WeightAlgebra:
    try:
        return ALGEBRAS[name]
    except KeyError:
        raise ValueError(f"unknown algebra {name!r}; expected one of {sorted(ALGEBRAS)}") from None
