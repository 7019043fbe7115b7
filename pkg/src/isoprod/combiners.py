"""Named closed-form combiners for distance tuples.

All but SQRT_SUM_SQ are exact on rationals; SQRT_SUM_SQ evaluates in
floating point and is flagged so callers keep it out of exact-equality
checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .points import rat

COMBINER_NAMES = ("SUM", "MAX", "SQRT_SUM_SQ", "CAPPED_SUM", "SQUARE_SUM")


@dataclass(frozen=True)
class Combiner:
    name: str
    fn: Callable[[Sequence[Fraction]], object]
    exact: bool = True

    def __call__(self, values: Sequence[Fraction]):
        return self.fn(values)


def named_combiner(name: str, cap=Fraction(1)) -> Combiner:
    """Look up a closed form by name; CAPPED_SUM takes the cap value."""
    if name == "SUM":
        return Combiner("SUM", lambda v: sum(v, Fraction(0)))
    if name == "MAX":
        return Combiner("MAX", lambda v: max(v))
    if name == "SQUARE_SUM":
        return Combiner("SQUARE_SUM", lambda v: sum((x * x for x in v), Fraction(0)))
    if name == "SQRT_SUM_SQ":
        return Combiner(
            "SQRT_SUM_SQ",
            lambda v: math.sqrt(float(sum(x * x for x in v))),
            exact=False,
        )
    if name == "CAPPED_SUM":
        cap = rat(cap)
        if cap <= 0:
            raise ValueError(f"cap must be positive, got {cap}")
        return Combiner("CAPPED_SUM", lambda v: min(cap, sum(v, Fraction(0))))
    raise ValueError(f"unknown combiner {name!r}; expected one of {COMBINER_NAMES}")
