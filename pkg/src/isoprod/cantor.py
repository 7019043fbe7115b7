"""Exact base-3 machinery for the Cantor set and its dilation union.

Membership tests work on eventually periodic digit expansions, the
constructive distance decompositions return verified witness pairs, and
the three-point line search plus the interval-pair refutation settle
which line triangles embed into the dilation-closed Cantor set.  The
transcendental embedding adjoins a single symbol with certified
rational bounds; no comparison here ever needs its numeric value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import (
    AmbiguousComparisonError,
    NonTriadicDenominatorError,
    OutOfRangeError,
    RationalInputError,
)
from .points import RationalLike, rat


@dataclass(frozen=True)
class Base3Expansion:
    """An eventually periodic base-3 representation of a rational >= 0.

    integer_digits are most significant first with no leading zeros;
    an empty period means the expansion terminates.
    """

    integer_digits: tuple[int, ...]
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        for d in (*self.integer_digits, *self.preperiod, *self.period):
            if d not in (0, 1, 2):
                raise ValueError(f"invalid base-3 digit {d}")
        if self.integer_digits and self.integer_digits[0] == 0:
            raise ValueError("integer digits must not have leading zeros")

    def to_fraction(self) -> Fraction:
        value = Fraction(0)
        for d in self.integer_digits:
            value = value * 3 + d
        scale = Fraction(1)
        for d in self.preperiod:
            scale /= 3
            value += d * scale
        if self.period:
            length = len(self.period)
            block = 0
            for d in self.period:
                block = block * 3 + d
            value += Fraction(block, 3**length - 1) * scale
        return value

    def all_digits(self) -> tuple[int, ...]:
        return self.integer_digits + self.preperiod + self.period

    def uses_only(self, allowed: frozenset[int] = frozenset({0, 2})) -> bool:
        return all(d in allowed for d in self.all_digits())

    def is_terminating(self) -> bool:
        return not self.period

    def alternate(self) -> Optional["Base3Expansion"]:
        """The other expansion of the same value, when one exists.

        A nonzero terminating expansion also has a two-tail form and
        vice versa; any other expansion is unique and None is returned.
        """
        if self.is_terminating():
            digits = list(self.integer_digits + self.preperiod)
            last = None
            for i, d in enumerate(digits):
                if d != 0:
                    last = i
            if last is None:
                return None
            digits[last] -= 1
            for i in range(last + 1, len(digits)):
                digits[i] = 2
            n_int = len(self.integer_digits)
            integer = tuple(digits[:n_int])
            while integer and integer[0] == 0:
                integer = integer[1:]
            return Base3Expansion(integer, tuple(digits[n_int:]), (2,))
        if self.period == (2,):
            return to_base3(self.to_fraction())
        return None


def to_base3(t: RationalLike) -> Base3Expansion:
    """Canonical base-3 expansion of a nonnegative rational, by long division.

    Terminates exactly when the reduced denominator is a power of 3;
    the canonical form never ends in an all-2 tail.
    """
    t = rat(t)
    if t < 0:
        raise ValueError(f"expected a nonnegative rational, got {t}")
    whole = t.numerator // t.denominator
    integer_digits = []
    while whole:
        whole, d = divmod(whole, 3)
        integer_digits.append(d)
    integer_digits.reverse()

    frac = t - (t.numerator // t.denominator)
    num, den = frac.numerator, frac.denominator
    digits: list[int] = []
    seen: dict[int, int] = {}
    while num and num not in seen:
        seen[num] = len(digits)
        num *= 3
        d, num = divmod(num, den)
        digits.append(d)
    if num == 0:
        return Base3Expansion(tuple(integer_digits), tuple(digits), ())
    cut = seen[num]
    return Base3Expansion(tuple(integer_digits), tuple(digits[:cut]), tuple(digits[cut:]))


def _has_two_zero_expansion(t: Fraction) -> bool:
    expansion = to_base3(t)
    if expansion.uses_only():
        return True
    alternate = expansion.alternate()
    return alternate is not None and alternate.uses_only()


def in_cantor(t: RationalLike) -> bool:
    """Membership of a rational in the middle-thirds Cantor set.

    True when t lies in [0, 1] and at least one of its base-3
    expansions avoids the digit 1.
    """
    t = rat(t)
    if t < 0 or t > 1:
        return False
    return _has_two_zero_expansion(t)


def in_scaled_cantor(t: RationalLike) -> bool:
    """Membership in the union of the Cantor set with all its 3^n dilates.

    True when some base-3 expansion of t, integer and fractional digits
    together, avoids the digit 1.
    """
    t = rat(t)
    if t < 0:
        return False
    return _has_two_zero_expansion(t)


def _require_triadic(t: Fraction) -> int:
    """The exponent k with denominator 3^k, or an error."""
    den = t.denominator
    k = 0
    while den % 3 == 0:
        den //= 3
        k += 1
    if den != 1:
        raise NonTriadicDenominatorError(
            f"denominator of {t} is not a power of three"
        )
    return k


_AVERAGE_DIGIT_SPLIT = {0: (0, 0), 1: (2, 0), 2: (2, 2)}


def cantor_decompose(t: RationalLike) -> tuple[Fraction, Fraction]:
    """Two Cantor-set rationals at exact distance t, for triadic t in [0, 1].

    Writes (1 + t)/2 in base 3 and splits each digit into a pair of
    digits from {0, 2} averaging to it; the two split values u, v then
    satisfy u + v = 1 + t, and (u, 1 - v) is the witness pair.  The
    postcondition is re-verified before returning.
    """
    t = rat(t)
    if t < 0 or t > 1:
        raise OutOfRangeError(f"{t} lies outside [0, 1]")
    _require_triadic(t)
    if t == 0:
        return Fraction(0), Fraction(0)
    if t == 1:
        return Fraction(1), Fraction(0)

    w = (1 + t) / 2
    expansion = to_base3(w)
    assert not expansion.integer_digits
    pre_u, pre_v, per_u, per_v = [], [], [], []
    for d in expansion.preperiod:
        a, b = _AVERAGE_DIGIT_SPLIT[d]
        pre_u.append(a)
        pre_v.append(b)
    for d in expansion.period:
        a, b = _AVERAGE_DIGIT_SPLIT[d]
        per_u.append(a)
        per_v.append(b)
    u = Base3Expansion((), tuple(pre_u), tuple(per_u)).to_fraction()
    v = Base3Expansion((), tuple(pre_v), tuple(per_v)).to_fraction()
    x, y = u, 1 - v
    assert x - y == t and in_cantor(x) and in_cantor(y)
    return x, y


def scaled_cantor_distance_witness(t: RationalLike) -> tuple[Fraction, Fraction]:
    """Two members of the dilated Cantor union at exact distance t >= 0.

    Scales t into [0, 1] by a power of three, decomposes there and
    scales the witness pair back; membership is re-verified by the
    digit test, not assumed.
    """
    t = rat(t)
    if t < 0:
        raise OutOfRangeError(f"{t} is negative")
    _require_triadic(t)
    power = 0
    scaled = t
    while scaled > 1:
        scaled /= 3
        power += 1
    x0, y0 = cantor_decompose(scaled)
    x, y = x0 * 3**power, y0 * 3**power
    assert x - y == t and in_scaled_cantor(x) and in_scaled_cantor(y)
    return x, y


def cantor_level_starts(level: int) -> list[int]:
    """Left endpoints of the level-k Cantor intervals, in units of 3^-k."""
    if level < 1:
        raise ValueError("level must be at least 1")
    starts = []
    for digits in itertools.product((0, 2), repeat=level):
        value = 0
        for d in digits:
            value = value * 3 + d
        starts.append(value)
    return starts


def scaled_cantor_level_set(level: int, upper: int = 3) -> list[Fraction]:
    """Endpoints of the level-k intervals of the dilated Cantor union in [0, upper].

    The dilation union meets [0, 3] in the Cantor set plus its triple,
    so the endpoint set is the union of both endpoint families.
    """
    scale = Fraction(3) ** -level
    endpoints = set()
    for p in cantor_level_starts(level):
        for e in (p * scale, (p + 1) * scale):
            if e <= upper:
                endpoints.add(e)
            if 3 * e <= upper:
                endpoints.add(3 * e)
    return sorted(endpoints)


def three_point_search(
    values: Iterable[RationalLike], a: RationalLike, b: RationalLike
) -> Optional[tuple[Fraction, Fraction, Fraction]]:
    """Find a line triangle with gaps a, b inside a finite set, exactly.

    Searches for x1, x2, x3 with |x1-x2| = a, |x2-x3| = b and
    |x1-x3| = a + b.  Every satisfying triple has x2 = x1 +- a and
    x3 = x2 +- b, so scanning those candidates over the whole set is an
    exhaustive search; None is only returned when no triple exists.
    """
    a, b = rat(a), rat(b)
    if a <= 0 or b <= 0:
        raise ValueError("gaps must be positive")
    ordered = sorted({rat(v) for v in values})
    members = set(ordered)
    for x1 in ordered:
        for x2 in (x1 + a, x1 - a):
            if x2 not in members:
                continue
            for x3 in (x2 + b, x2 - b):
                if x3 in members and abs(x1 - x3) == a + b:
                    return x1, x2, x3
    return None


@dataclass(frozen=True)
class ComboEvidence:
    """Interval pairs clustering at one limit combination."""

    x_star: Fraction
    y_star: Fraction
    pair_count: int
    example: tuple[Fraction, Fraction]


@dataclass(frozen=True)
class TripleRefutationReport:
    level: int
    candidate_rejections: tuple[tuple[Fraction, str], ...]
    combos: tuple[ComboEvidence, ...]
    stray_pairs: tuple[tuple[Fraction, Fraction], ...]
    gap_holds: bool
    ok: bool

    def to_jsonable(self) -> dict:
        return {
            "level": self.level,
            "candidate_rejections": [
                {"value": str(v), "reason": r} for v, r in self.candidate_rejections
            ],
            "combos": [
                {
                    "x_star": str(c.x_star),
                    "y_star": str(c.y_star),
                    "pair_count": c.pair_count,
                    "example": [str(c.example[0]), str(c.example[1])],
                }
                for c in self.combos
            ],
            "stray_pairs": [[str(a), str(b)] for a, b in self.stray_pairs],
            "gap_holds": self.gap_holds,
            "ok": self.ok,
        }


def scaled_cantor_triple_refutation(level: int = 10) -> TripleRefutationReport:
    """Mechanical evidence that no dilated-Cantor triple has gaps 1/3 and 1/6.

    Three facts are verified: the five offset candidates at distance
    1/6 from a gap-1/3 pair are rejected (three by digit membership,
    two by range); every pair of level-k Cantor intervals able to
    realize a difference of 1/3 hugs one of the six limit endpoint
    combinations, all six occurring; and no level-k interval meets the
    open middle third.
    """
    if level < 2:
        raise ValueError("level must be at least 2 to resolve thirds")
    third = Fraction(3) ** (level - 1)
    scale = Fraction(3) ** -level

    rejections = []
    for z in (Fraction(-1, 6), Fraction(7, 6)):
        assert not (0 <= z <= 1)
        rejections.append((z, "outside [0, 1]"))
    for z in (Fraction(1, 6), Fraction(1, 2), Fraction(5, 6)):
        assert not in_cantor(z)
        rejections.append((z, "no digit-{0,2} expansion"))
    rejections.sort(key=lambda item: item[0])

    starts = cantor_level_starts(level)
    member = set(starts)
    combos = (
        (0, third),
        (third, 2 * third),
        (2 * third, 3 * third),
        (third, 0),
        (2 * third, third),
        (3 * third, 2 * third),
    )
    counts = {pair: 0 for pair in combos}
    examples: dict[tuple[int, int], tuple[int, int]] = {}
    strays = []
    deltas = (third - 1, third, third + 1, -(third - 1), -third, -(third + 1))
    for p in starts:
        for delta in deltas:
            q = p - delta
            if q not in member:
                continue
            matched = None
            for cx, cy in combos:
                if abs(p - cx) <= 1 and abs(q - cy) <= 1:
                    matched = (cx, cy)
                    break
            if matched is None:
                strays.append((p * scale, q * scale))
            else:
                counts[matched] += 1
                examples.setdefault(matched, (p, q))

    combo_evidence = tuple(
        ComboEvidence(
            x_star=cx * scale,
            y_star=cy * scale,
            pair_count=counts[(cx, cy)],
            example=(
                examples[(cx, cy)][0] * scale,
                examples[(cx, cy)][1] * scale,
            )
            if (cx, cy) in examples
            else (Fraction(-1), Fraction(-1)),
        )
        for cx, cy in combos
    )
    gap_holds = all(p + 1 <= third or p >= 2 * third for p in starts)
    ok = (
        not strays
        and all(counts[pair] > 0 for pair in combos)
        and gap_holds
        and len(rejections) == 5
    )
    return TripleRefutationReport(
        level=level,
        candidate_rejections=tuple(rejections),
        combos=combo_evidence,
        stray_pairs=tuple(strays),
        gap_holds=gap_holds,
        ok=ok,
    )


TAU_LOWER = Fraction(314159, 100000)
TAU_UPPER = Fraction(31416, 10000)


@dataclass(frozen=True)
class SymbolicAffine:
    """A value q + r*tau for one fixed transcendental symbol tau.

    Addition and subtraction act componentwise; the value is rational
    exactly when r = 0.  Order comparisons use the certified rational
    bounds on tau and raise when a comparison would genuinely depend on
    sharper bounds.
    """

    q: Fraction
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        object.__setattr__(self, "r", Fraction(self.r))

    def is_rational(self) -> bool:
        return self.r == 0

    @staticmethod
    def _coerce(other) -> "SymbolicAffine":
        if isinstance(other, SymbolicAffine):
            return other
        return SymbolicAffine(rat(other), Fraction(0))

    def __add__(self, other):
        other = self._coerce(other)
        return SymbolicAffine(self.q + other.q, self.r + other.r)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return SymbolicAffine(self.q - other.q, self.r - other.r)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return SymbolicAffine(-self.q, -self.r)

    def sign(self) -> int:
        """Certified sign, from the rational bounds on the symbol."""
        if self.r == 0:
            return (self.q > 0) - (self.q < 0)
        if self.r > 0:
            if self.q + self.r * TAU_LOWER >= 0:
                return 1
            if self.q + self.r * TAU_UPPER <= 0:
                return -1
        else:
            if self.q + self.r * TAU_UPPER >= 0:
                return 1
            if self.q + self.r * TAU_LOWER <= 0:
                return -1
        raise AmbiguousComparisonError(
            f"sign of {self} depends on sharper bounds for the symbol"
        )

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other)).sign() >= 0

    def __str__(self):
        return f"{self.q} + {self.r}*tau"


def transcendental_embed(values: Iterable[RationalLike]) -> dict[Fraction, SymbolicAffine]:
    """Shift a finite set of rationals by the transcendental symbol.

    Every image has symbol coefficient 1, hence lies outside the
    rationals, while all pairwise differences stay rational and equal
    the original differences exactly: an isometric embedding.
    """
    return {rat(v): SymbolicAffine(rat(v), Fraction(1)) for v in values}


@dataclass(frozen=True)
class RationalSubspaceRefutation:
    """Certificate that a distance with nonzero symbol part is never realized by rationals."""

    value: SymbolicAffine
    tau_coefficient: Fraction
    statement: str


def rational_subspace_refutation(a: SymbolicAffine) -> RationalSubspaceRefutation:
    """Certify that no two rationals lie at distance a, for a with symbol part.

    The difference of two rationals has symbol coefficient 0; a value
    with a nonzero coefficient can therefore never be such a difference.
    """
    if a.r == 0:
        raise RationalInputError(f"{a} is rational; the refutation needs r != 0")
    return RationalSubspaceRefutation(
        value=a,
        tau_coefficient=a.r,
        statement=(
            f"every difference of two rationals has tau-coefficient 0, but "
            f"{a} has tau-coefficient {a.r} != 0; no rational pair realizes it"
        ),
    )
