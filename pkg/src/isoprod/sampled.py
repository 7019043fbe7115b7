"""Finite partial functions from rational points to nonnegative rationals.

A :class:`SampledFunction` carries finitely many exact samples and the
decision procedures for the three structural properties every other
module cares about: isotone, amenable, subadditive.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

from .errors import (
    DimensionMismatchError,
    EmptyDomainError,
    MissingOriginError,
    NotIsotoneError,
)
from .points import PointN, RationalLike, leq, origin, rat, sort_key


class SampledFunction:
    """A finite map A -> Q+ on points of one common dimension.

    Keys are distinct points (it is a function, not a relation), values
    are exact nonnegative rationals, and the domain is never empty.
    """

    __slots__ = ("_dim", "_entries", "_sorted_domain")

    def __init__(self, entries: dict[PointN, Fraction] | Iterable[tuple[PointN, RationalLike]]):
        if isinstance(entries, dict):
            items = list(entries.items())
        else:
            items = list(entries)
        if not items:
            raise EmptyDomainError("a sampled function needs at least one entry")
        table: dict[PointN, Fraction] = {}
        dim = items[0][0].dim
        for p, v in items:
            if p.dim != dim:
                raise DimensionMismatchError(
                    f"point {p} has dimension {p.dim}, expected {dim}"
                )
            value = rat(v)
            if value < 0:
                raise ValueError(f"negative value {value} at {p}")
            if p in table:
                raise ValueError(f"duplicate point {p}")
            table[p] = value
        self._dim = dim
        self._entries = table
        self._sorted_domain = tuple(sorted(table, key=sort_key))

    @classmethod
    def from_items(cls, items: Iterable[tuple[Iterable[RationalLike], RationalLike]]) -> "SampledFunction":
        """Build from ((coords...), value) pairs of rational-likes."""
        return cls([(PointN(tuple(rat(c) for c in coords)), v) for coords, v in items])

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def domain(self) -> tuple[PointN, ...]:
        """The sample points in lexicographic order."""
        return self._sorted_domain

    def items(self) -> list[tuple[PointN, Fraction]]:
        return [(p, self._entries[p]) for p in self._sorted_domain]

    def value(self, p: PointN) -> Fraction:
        return self._entries[p]

    __getitem__ = value

    def __contains__(self, p: PointN) -> bool:
        return p in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SampledFunction)
            and self._dim == other._dim
            and self._entries == other._entries
        )

    def __hash__(self):
        return hash((self._dim, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{p}: {v}" for p, v in self.items())
        return f"SampledFunction({{{body}}})"

    def has_origin(self) -> bool:
        return origin(self._dim) in self._entries

    def restrict(self, keep: Iterable[PointN]) -> "SampledFunction":
        subset = {p: self._entries[p] for p in keep}
        return SampledFunction(subset)


def is_isotone(f: SampledFunction) -> tuple[bool, Optional[tuple[PointN, PointN]]]:
    """Check order preservation on every comparable pair of samples.

    Returns (True, None) or (False, (x, y)) with x <= y but f(x) > f(y);
    the reported pair is the lexicographically least violation.
    """
    pts = f.domain
    for x in pts:
        fx = f.value(x)
        for y in pts:
            if x is y:
                continue
            if leq(x, y) and fx > f.value(y):
                return False, (x, y)
    return True, None


def is_amenable(f: SampledFunction) -> tuple[bool, Optional[PointN]]:
    """Check that f vanishes at the origin and is positive elsewhere.

    The origin must be a sample point; otherwise the property is not
    even well posed and MissingOriginError is raised.
    """
    zero = origin(f.dim)
    if zero not in f:
        raise MissingOriginError("the origin is not a sample point")
    if f.value(zero) != 0:
        return False, zero
    for p, v in f.items():
        if p != zero and v == 0:
            return False, p
    return True, None


def is_subadditive(f: SampledFunction):
    """Decide subadditivity of an isotone sampled function.

    f is subadditive when no sample point can be covered by a multiset
    of sample points of strictly smaller total value; the empty
    multiset covers the origin, so a positive value there counts as a
    violation.  Decided exactly by comparing f with its subadditive
    envelope at every sample point; on failure returns the cheapest
    covering certificate for the lexicographically least violated
    point.

    Returns (bool, Optional[CoverCertificate]).
    """
    ok, pair = is_isotone(f)
    if not ok:
        raise NotIsotoneError(f"not isotone: f{pair[0]} > f{pair[1]}")
    from .continuation import subadditive_envelope

    for a in f.domain:
        value, certificate = subadditive_envelope(f, a)
        if value < f.value(a):
            return False, certificate
    return True, None


def projection_support(f: SampledFunction) -> set[int]:
    """The 1-based coordinates on which some sample point is positive."""
    support = set()
    for p in f.domain:
        for j, c in enumerate(p.coords, start=1):
            if c > 0:
                support.add(j)
    return support
