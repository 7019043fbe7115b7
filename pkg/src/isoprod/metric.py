"""Finite metric spaces, metric products and their decompositions.

The matrices here are plain nested sequences so a candidate can be fed
to :func:`verify_metric` before anyone promises it is a metric.  All
checks are exact on rational entries; a tolerance argument exists only
for the one inexact closed form (the Euclidean-style combiner).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence, Union

from .combiners import Combiner
from .errors import (
    CombinerDomainGapError,
    InvalidMetricError,
    MissingOriginError,
    NotIsotoneError,
    NotWellDefinedError,
)
from .points import PointN, leq, rat
from .sampled import SampledFunction, is_amenable, is_isotone, is_subadditive


@dataclass(frozen=True)
class MetricViolation:
    """One failed metric axiom: kind is symmetry, identity or triangle."""

    kind: str
    indices: tuple[int, ...]
    detail: str


def verify_metric(matrix, tol=0) -> tuple[bool, Optional[MetricViolation]]:
    """Check the metric axioms on a square nonnegative matrix.

    Exact when tol is 0 (the default).  Returns the first violation in
    axiom order (symmetry, identity of indiscernibles, triangle), each
    scanned in lexicographic index order.
    """
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise ValueError("matrix is not square")
    for i in range(n):
        for j in range(n):
            if matrix[i][j] < 0:
                raise ValueError(f"negative entry at ({i}, {j})")

    for i in range(n):
        for j in range(i + 1, n):
            if abs(matrix[i][j] - matrix[j][i]) > tol:
                return False, MetricViolation(
                    "symmetry", (i, j), f"d({i},{j})={matrix[i][j]} != d({j},{i})={matrix[j][i]}"
                )
    for i in range(n):
        if matrix[i][i] > tol:
            return False, MetricViolation("identity", (i, i), f"d({i},{i})={matrix[i][i]} != 0")
    for i in range(n):
        for j in range(n):
            if i != j and matrix[i][j] <= tol:
                return False, MetricViolation(
                    "identity", (i, j), f"d({i},{j})={matrix[i][j]} vanishes off the diagonal"
                )

    exact = tol == 0 and all(
        isinstance(matrix[i][j], (Fraction, int)) for i in range(n) for j in range(n)
    )
    if exact:
        # hoist to integers so the cubic scan stays cheap
        den = lcm(1, *(Fraction(matrix[i][j]).denominator for i in range(n) for j in range(n)))
        m = [[int(Fraction(matrix[i][j]) * den) for j in range(n)] for i in range(n)]
        bound = 0
    else:
        m = matrix
        bound = tol
    for i in range(n):
        for j in range(n):
            row_j = m[j]
            dij = m[i][j]
            for k in range(n):
                if m[i][k] > dij + row_j[k] + bound:
                    return False, MetricViolation(
                        "triangle",
                        (i, j, k),
                        f"d({i},{k})={matrix[i][k]} > d({i},{j})+d({j},{k})"
                        f"={matrix[i][j]}+{matrix[j][k]}",
                    )
    return True, None


class FiniteMetricSpace:
    """Labeled points with an exact distance matrix, validated on construction."""

    __slots__ = ("_labels", "_dist")

    def __init__(self, labels: Sequence[str], dist: Sequence[Sequence]):
        labels = tuple(str(x) for x in labels)
        if len(set(labels)) != len(labels):
            raise InvalidMetricError("labels must be distinct")
        rows = tuple(tuple(rat(v) for v in row) for row in dist)
        if len(rows) != len(labels):
            raise InvalidMetricError(
                f"{len(labels)} labels but {len(rows)} matrix rows"
            )
        ok, violation = verify_metric(rows)
        if not ok:
            raise InvalidMetricError(f"not a metric: {violation.detail}")
        self._labels = labels
        self._dist = rows

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def dist(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._dist

    @property
    def size(self) -> int:
        return len(self._labels)

    def distance(self, i: int, j: int) -> Fraction:
        return self._dist[i][j]

    def distance_set(self) -> tuple[Fraction, ...]:
        """All realized distances, sorted, always containing 0."""
        return tuple(sorted({v for row in self._dist for v in row}))

    def __eq__(self, other):
        return (
            isinstance(other, FiniteMetricSpace)
            and self._labels == other._labels
            and self._dist == other._dist
        )

    def __repr__(self):
        return f"FiniteMetricSpace(labels={self._labels!r})"


CombinerLike = Union[Combiner, SampledFunction]


@dataclass(frozen=True)
class ProductSpec:
    """Factor spaces plus the combiner applied to coordinate distances."""

    factors: tuple[FiniteMetricSpace, ...]
    combiner: CombinerLike

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("a product needs at least one factor")
        if isinstance(self.combiner, SampledFunction):
            if self.combiner.dim != len(self.factors):
                raise ValueError(
                    f"combiner dimension {self.combiner.dim} != {len(self.factors)} factors"
                )
            for tup in itertools.product(*(sp.distance_set() for sp in self.factors)):
                if PointN(tup) not in self.combiner:
                    raise CombinerDomainGapError(
                        f"sampled combiner lacks distance tuple {tup}"
                    )


def _apply_combiner(combiner: CombinerLike, values: tuple[Fraction, ...]):
    if isinstance(combiner, SampledFunction):
        p = PointN(values)
        if p not in combiner:
            raise CombinerDomainGapError(f"sampled combiner lacks distance tuple {p}")
        return combiner.value(p)
    return combiner(values)


def _product_points(factors: Sequence[FiniteMetricSpace]) -> list[tuple[int, ...]]:
    """Multi-indices of the product points in lexicographic label order."""
    return list(itertools.product(*(range(sp.size) for sp in factors)))


def product_labels(factors: Sequence[FiniteMetricSpace]) -> list[tuple[str, ...]]:
    return [
        tuple(sp.labels[i] for sp, i in zip(factors, idx))
        for idx in _product_points(factors)
    ]


def _distance_tuple(
    factors: Sequence[FiniteMetricSpace], p: tuple[int, ...], q: tuple[int, ...]
) -> tuple[Fraction, ...]:
    return tuple(sp.distance(a, b) for sp, a, b in zip(factors, p, q))


def product_metric(spec: ProductSpec) -> tuple[list[tuple[str, ...]], list[list]]:
    """Candidate distance matrix on the product point set.

    Entry (p, q) is the combiner applied to the coordinate distances.
    The result is not guaranteed to satisfy the metric axioms; pair it
    with :func:`verify_metric`.
    """
    factors = spec.factors
    pts = _product_points(factors)
    matrix = [
        [
            _apply_combiner(spec.combiner, _distance_tuple(factors, p, q))
            for q in pts
        ]
        for p in pts
    ]
    return product_labels(factors), matrix


def sup_metric(factors: Sequence[FiniteMetricSpace]) -> tuple[list[tuple[str, ...]], list[list]]:
    """The max-of-coordinate-distances metric on the product."""
    factors = tuple(factors)
    if not factors:
        raise ValueError("a product needs at least one factor")
    pts = _product_points(factors)
    matrix = [
        [max(_distance_tuple(factors, p, q)) for q in pts]
        for p in pts
    ]
    return product_labels(factors), matrix


@dataclass(frozen=True)
class DistanceIncreaseViolation:
    """Two product pairs whose distances invert a tuple comparison."""

    small_pair: tuple[tuple[str, ...], tuple[str, ...]]
    large_pair: tuple[tuple[str, ...], tuple[str, ...]]
    small_tuple: tuple[Fraction, ...]
    large_tuple: tuple[Fraction, ...]
    small_value: Fraction
    large_value: Fraction


def is_distance_increasing(
    matrix, factors: Sequence[FiniteMetricSpace]
) -> tuple[bool, Optional[DistanceIncreaseViolation]]:
    """Check monotonicity of the product distance in the tuple of coordinate distances."""
    factors = tuple(factors)
    pts = _product_points(factors)
    labels = product_labels(factors)
    seen: dict[tuple, tuple] = {}
    records = []
    for i in range(len(pts)):
        for j in range(i, len(pts)):
            tup = _distance_tuple(factors, pts[i], pts[j])
            val = matrix[i][j]
            key = (tup, val)
            if key not in seen:
                seen[key] = (labels[i], labels[j])
                records.append((tup, val, (labels[i], labels[j])))
    for tup_a, val_a, pair_a in records:
        for tup_b, val_b, pair_b in records:
            if all(x <= y for x, y in zip(tup_a, tup_b)) and val_a > val_b:
                return False, DistanceIncreaseViolation(
                    small_pair=pair_a,
                    large_pair=pair_b,
                    small_tuple=tup_a,
                    large_tuple=tup_b,
                    small_value=val_a,
                    large_value=val_b,
                )
    return True, None


def extract_product_function(
    matrix, factors: Sequence[FiniteMetricSpace]
) -> SampledFunction:
    """Recover the combiner of a product metric on the distance grid.

    Every pair of product points with the same coordinate-distance
    tuple must carry the same distance, otherwise the matrix is no
    product and NotWellDefinedError reports the conflicting pairs.
    """
    factors = tuple(factors)
    pts = _product_points(factors)
    labels = product_labels(factors)
    table: dict[PointN, Fraction] = {}
    witness: dict[PointN, tuple] = {}
    for i in range(len(pts)):
        for j in range(i, len(pts)):
            tup = PointN(_distance_tuple(factors, pts[i], pts[j]))
            val = rat(matrix[i][j])
            if tup in table:
                if table[tup] != val:
                    raise NotWellDefinedError(
                        f"pairs {witness[tup]} and {(labels[i], labels[j])} share the "
                        f"distance tuple {tup} but have distances {table[tup]} and {val}",
                        pair_a=witness[tup],
                        pair_b=(labels[i], labels[j]),
                    )
            else:
                table[tup] = val
                witness[tup] = (labels[i], labels[j])
    for tup in itertools.product(*(sp.distance_set() for sp in factors)):
        assert PointN(tup) in table, "distance grid tuple not realized"
    return SampledFunction(table)


@dataclass(frozen=True)
class MetricPreservingReport:
    isotone: bool
    amenable: bool
    amenable_witness: Optional[PointN]
    subadditive: bool
    subadditive_certificate: object


def metric_preserving_verdict(f: SampledFunction) -> tuple[bool, MetricPreservingReport]:
    """Conjunction of amenability and subadditivity for an isotone sample set.

    True means the samples extend to a function that turns any factor
    metrics into a product metric.
    """
    ok, pair = is_isotone(f)
    if not ok:
        raise NotIsotoneError(f"not isotone: f{pair[0]} > f{pair[1]}")
    if not f.has_origin():
        raise MissingOriginError("the origin is not a sample point")
    amen_ok, amen_witness = is_amenable(f)
    sub_ok, sub_cert = is_subadditive(f)
    report = MetricPreservingReport(
        isotone=True,
        amenable=amen_ok,
        amenable_witness=amen_witness,
        subadditive=sub_ok,
        subadditive_certificate=sub_cert,
    )
    return amen_ok and sub_ok, report


def max_ultrametric(x: Fraction, y: Fraction) -> Fraction:
    """The ultrametric max{x, y} for distinct points, 0 on the diagonal."""
    return Fraction(0) if x == y else max(x, y)


def unbounded_gauge(t: Fraction) -> Fraction:
    """The gauge t/(1-t) on [0, 1): zero at 0, blowing up toward 1."""
    t = rat(t)
    if not 0 <= t < 1:
        raise ValueError(f"gauge argument must lie in [0, 1), got {t}")
    return t / (1 - t)


def unbounded_witness(bound) -> tuple[Fraction, Fraction]:
    """Two points of [0, 1) whose gauged ultrametric distance exceeds the bound.

    Demonstrates that no increasing finite gauge dominates the gauged
    metric: distances under it are unbounded although the underlying
    ultrametric never exceeds 1.
    """
    m = rat(bound)
    if m <= 0:
        raise ValueError(f"bound must be positive, got {m}")
    x = Fraction(0)
    y = (2 * m + 1) / (2 * m + 2)
    assert unbounded_gauge(max_ultrametric(x, y)) > m
    return x, y
