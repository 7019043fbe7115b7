import random
from fractions import Fraction as F

import pytest

from isoprod.combiners import named_combiner
from isoprod.errors import (
    CombinerDomainGapError,
    InvalidMetricError,
    MissingOriginError,
    NotIsotoneError,
    NotWellDefinedError,
)
from isoprod.fixtures import (
    line_space,
    random_metric_space,
    random_sampled_function,
    sampled_combiner,
)
from isoprod.metric import (
    FiniteMetricSpace,
    ProductSpec,
    extract_product_function,
    is_distance_increasing,
    max_ultrametric,
    metric_preserving_verdict,
    product_metric,
    sup_metric,
    unbounded_gauge,
    unbounded_witness,
    verify_metric,
)
from isoprod.points import point
from isoprod.sampled import SampledFunction


def two_point_space(name, d):
    return FiniteMetricSpace([f"{name}0", f"{name}1"], [[0, d], [F(d), 0]])


def test_verify_metric_examples():
    assert verify_metric([[F(0)]]) == (True, None)
    assert verify_metric([[F(0), F(1)], [F(1), F(0)]]) == (True, None)
    ok, violation = verify_metric(
        [[F(0), F(1), F(3)], [F(1), F(0), F(1)], [F(3), F(1), F(0)]]
    )
    assert not ok
    assert violation.kind == "triangle" and violation.indices == (0, 1, 2)


def test_verify_metric_other_axioms():
    ok, violation = verify_metric([[F(0), F(1)], [F(2), F(0)]])
    assert not ok and violation.kind == "symmetry" and violation.indices == (0, 1)
    ok, violation = verify_metric([[F(1)]])
    assert not ok and violation.kind == "identity"
    ok, violation = verify_metric([[F(0), F(0)], [F(0), F(0)]])
    assert not ok and violation.kind == "identity" and violation.indices == (0, 1)
    with pytest.raises(ValueError, match="square"):
        verify_metric([[F(0), F(1)]])
    with pytest.raises(ValueError, match="negative"):
        verify_metric([[F(0), F(-1)], [F(-1), F(0)]])


def test_verify_metric_tolerance():
    eps = 1e-13
    matrix = [[0.0, 1.0, 2.0 + eps], [1.0, 0.0, 1.0], [2.0 + eps, 1.0, 0.0]]
    ok, _ = verify_metric(matrix, tol=1e-12)
    assert ok
    ok, violation = verify_metric(matrix, tol=1e-14)
    assert not ok and violation.kind == "triangle"


def test_finite_metric_space_validation():
    space = FiniteMetricSpace(["a", "b"], [["0", "1/2"], ["1/2", "0"]])
    assert space.distance(0, 1) == F(1, 2)
    assert space.distance_set() == (F(0), F(1, 2))
    with pytest.raises(InvalidMetricError):
        FiniteMetricSpace(["a", "b", "c"], [[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    with pytest.raises(InvalidMetricError):
        FiniteMetricSpace(["a", "a"], [[0, 1], [1, 0]])


def test_product_metric_sum_and_max_are_metrics():
    factors = (two_point_space("a", 1), two_point_space("b", 2))
    labels, matrix = product_metric(ProductSpec(factors, named_combiner("SUM")))
    assert labels[0] == ("a0", "b0")
    assert verify_metric(matrix) == (True, None)
    _, matrix = product_metric(ProductSpec(factors, named_combiner("MAX")))
    assert verify_metric(matrix) == (True, None)


def test_product_metric_square_sum():
    # with 2-point factors no coordinate ever adds twice, so the square
    # combiner squeaks through with triangle equalities
    factors = (two_point_space("a", 1), two_point_space("b", 2))
    _, matrix = product_metric(ProductSpec(factors, named_combiner("SQUARE_SUM")))
    assert verify_metric(matrix) == (True, None)
    # three collinear points expose the failure
    line = line_space([0, 1, 2])
    _, matrix = product_metric(ProductSpec((line, line), named_combiner("SQUARE_SUM")))
    ok, violation = verify_metric(matrix)
    assert not ok and violation.kind == "triangle"


def test_product_metric_sampled_combiner_and_domain_gap():
    factors = (two_point_space("a", 1), two_point_space("b", 2))
    combiner = sampled_combiner("SUM", [0, 1, 2], n=2)
    labels, matrix = product_metric(ProductSpec(factors, combiner))
    assert verify_metric(matrix) == (True, None)
    sparse = SampledFunction([(point(0, 0), 0), (point(1, 2), 1)])
    with pytest.raises(CombinerDomainGapError):
        ProductSpec(factors, sparse)


def test_sup_metric():
    factors = (two_point_space("a", 1), two_point_space("b", 2))
    labels, matrix = sup_metric(factors)
    entries = {v for row in matrix for v in row}
    assert entries == {F(0), F(1), F(2)}
    assert verify_metric(matrix) == (True, None)
    one = two_point_space("a", "3/2")
    _, matrix = sup_metric((one,))
    assert matrix[0][1] == F(3, 2)
    assert matrix[0][0] == 0


def test_is_distance_increasing():
    factors = (two_point_space("a", 1), two_point_space("b", 2))
    _, matrix = product_metric(ProductSpec(factors, named_combiner("SUM")))
    assert is_distance_increasing(matrix, factors) == (True, None)
    # invert one comparison: make the double step cheaper than a single one
    bad = [row[:] for row in matrix]
    bad[0][3] = bad[3][0] = F(1, 2)
    ok, witness = is_distance_increasing(bad, factors)
    assert not ok
    assert witness.small_value > witness.large_value
    single = (FiniteMetricSpace(["x"], [[0]]),)
    assert is_distance_increasing([[F(0)]], single) == (True, None)


def test_extract_product_function_round_trip():
    factors = (two_point_space("a", 1), two_point_space("b", 2))
    spec = ProductSpec(factors, named_combiner("SUM"))
    _, matrix = product_metric(spec)
    extracted = extract_product_function(matrix, factors)
    expected = SampledFunction(
        [(point(a, b), F(a) + F(b)) for a in (0, 1) for b in (0, 2)]
    )
    assert extracted == expected


def test_extract_single_factor_scaling():
    space = line_space([0, 1, 2])
    doubled = [[2 * space.distance(i, j) for j in range(3)] for i in range(3)]
    extracted = extract_product_function(doubled, (space,))
    for t in (0, 1, 2):
        assert extracted.value(point(t)) == 2 * t


def test_extract_not_well_defined():
    # a metric on the 2x2 product whose diagonals disagree cannot factor
    factors = (two_point_space("a", 1), two_point_space("b", 1))
    labels = [("a0", "b0"), ("a0", "b1"), ("a1", "b0"), ("a1", "b1")]
    d = {(0, 1): F(3, 2), (0, 2): F(3, 2), (1, 3): F(3, 2), (2, 3): F(3, 2),
         (0, 3): F(2), (1, 2): F(3)}
    matrix = [[F(0)] * 4 for _ in range(4)]
    for (i, j), v in d.items():
        matrix[i][j] = matrix[j][i] = v
    assert verify_metric(matrix) == (True, None)
    with pytest.raises(NotWellDefinedError) as err:
        extract_product_function(matrix, factors)
    assert err.value.pair_a is not None and err.value.pair_b is not None


def test_distance_increasing_iff_extractable_isotone():
    rng = random.Random(808)
    from isoprod.sampled import is_isotone

    for _ in range(20):
        factors = tuple(
            random_metric_space(rng, max_points=3) for _ in range(rng.randint(1, 2))
        )
        combiner = rng.choice([named_combiner("SUM"), named_combiner("MAX")])
        _, matrix = product_metric(ProductSpec(factors, combiner))
        increasing, _ = is_distance_increasing(matrix, factors)
        extracted = extract_product_function(matrix, factors)
        assert increasing == is_isotone(extracted)[0]
        assert increasing


def test_metric_preserving_verdict():
    grid = [0, 1, 2]
    ok, report = metric_preserving_verdict(sampled_combiner("SUM", grid, n=2))
    assert ok and report.amenable and report.subadditive
    ok, report = metric_preserving_verdict(sampled_combiner("SQUARE_SUM", grid, n=2))
    assert not ok and report.amenable and not report.subadditive
    assert report.subadditive_certificate.cost < 4
    ok, _ = metric_preserving_verdict(sampled_combiner("MAX", grid, n=2))
    assert ok
    with pytest.raises(NotIsotoneError):
        metric_preserving_verdict(
            SampledFunction([(point(0, 0), 1), (point(1, 1), 0)])
        )
    with pytest.raises(MissingOriginError):
        metric_preserving_verdict(SampledFunction([(point(1, 1), 1)]))


def find_line_refutation(f):
    """Factor collections of collinear triples on which f fails the axioms.

    Searches sample pairs whose sum stays inside the domain, building
    per-coordinate line spaces {0, a_j, a_j+b_j}; also tries the
    two-point factors matching a vanishing positive sample.
    """
    for x, v in f.items():
        if not x.is_origin() and v == 0:
            factors = tuple(
                line_space([0, c]) if c > 0 else line_space([0])
                for c in x.coords
            )
            try:
                _, matrix = product_metric(ProductSpec(factors, f))
            except CombinerDomainGapError:
                continue
            ok, violation = verify_metric(matrix)
            if not ok:
                return factors, violation
    for a in f.domain:
        for b in f.domain:
            if a.is_origin() or b.is_origin():
                continue
            if (a + b) not in f:
                continue
            factors = tuple(
                line_space([0, aj, aj + bj])
                for aj, bj in zip(a.coords, b.coords)
            )
            try:
                _, matrix = product_metric(ProductSpec(factors, f))
            except CombinerDomainGapError:
                continue
            ok, violation = verify_metric(matrix)
            if not ok:
                return factors, violation
    return None


def test_failing_verdict_yields_concrete_metric_failure():
    square = sampled_combiner("SQUARE_SUM", [0, 1, 2], n=2)
    assert not metric_preserving_verdict(square)[0]
    found = find_line_refutation(square)
    assert found is not None and found[1].kind == "triangle"

    not_amenable = SampledFunction(
        [(point(0, 0), 0), (point(1, 0), 0), (point(0, 1), 1), (point(1, 1), 1)]
    )
    found = find_line_refutation(not_amenable)
    assert found is not None and found[1].kind == "identity"


def test_verdict_true_products_pass_verification():
    rng = random.Random(19)
    grid = [0, 1, 2]
    for name in ("SUM", "MAX", "CAPPED_SUM"):
        for n in (1, 2):
            combiner = sampled_combiner(name, grid, n=n)
            assert metric_preserving_verdict(combiner)[0]
            for _ in range(10):
                factors = tuple(
                    line_space(rng.sample([0, 1, 2], rng.randint(2, 3)) + [0])
                    for _ in range(n)
                )
                _, matrix = product_metric(ProductSpec(factors, combiner))
                assert verify_metric(matrix) == (True, None)


def test_uniform_continuity_floor():
    # pairs separated by at least eps in some coordinate sit at distance
    # at least the combiner's value on that axis vector
    grid = [0, 1, 2]
    f = sampled_combiner("SUM", grid, n=2)
    factors = (line_space(grid), line_space(grid))
    labels, matrix = product_metric(ProductSpec(factors, f))
    from isoprod.metric import _distance_tuple, _product_points

    pts = _product_points(factors)
    for axis in (0, 1):
        for eps in (F(1), F(2)):
            floor = f.value(point(*(eps if i == axis else 0 for i in range(2))))
            assert floor > 0
            relevant = [
                matrix[i][j]
                for i in range(len(pts))
                for j in range(len(pts))
                if _distance_tuple(factors, pts[i], pts[j])[axis] >= eps
            ]
            assert min(relevant) >= floor


def test_unbounded_witness():
    x, y = unbounded_witness(1)
    assert (x, y) == (F(0), F(3, 4))
    assert unbounded_gauge(max_ultrametric(x, y)) == 3
    x, y = unbounded_witness(10**6)
    assert unbounded_gauge(max_ultrametric(x, y)) > 10**6
    assert 0 <= x < 1 and 0 <= y < 1
    with pytest.raises(ValueError):
        unbounded_witness(0)
    with pytest.raises(ValueError):
        unbounded_gauge(1)


def test_ultrametric_strong_triangle():
    rng = random.Random(3)
    for _ in range(300):
        x, y, z = (F(rng.randint(0, 99), 100) for _ in range(3))
        assert max_ultrametric(x, y) <= max(
            max_ultrametric(x, z), max_ultrametric(z, y)
        )
