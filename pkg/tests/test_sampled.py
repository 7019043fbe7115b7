import random
from fractions import Fraction as F

import pytest

from oracles import isotone_pairs_hold, subadditive_violation
from isoprod.errors import (
    DimensionMismatchError,
    EmptyDomainError,
    MissingOriginError,
    NotIsotoneError,
)
from isoprod.fixtures import random_sampled_function
from isoprod.points import origin, point
from isoprod.sampled import (
    SampledFunction,
    is_amenable,
    is_isotone,
    is_subadditive,
    projection_support,
)


def sf(pairs):
    return SampledFunction([(point(*coords), value) for coords, value in pairs])


def test_construction_validation():
    with pytest.raises(EmptyDomainError):
        SampledFunction([])
    with pytest.raises(ValueError, match="duplicate"):
        sf([((1, 1), 1), ((1, 1), 2)])
    with pytest.raises(DimensionMismatchError):
        sf([((1,), 1), ((1, 2), 2)])
    with pytest.raises(ValueError, match="negative"):
        sf([((1, 1), "-1")])


def test_domain_is_sorted():
    f = sf([((2, 0), 1), ((0, 0), 0), ((1, 1), 2)])
    assert f.domain == (point(0, 0), point(1, 1), point(2, 0))


def test_is_isotone_examples():
    ok, witness = is_isotone(sf([((0, 0), 0), ((1, 1), 2), ((2, 2), 3)]))
    assert ok and witness is None
    ok, witness = is_isotone(sf([((0, 0), 1), ((1, 1), 0)]))
    assert not ok and witness == (point(0, 0), point(1, 1))
    ok, _ = is_isotone(sf([((1, 0), 5), ((0, 1), 1)]))
    assert ok


def test_is_amenable_examples():
    ok, witness = is_amenable(sf([((0, 0), 0), ((1, 2), 1)]))
    assert ok and witness is None
    ok, witness = is_amenable(sf([((0, 0), 0), ((1, 0), 0)]))
    assert not ok and witness == point(1, 0)
    with pytest.raises(MissingOriginError):
        is_amenable(sf([((1, 1), 1)]))
    ok, witness = is_amenable(sf([((0, 0), "1/2"), ((1, 1), 1)]))
    assert not ok and witness == origin(2)


def test_is_subadditive_examples():
    ok, witness = is_subadditive(sf([((1,), 1), ((2,), 3)]))
    assert not ok
    assert witness.target == point(2)
    assert witness.parts == ((point(1), 2),)
    assert witness.cost == 2

    ok, witness = is_subadditive(sf([((1,), 1), ((2,), 2)]))
    assert ok and witness is None

    ok, _ = is_subadditive(sf([((0, 0), 0)]))
    assert ok


def test_is_subadditive_requires_isotone():
    with pytest.raises(NotIsotoneError):
        is_subadditive(sf([((0,), 1), ((1,), 0)]))


def test_projection_support_examples():
    assert projection_support(sf([((1, 0), 1), ((0, 0), 0)])) == {1}
    assert projection_support(sf([((0, 0), 0)])) == set()
    assert projection_support(sf([((1, 0), 1), ((0, 2), 1)])) == {1, 2}


def test_restriction_keeps_isotone_and_amenable():
    rng = random.Random(4201)
    for _ in range(25):
        f = random_sampled_function(rng, mode="amenable", size=5)
        assert is_isotone(f)[0] and is_amenable(f)[0]
        keep = [p for i, p in enumerate(f.domain) if i % 2 == 0 or p.is_origin()]
        if origin(f.dim) not in keep:
            keep.append(origin(f.dim))
        g = f.restrict(keep)
        assert is_isotone(g)[0]
        assert is_amenable(g)[0]


def test_subadditive_agrees_with_enumeration_oracle():
    # seeded sweep over small isotone instances, coordinates in 0..3
    rng = random.Random(90125)
    grid = (F(0), F(1), F(2), F(3))
    disagreements = []
    for trial in range(60):
        f = random_sampled_function(
            rng, dim=rng.randint(1, 3), size=rng.randint(1, 5), grid=grid, mode="isotone"
        )
        assert isotone_pairs_hold(f)
        verdict, certificate = is_subadditive(f)
        oracle = subadditive_violation(f)
        if verdict != (oracle is None):
            disagreements.append((trial, f))
        if not verdict:
            # the certificate really is a cheaper cover of its target
            assert certificate.cost < f.value(certificate.target)
            values = dict(f.items())
            assert certificate.verify(lambda p: values[p])
    assert not disagreements
