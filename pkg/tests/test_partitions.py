import itertools
import math
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adcodes.partitions import (
    Partition,
    count_error_vectors,
    cumulative_partition_count,
    elementary_symmetric,
    enumerate_orbit,
    enumerate_partitions,
    enumerate_weight_vectors,
    error_labels,
    orbit_size,
    partition_count,
)


def partitions_via_compositions(n):
    """Oracle: canonicalize all 2^(n-1) compositions of n (independent route)."""
    found = set()
    for cuts in itertools.product((0, 1), repeat=n - 1):
        composition = []
        run = 1
        for cut in cuts:
            if cut:
                composition.append(run)
                run = 1
            else:
                run += 1
        composition.append(run)
        found.add(tuple(sorted(composition, reverse=True)))
    return found


def test_enumeration_matches_known_values():
    assert [p.parts for p in enumerate_partitions(2)] == [(2,), (1, 1)]
    assert [p.parts for p in enumerate_partitions(1)] == [(1,)]
    assert len(enumerate_partitions(7)) == 15
    assert {p.parts for p in enumerate_partitions(7)} == partitions_via_compositions(7)
    assert enumerate_partitions(0) == []
    with pytest.raises(ValueError):
        enumerate_partitions(-1)


def test_partition_count_values():
    assert partition_count(0) == 1
    assert partition_count(1) == 1
    assert partition_count(4) == 5
    assert partition_count(13) == 101
    assert partition_count(13) == len(partitions_via_compositions(13))
    with pytest.raises(ValueError):
        partition_count(-2)


def test_enumeration_agrees_with_count_up_to_20():
    for n in range(1, 21):
        parts = enumerate_partitions(n)
        assert len(parts) == partition_count(n)
        assert all(p.n == n and sum(p.parts) == n for p in parts)
        ordered = [p.parts for p in parts]
        assert ordered == sorted(ordered, reverse=True)
        assert len(set(ordered)) == len(ordered)


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, 2), 3)
    with pytest.raises(ValueError):
        Partition((2, 0), 2)
    with pytest.raises(ValueError):
        Partition((2, 1), 4)
    assert Partition.of(3, 2).padded(5) == (3, 2, 0, 0, 0)


def test_error_labels_ordering():
    assert [l.partition.parts for l in error_labels(2)] == [(1,), (2,), (1, 1)]
    assert [l.partition.parts for l in error_labels(3)] == [
        (1,),
        (2,),
        (1, 1),
        (3,),
        (2, 1),
        (1, 1, 1),
    ]
    assert [l.partition.parts for l in error_labels(1)] == [(1,)]
    labels = error_labels(5)
    assert [l.index for l in labels] == list(range(1, len(labels) + 1))
    assert len(labels) == cumulative_partition_count(5)
    assert [l.weight for l in labels] == sorted(l.weight for l in labels)


def test_orbit_size_values():
    assert orbit_size((6, 0, 0, 0, 0, 0)) == 6
    assert orbit_size((3, 3, 0, 0, 0, 0)) == 15
    assert orbit_size((1, 1, 1)) == 1


@settings(max_examples=150)
@given(st.lists(st.integers(min_value=0, max_value=5), min_size=1, max_size=10))
def test_orbit_size_multinomial_identity(v):
    product = math.prod(math.factorial(c) for c in Counter(v).values())
    assert orbit_size(v) * product == math.factorial(len(v))


@settings(max_examples=60)
@given(st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=7))
def test_enumerate_orbit_is_the_distinct_permutation_set(v):
    orbit = list(enumerate_orbit(v))
    assert len(orbit) == orbit_size(v)
    assert len(set(orbit)) == len(orbit)
    assert set(orbit) == set(itertools.permutations(v))
    assert orbit == sorted(orbit)


def test_elementary_symmetric_values():
    assert elementary_symmetric((2, 1), 1) == 3
    assert elementary_symmetric((2, 1), 2) == 2
    # brute force over 2-subsets of (3, 2, 1): 6 + 3 + 2
    subsets = itertools.combinations((3, 2, 1), 2)
    assert elementary_symmetric((3, 2, 1), 2) == sum(a * b for a, b in subsets) == 11
    assert elementary_symmetric(Partition.of(3, 2, 1), 2) == 11
    assert elementary_symmetric((2, 1), 3) == 0
    assert elementary_symmetric((2, 1), 0) == 1


@settings(max_examples=100)
@given(st.lists(st.integers(min_value=1, max_value=6), min_size=1, max_size=6))
def test_elementary_symmetric_polynomial_identity(values):
    # coefficient list of the product of (1 + v x), built by convolution
    coefficients = [1]
    for v in values:
        shifted = [0] + [v * c for c in coefficients]
        coefficients = [a + b for a, b in itertools.zip_longest(coefficients, shifted, fillvalue=0)]
    for h, coefficient in enumerate(coefficients):
        assert elementary_symmetric(values, h) == coefficient
    assert elementary_symmetric(values, len(values) + 1) == 0


def test_weight_vector_enumeration():
    vectors = list(enumerate_weight_vectors(2, 3))
    assert len(vectors) == math.comb(2 + 3 - 1, 3 - 1)
    assert all(sum(v) == 2 for v in vectors)
    assert len(set(vectors)) == len(vectors)
    assert count_error_vectors(6, 2) == 1 + 6 + 21
    assert count_error_vectors(3, 1) == 4
