"""Integer-partition combinatorics used throughout the code-synthesis pipeline.

Partitions play two roles: they index the inequivalent photon-loss events
(losses grouped by how many photons leave each afflicted mode) and they label
the occupation patterns of the permutation-invariant basis states.  Everything
in this module is exact integer arithmetic on immutable values.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

# An occupation vector is a plain tuple of non-negative mode occupations.
OccupationVector = tuple[int, ...]


@dataclass(frozen=True)
class Partition:
    """A non-increasing tuple of positive integers summing to ``n``."""

    parts: tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        if self.parts and min(self.parts) < 1:
            raise ValueError(f"partition parts must be positive: {self.parts}")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError(f"partition parts must be non-increasing: {self.parts}")
        if sum(self.parts) != self.n:
            raise ValueError(f"parts {self.parts} do not sum to {self.n}")

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts), sum(parts))

    def padded(self, length: int) -> OccupationVector:
        """The parts extended with trailing zeros to the given length."""
        if length < len(self.parts):
            raise ValueError(f"cannot pad {self.parts} to length {length}")
        return self.parts + (0,) * (length - len(self.parts))

    def __repr__(self) -> str:
        return f"Partition{self.parts}"


@dataclass(frozen=True)
class ErrorLabel:
    """A photon-loss class: a partition of the loss weight plus its global index.

    Labels are ordered by ascending loss weight, then descending-lexicographic
    within each weight, and ``index`` is the 1-based position in that ordering.
    """

    partition: Partition
    weight: int
    index: int

    def padded(self, length: int) -> OccupationVector:
        return self.partition.padded(length)


def enumerate_partitions(n: int) -> list[Partition]:
    """All partitions of ``n`` in descending-lexicographic order.

    ``n = 0`` returns an empty list by convention (the count ``p(0) = 1``
    refers to the empty partition, which labels nothing here).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return []
    return [Partition(parts, n) for parts in _descending_partitions(n, n)]


def _descending_partitions(remaining: int, cap: int) -> Iterator[tuple[int, ...]]:
    if remaining == 0:
        yield ()
        return
    for head in range(min(remaining, cap), 0, -1):
        for tail in _descending_partitions(remaining - head, head):
            yield (head,) + tail


_PARTITION_COUNTS = [1]


def partition_count(n: int) -> int:
    """The number of partitions ``p(n)``, with ``p(0) = 1``.

    Computed by Euler's pentagonal-number recurrence, which is independent of
    the explicit enumeration above (the two are cross-checked in the tests).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    while len(_PARTITION_COUNTS) <= n:
        m = len(_PARTITION_COUNTS)
        total = 0
        k = 1
        while True:
            pentagonal = k * (3 * k - 1) // 2
            if pentagonal > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * _PARTITION_COUNTS[m - pentagonal]
            pentagonal += k
            if pentagonal <= m:
                total += sign * _PARTITION_COUNTS[m - pentagonal]
            k += 1
        _PARTITION_COUNTS.append(total)
    return _PARTITION_COUNTS[n]


def cumulative_partition_count(t: int) -> int:
    """``p(1) + ... + p(t)``, the number of loss classes of weight at most ``t``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return sum(partition_count(k) for k in range(1, t + 1))


def error_labels(t: int) -> list[ErrorLabel]:
    """The loss classes of weight 1 through ``t`` in their global ordering."""
    if t < 1:
        raise ValueError("t must be at least 1")
    labels = []
    for k in range(1, t + 1):
        for q in enumerate_partitions(k):
            labels.append(ErrorLabel(q, k, len(labels) + 1))
    return labels


def orbit_size(v: Sequence[int]) -> int:
    """The number of distinct reorderings of ``v`` (a multinomial coefficient)."""
    if len(v) < 1:
        raise ValueError("vector must have at least one entry")
    size = math.factorial(len(v))
    for multiplicity in Counter(v).values():
        size //= math.factorial(multiplicity)
    return size


def enumerate_orbit(v: Sequence[int]) -> Iterator[OccupationVector]:
    """Yield the distinct reorderings of ``v``, ascending lexicographically."""
    counts = Counter(v)
    values = sorted(counts)
    n = len(v)
    prefix: list[int] = []

    def rec() -> Iterator[OccupationVector]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for value in values:
            if counts[value]:
                counts[value] -= 1
                prefix.append(value)
                yield from rec()
                prefix.pop()
                counts[value] += 1

    yield from rec()


def elementary_symmetric(parts: Partition | Sequence[int], h: int) -> int:
    """The elementary symmetric polynomial ``e_h`` of the (nonzero) parts.

    Counts the ways of removing ``h`` photons from exactly ``h`` distinct
    afflicted modes, one photon per mode; 0 when ``h`` exceeds the number of
    parts.
    """
    if h < 0:
        raise ValueError("h must be non-negative")
    values = parts.parts if isinstance(parts, Partition) else tuple(parts)
    values = tuple(v for v in values if v != 0)
    coeffs = [1] + [0] * h
    for value in values:
        for degree in range(min(h, len(values)), 0, -1):
            coeffs[degree] += value * coeffs[degree - 1]
    return coeffs[h]


def enumerate_weight_vectors(weight: int, length: int) -> Iterator[OccupationVector]:
    """Yield every length-``length`` occupation vector of the given weight.

    Order is descending-lexicographic, deterministic.
    """
    if length < 1:
        raise ValueError("length must be at least 1")
    if weight < 0:
        raise ValueError("weight must be non-negative")
    if length == 1:
        yield (weight,)
        return
    for first in range(weight, -1, -1):
        for rest in enumerate_weight_vectors(weight - first, length - 1):
            yield (first,) + rest


def enumerate_error_vectors(length: int, max_weight: int) -> list[OccupationVector]:
    """All occupation vectors of weight 0 through ``max_weight``, weight-ascending."""
    vectors: list[OccupationVector] = []
    for kappa in range(max_weight + 1):
        vectors.extend(enumerate_weight_vectors(kappa, length))
    return vectors


def count_error_vectors(length: int, max_weight: int) -> int:
    """``|K(length, 0)| + ... + |K(length, max_weight)|`` without enumerating."""
    return sum(math.comb(kappa + length - 1, length - 1) for kappa in range(max_weight + 1))
