"""Synthesis of permutation-invariant constant-excitation codes.

The pipeline: choose a base integer ``w`` and multiplier ``u``, scale the
partitions of ``w`` into occupation labels of total excitation ``n = u*w``
(plus the all-ones label), build the rational constraint matrix whose rows are
photon-loss classes and whose columns are those labels, and read a code out of
the matrix's nullspace.  A nullspace vector with entries summing to zero
splits, by sign, into the squared amplitudes of the two logical codewords.

All matrix work is exact; nothing here touches floating point except the
fidelity bound and the numpy-backed brute-force distance oracle.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

from . import exact
from .exact import RationalMatrix, RationalVector, format_rational
from .partitions import (
    ErrorLabel,
    OccupationVector,
    Partition,
    cumulative_partition_count,
    elementary_symmetric,
    enumerate_orbit,
    enumerate_partitions,
    error_labels,
    orbit_size,
    partition_count,
)

THREADS_ENV_VAR = "ADCODES_THREADS"

DISTANCE_BRUTEFORCE_CAP = 100_000


class SynthesisFailure(Exception):
    """A requested code does not exist: the distance or nullity test failed."""

    def __init__(self, reason: str, details: dict) -> None:
        if reason not in ("distance", "nullity"):
            raise ValueError(f"unknown failure reason {reason!r}")
        self.reason = reason
        self.details = details
        super().__init__(f"synthesis failed ({reason}): {details}")


class ConsistencyError(RuntimeError):
    """An internal invariant of the constraint matrix was violated (a bug)."""


class SearchExhausted(Exception):
    """An exact-mode search ran out of candidate base integers."""

    def __init__(self, t: int, w_max: int, scan: tuple) -> None:
        self.t = t
        self.w_max = w_max
        self.scan = scan
        super().__init__(f"no code found for t={t} with w <= {w_max}; scan log: {scan}")


@dataclass(frozen=True)
class SynthesisParams:
    """Parameters of one synthesis run.

    ``t``: losses to correct; ``w``: base integer whose partitions label the
    support; ``u``: scale factor (so ``n = u*w`` modes and excitations);
    ``subset``: the partitions of ``w`` actually used (all of them by default).
    """

    t: int
    w: int
    u: int
    subset: tuple[Partition, ...]

    def __post_init__(self) -> None:
        if self.t < 1:
            raise ValueError("t must be at least 1")
        if self.w < 1:
            raise ValueError("w must be at least 1")
        if self.u < 2:
            raise ValueError("u must be at least 2")
        if not self.subset:
            raise ValueError("subset must be nonempty")
        if any(q.n != self.w for q in self.subset):
            raise ValueError(f"subset entries must be partitions of {self.w}")
        if len(set(self.subset)) != len(self.subset):
            raise ValueError("subset entries must be distinct")

    @classmethod
    def create(
        cls,
        t: int,
        w: int | None = None,
        u: int | None = None,
        subset: Sequence[Partition] | None = None,
    ) -> "SynthesisParams":
        """Fill in defaults: ``w = t``, ``u = t + 1``, subset = all partitions of ``w``."""
        w = t if w is None else w
        u = t + 1 if u is None else u
        chosen = enumerate_partitions(w) if subset is None else list(subset)
        ordered = tuple(sorted(chosen, key=lambda q: q.parts, reverse=True))
        return cls(t=t, w=w, u=u, subset=ordered)

    @property
    def n(self) -> int:
        """Mode count, equal to the total excitation number."""
        return self.u * self.w


@dataclass(frozen=True)
class DickeBasis:
    """Ordered occupation labels of the candidate support.

    Scaled partitions come first in descending-lexicographic order; the
    all-ones label is last.  Every label has weight ``n``.
    """

    labels: tuple[OccupationVector, ...]
    n: int

    def __post_init__(self) -> None:
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be distinct")
        if any(sum(label) != self.n for label in self.labels):
            raise ValueError(f"all basis labels must have weight {self.n}")
        if self.labels[-1] != (1,) * self.n:
            raise ValueError("the all-ones label must be last")


@dataclass(frozen=True)
class ConstraintMatrix:
    """The loss-by-label expectation matrix with its row and column labels."""

    matrix: RationalMatrix
    row_labels: tuple[ErrorLabel, ...]
    basis: DickeBasis

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def t(self) -> int:
        return self.row_labels[-1].weight


@dataclass(frozen=True)
class CodeSpec:
    """A synthesized code: support labels, nullspace vector, and codeword weights.

    ``zero_weights`` and ``one_weights`` map labels to exact squared
    amplitudes; the codeword amplitudes themselves are the square roots and
    are only ever materialized by the numerical oracle.
    """

    params: SynthesisParams
    basis: DickeBasis
    x: RationalVector
    zero_weights: Mapping[OccupationVector, Fraction]
    one_weights: Mapping[OccupationVector, Fraction]
    distance: int
    nullity: int

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def total_excitation(self) -> int:
        return self.basis.n

    def to_json_dict(self) -> dict:
        params = self.params
        return {
            "t": params.t,
            "w": params.w,
            "u": params.u,
            "n": self.n,
            "N": self.total_excitation,
            "basis": [list(label) for label in self.basis.labels],
            "x": [format_rational(value) for value in self.x],
            "zero_weights": {
                _label_key(label): format_rational(weight)
                for label, weight in self.zero_weights.items()
            },
            "one_weights": {
                _label_key(label): format_rational(weight)
                for label, weight in self.one_weights.items()
            },
            "distance": self.distance,
            "nullity": self.nullity,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CodeSpec":
        return code_spec_from_json_dict(json.loads(text))


def _label_key(label: OccupationVector) -> str:
    return ",".join(str(x) for x in label)


def _parse_label_key(key: str) -> OccupationVector:
    return tuple(int(part) for part in key.split(","))


def code_spec_from_json_dict(data: dict) -> CodeSpec:
    """Rebuild a CodeSpec from its serialized form, revalidating the weights."""
    labels = tuple(tuple(int(x) for x in label) for label in data["basis"])
    u = int(data["u"])
    w = int(data["w"])
    subset = []
    for label in labels[:-1]:
        parts = tuple(value // u for value in label if value != 0)
        if any(value % u != 0 for value in label):
            raise ValueError(f"label {label} is not a multiple of u={u}")
        subset.append(Partition(parts, w))
    params = SynthesisParams.create(int(data["t"]), w=w, u=u, subset=subset)
    basis = DickeBasis(labels=labels, n=params.n)
    x = tuple(Fraction(value) for value in data["x"])
    spec = _assemble_code_spec(params, basis, x, int(data["distance"]), int(data["nullity"]))
    for side, weights in (("zero_weights", spec.zero_weights), ("one_weights", spec.one_weights)):
        stored = {_parse_label_key(k): Fraction(v) for k, v in data[side].items()}
        if stored != dict(weights):
            raise ValueError(f"{side} in file are inconsistent with the stored vector")
    return spec


def build_Qu(params: SynthesisParams) -> DickeBasis:
    """The candidate support labels: scaled partitions of ``w`` plus the ones label."""
    n = params.n
    labels = [tuple(params.u * p for p in q.parts) + (0,) * (n - len(q.parts)) for q in params.subset]
    ones = (1,) * n
    if ones in labels:
        raise ConsistencyError("scaled partition collided with the all-ones label")
    labels.append(ones)
    return DickeBasis(labels=tuple(labels), n=n)


def matrix_element(
    tau: ErrorLabel | Partition | Sequence[int], q: Sequence[int], n: int
) -> Fraction:
    """Normalized expectation of the loss class ``tau`` in the Dicke state of ``q``.

    Equals ``b / c`` with ``c`` the number of distinct placements of the loss
    pattern over ``n`` modes and ``b`` the number of placements weighted by
    binomial pick counts.  ``b`` is computed by distributing the equal parts of
    ``tau`` over the groups of equal values of ``q`` (never by expanding either
    orbit), which also makes the result independent of the damping strength.
    """
    parts = _loss_parts(tau)
    q = tuple(q)
    if sum(q) != n:
        raise ValueError(f"occupation {q} does not have weight {n}")
    if sum(parts) > n:
        raise ValueError(f"loss weight {sum(parts)} exceeds {n}")
    if len(parts) > len(q):
        return Fraction(0)

    loss_values = sorted(set(parts), reverse=True)
    loss_mults = [parts.count(v) for v in loss_values]
    occ_values = sorted(set(q), reverse=True)
    occ_counts = [q.count(v) for v in occ_values]
    picks = [[math.comb(ov, lv) for ov in occ_values] for lv in loss_values]

    def placements(i: int, avail: tuple[int, ...]) -> int:
        if i == len(loss_values):
            return 1
        bounds = [a if picks[i][j] else 0 for j, a in enumerate(avail)]
        total = 0
        for combo in _bounded_compositions(loss_mults[i], bounds):
            ways = 1
            for j, count in enumerate(combo):
                if count:
                    ways *= math.comb(avail[j], count) * picks[i][j] ** count
            if ways:
                remaining = tuple(a - c for a, c in zip(avail, combo))
                total += ways * placements(i + 1, remaining)
        return total

    favorable = placements(0, tuple(occ_counts))
    padded = parts + (0,) * (n - len(parts))
    return Fraction(favorable, orbit_size(padded))


def _loss_parts(tau: ErrorLabel | Partition | Sequence[int]) -> tuple[int, ...]:
    if isinstance(tau, ErrorLabel):
        return tau.partition.parts
    if isinstance(tau, Partition):
        return tau.parts
    parts = tuple(v for v in tau if v != 0)
    if any(a < b for a, b in zip(parts, parts[1:])):
        parts = tuple(sorted(parts, reverse=True))
    return parts


def _bounded_compositions(total: int, bounds: Sequence[int]) -> Iterator[tuple[int, ...]]:
    if not bounds:
        if total == 0:
            yield ()
        return
    for first in range(min(total, bounds[0]), -1, -1):
        for rest in _bounded_compositions(total - first, bounds[1:]):
            yield (first,) + rest


def dicke_expectation_bruteforce(
    tau: ErrorLabel | Partition | Sequence[int], q: Sequence[int]
) -> Fraction:
    """Independent route to :func:`matrix_element`: average over the full orbit of ``q``.

    Expands every reordering of ``q`` against the fixed padded loss pattern.
    Exponential in general; intended for cross-checks at small ``n``.
    """
    parts = _loss_parts(tau)
    padded = parts + (0,) * (len(q) - len(parts))
    total = 0
    for x in enumerate_orbit(q):
        term = 1
        for occupancy, loss in zip(x, padded):
            term *= math.comb(occupancy, loss)
            if term == 0:
                break
        total += term
    return Fraction(total, orbit_size(q))


def build_matrix(params: SynthesisParams, threads: int | None = None) -> ConstraintMatrix:
    """Assemble the loss-by-label constraint matrix and verify its invariants.

    Entries are independent, so with ``threads > 1`` (or the ADCODES_THREADS
    environment variable) they are evaluated in a thread pool; results are
    assembled positionally and identical to sequential evaluation.
    """
    labels = tuple(error_labels(params.t))
    basis = build_Qu(params)
    n = params.n
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV_VAR, "1"))

    tasks = [(row, col) for row in range(len(labels)) for col in range(len(basis.labels))]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(
                pool.map(lambda rc: matrix_element(labels[rc[0]], basis.labels[rc[1]], n), tasks)
            )
    else:
        values = [matrix_element(labels[row], basis.labels[col], n) for row, col in tasks]

    width = len(basis.labels)
    grid = [values[row * width : (row + 1) * width] for row in range(len(labels))]
    matrix = RationalMatrix(grid)
    constraint = ConstraintMatrix(matrix=matrix, row_labels=labels, basis=basis)
    _check_matrix_invariants(constraint)
    return constraint


def _check_matrix_invariants(cm: ConstraintMatrix) -> None:
    matrix, n = cm.matrix, cm.n
    if any(entry != 1 for entry in matrix.row(0)):
        raise ConsistencyError("first row is not all ones")
    if any(entry < 0 for row in matrix.entries for entry in row):
        raise ConsistencyError("negative matrix entry")
    # Weighted row sums over each loss-weight block must be a constant row:
    # the orbit-size weighted block sum counts all placements of k losses.
    for k in range(1, cm.t + 1):
        block = [label for label in cm.row_labels if label.weight == k]
        expected = math.comb(n, k)
        for col in range(matrix.cols):
            acc = Fraction(0)
            for label in block:
                coefficient = orbit_size(label.padded(n))
                acc += coefficient * matrix[label.index - 1, col]
            if acc != expected:
                raise ConsistencyError(
                    f"weighted row sum for loss weight {k}, column {col} is {acc},"
                    f" expected {expected}"
                )


def min_distance(basis: DickeBasis) -> int:
    """Minimum Manhattan distance over the expanded orbits of the basis labels.

    Cross-orbit minima are attained by aligning both labels in sorted order;
    within one orbit the minimum is twice the smallest gap between distinct
    entry values.  Constant labels contribute no within-orbit pair.
    """
    best: int | None = None
    sorted_labels = [tuple(sorted(label, reverse=True)) for label in basis.labels]
    for i in range(len(sorted_labels)):
        for j in range(i + 1, len(sorted_labels)):
            d = sum(abs(a - b) for a, b in zip(sorted_labels[i], sorted_labels[j]))
            if best is None or d < best:
                best = d
    for label in basis.labels:
        values = sorted(set(label))
        if len(values) >= 2:
            gap = min(b - a for a, b in zip(values, values[1:]))
            if best is None or 2 * gap < best:
                best = 2 * gap
    if best is None:
        raise ValueError("distance undefined: a single constant label has no vector pairs")
    return best


def min_distance_bruteforce(basis: DickeBasis, cap: int = DISTANCE_BRUTEFORCE_CAP) -> int:
    """Exact minimum over all distinct pairs in the expanded orbit union.

    Refuses when the union exceeds ``cap`` vectors.  Quadratic; this is the
    oracle that validates :func:`min_distance`, not a production path.
    """
    sizes = [orbit_size(label) for label in basis.labels]
    total = sum(sizes)
    if total > cap:
        raise ValueError(f"orbit union has {total} vectors, exceeding the cap of {cap}")
    vectors = [v for label in basis.labels for v in enumerate_orbit(label)]
    arr = np.asarray(vectors, dtype=np.int32)
    count = arr.shape[0]
    if count < 2:
        raise ValueError("distance undefined: fewer than two vectors in the orbit union")
    sentinel = 2 * basis.n + 1  # strictly above any achievable distance
    chunk = max(1, 20_000_000 // (count * arr.shape[1]))
    best = sentinel
    for start in range(0, count - 1, chunk):
        block = arr[start : start + chunk]
        sums = np.abs(block[:, None, :] - arr[None, start:, :]).sum(axis=2)
        for i in range(block.shape[0]):
            sums[i, : i + 1] = sentinel  # mask self-pairs and the lower triangle
        best = min(best, int(sums.min()))
    return best


def synthesize(params: SynthesisParams, threads: int | None = None) -> CodeSpec:
    """Run the full pipeline; raise :class:`SynthesisFailure` when no code exists.

    The nullspace vector is chosen canonically: first basis vector of the
    deterministic nullspace, integer-scaled, sign oriented so the coefficient
    of the all-ones label is non-negative.
    """
    basis = build_Qu(params)
    distance = min_distance(basis)
    required = 2 * params.t + 1
    if distance < required:
        raise SynthesisFailure(
            "distance", {"distance": distance, "required": required, "n": params.n}
        )
    constraint = build_matrix(params, threads=threads)
    null_basis = exact.nullspace(constraint.matrix)
    if not null_basis.vectors:
        raise SynthesisFailure(
            "nullity",
            {"rank": null_basis.rank, "columns": constraint.matrix.cols, "nullity": 0},
        )
    x = list(null_basis.vectors[0])
    if x[-1] < 0:
        x = [-value for value in x]
    if sum(x, Fraction(0)) != 0:
        raise ConsistencyError("nullspace vector entries do not sum to zero")
    return _assemble_code_spec(params, basis, tuple(x), distance, len(null_basis.vectors))


def _assemble_code_spec(
    params: SynthesisParams,
    basis: DickeBasis,
    x: RationalVector,
    distance: int,
    nullity: int,
) -> CodeSpec:
    if len(x) != len(basis.labels):
        raise ValueError("vector length does not match the basis")
    if sum(x, Fraction(0)) != 0:
        raise ValueError("vector entries must sum to zero")
    positive_total = sum((value for value in x if value > 0), Fraction(0))
    if positive_total == 0:
        raise ValueError("vector must have a positive entry")
    zero_weights = {
        label: value / positive_total for label, value in zip(basis.labels, x) if value > 0
    }
    one_weights = {
        label: -value / positive_total for label, value in zip(basis.labels, x) if value < 0
    }
    if sum(zero_weights.values()) != 1 or sum(one_weights.values()) != 1:
        raise ConsistencyError("codeword weights do not normalize")
    return CodeSpec(
        params=params,
        basis=basis,
        x=x,
        zero_weights=zero_weights,
        one_weights=one_weights,
        distance=distance,
        nullity=nullity,
    )


def fidelity_lower_bound(total_excitation: int, t: int, gamma: float) -> float:
    """Worst-case fidelity floor after correcting ``t`` losses at strength ``gamma``."""
    if not 0 <= gamma <= 1:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    if not 0 <= t <= total_excitation:
        raise ValueError("t must satisfy 0 <= t <= total excitation")
    return sum(
        math.comb(total_excitation, k) * gamma**k * (1 - gamma) ** (total_excitation - k)
        for k in range(t + 1)
    )


@dataclass(frozen=True)
class SearchResult:
    t: int
    mode: str
    w: int
    total_excitation: int
    certificate: CodeSpec | dict
    scan: tuple


def search_min_excitation(t: int, mode: str, w_max: int = 60) -> SearchResult:
    """Smallest base integer whose synthesis (or counting bound) admits a code.

    ``mode="inequality"`` uses the partition-counting bound with ``u = t + 1``
    and never builds a matrix.  ``mode="exact"`` runs the full pipeline for
    each candidate ``w``; for ``t = 1`` it first tries the special three-mode
    construction (``w = 1, u = 3``), which beats every ``w >= 2`` candidate.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    if mode == "inequality":
        target = cumulative_partition_count(t) - math.comb(t, 2)
        scan = []
        for w in range(2, w_max + 1):
            p_w = partition_count(w)
            if p_w >= target:
                certificate = {
                    "p_w": p_w,
                    "pair_bound": math.comb(t, 2),
                    "loss_classes": cumulative_partition_count(t),
                }
                return SearchResult(t, mode, w, w * (t + 1), certificate, tuple(scan))
            scan.append((w, "inequality"))
        raise SearchExhausted(t, w_max, tuple(scan))
    if mode == "exact":
        scan = []

        def candidates() -> Iterator[SynthesisParams]:
            if t == 1:
                yield SynthesisParams.create(1, w=1, u=3)
            for w in range(2, w_max + 1):
                yield SynthesisParams.create(t, w=w)

        for params in candidates():
            try:
                spec = synthesize(params)
            except SynthesisFailure as failure:
                scan.append((params.w, failure.reason))
                continue
            return SearchResult(t, mode, params.w, params.n, spec, tuple(scan))
        raise SearchExhausted(t, w_max, tuple(scan))
    raise ValueError(f"unknown search mode {mode!r}")


def row_dependence_check(cm: ConstraintMatrix, h: int, w_err: int) -> bool:
    """Exact overcounting identity tying the weight-``h`` ones row to heavier rows.

    Picking ``h`` photons from exactly ``h`` modes can be overcounted by first
    picking ``w_err`` photons and then keeping ``h`` of them; the identity
    holds column by column with elementary-symmetric coefficients.
    """
    if not 1 <= h < w_err <= cm.t:
        raise ValueError("need 1 <= h < w_err <= t")
    n = cm.n
    reference_index = cumulative_partition_count(h) - 1
    reference = cm.row_labels[reference_index]
    if reference.partition.parts != (1,) * h:
        raise ConsistencyError("row ordering broken: expected the all-ones loss partition")
    heavier = [label for label in cm.row_labels if label.weight == w_err]
    scale = math.comb(n - h, w_err - h)
    for col in range(cm.matrix.cols):
        lhs = scale * orbit_size(reference.padded(n)) * cm.matrix[reference_index, col]
        rhs = Fraction(0)
        for label in heavier:
            b = orbit_size(label.padded(n)) * cm.matrix[label.index - 1, col]
            rhs += b * elementary_symmetric(label.partition, h)
        if lhs != rhs:
            return False
    return True
