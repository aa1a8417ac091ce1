"""Exact rational linear algebra: rank, nullspace, and products.

Matrix entries are :class:`fractions.Fraction` values, which stay in lowest
terms after every operation, so rank and nullity decisions are exact.  The
elimination uses the first nonzero entry in column order as pivot; over exact
rationals no magnitude pivoting is needed and the output is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

RationalVector = tuple[Fraction, ...]


class RationalMatrix:
    """An immutable dense matrix of exact rationals."""

    __slots__ = ("entries", "rows", "cols")

    def __init__(self, entries: Iterable[Iterable[Fraction | int | str]]) -> None:
        grid = tuple(tuple(_as_fraction(x) for x in row) for row in entries)
        if not grid or not grid[0]:
            raise ValueError("matrix must have at least one row and one column")
        if any(len(row) != len(grid[0]) for row in grid):
            raise ValueError("matrix rows must all have the same length")
        object.__setattr__(self, "entries", grid)
        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", len(grid[0]))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("RationalMatrix is immutable")

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> RationalVector:
        return self.entries[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols})"


@dataclass(frozen=True)
class NullspaceBasis:
    """A basis of the right nullspace, plus the matrix rank.

    Each vector is scaled to coprime integers with a positive last nonzero
    entry; the basis vectors come from the reduced-row-echelon free-variable
    construction in ascending free-column order, so the output is a
    deterministic function of the input matrix.
    """

    vectors: tuple[RationalVector, ...]
    rank: int


def _as_fraction(x: Fraction | int | str) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def matrix_from_strings(rows: Sequence[Sequence[str]]) -> RationalMatrix:
    """Build a matrix from ``"p/q"`` strings (convenience for frozen test data)."""
    return RationalMatrix([[Fraction(x) for x in row] for row in rows])


def format_rational(x: Fraction) -> str:
    """Serialize a rational as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


def _rref(matrix: RationalMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns, by exact Gauss-Jordan."""
    work = [list(row) for row in matrix.entries]
    pivots: list[int] = []
    r = 0
    for c in range(matrix.cols):
        pivot_row = next((i for i in range(r, matrix.rows) if work[i][c] != 0), None)
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        pivot = work[r][c]
        work[r] = [x / pivot for x in work[r]]
        for i in range(matrix.rows):
            if i != r and work[i][c] != 0:
                factor = work[i][c]
                work[i] = [a - factor * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == matrix.rows:
            break
    return work, pivots


def rank(matrix: RationalMatrix) -> int:
    """The exact rank of the matrix."""
    return len(_rref(matrix)[1])


def nullspace(matrix: RationalMatrix) -> NullspaceBasis:
    """The exact right nullspace in canonical form.

    Every returned vector is re-multiplied against the matrix before return;
    a nonzero product indicates a bug and raises.
    """
    rref_rows, pivots = _rref(matrix)
    free_cols = [c for c in range(matrix.cols) if c not in pivots]
    vectors = []
    for free in free_cols:
        v = [Fraction(0)] * matrix.cols
        v[free] = Fraction(1)
        for row_idx, pivot_col in enumerate(pivots):
            v[pivot_col] = -rref_rows[row_idx][free]
        vectors.append(integer_scaled(v))
    basis = NullspaceBasis(tuple(vectors), rank=len(pivots))
    zero = (Fraction(0),) * matrix.rows
    for v in basis.vectors:
        if matvec(matrix, v) != zero:
            raise ArithmeticError("nullspace vector failed exact verification")
    return basis


def nullity(matrix: RationalMatrix) -> int:
    return matrix.cols - rank(matrix)


def integer_scaled(vector: Sequence[Fraction]) -> RationalVector:
    """Scale a nonzero rational vector to coprime integers, last nonzero entry positive."""
    if all(x == 0 for x in vector):
        raise ValueError("cannot scale the zero vector")
    denominator_lcm = math.lcm(*(x.denominator for x in vector))
    ints = [int(x * denominator_lcm) for x in vector]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    last_nonzero = next(x for x in reversed(ints) if x != 0)
    if last_nonzero < 0:
        ints = [-x for x in ints]
    return tuple(Fraction(x) for x in ints)


def matvec(matrix: RationalMatrix, vector: Sequence[Fraction | int]) -> RationalVector:
    """Exact matrix-vector product."""
    if len(vector) != matrix.cols:
        raise ValueError(
            f"dimension mismatch: matrix has {matrix.cols} columns, vector has {len(vector)}"
        )
    vec = [_as_fraction(x) for x in vector]
    return tuple(sum((a * b for a, b in zip(row, vec)), Fraction(0)) for row in matrix.entries)


def in_span(vector: Sequence[Fraction | int], basis: Sequence[Sequence[Fraction | int]]) -> bool:
    """Exact membership of ``vector`` in the span of ``basis`` (row vectors)."""
    if not basis:
        return all(_as_fraction(x) == 0 for x in vector)
    stacked = RationalMatrix(list(basis))
    augmented = RationalMatrix(list(basis) + [list(vector)])
    return rank(stacked) == rank(augmented)


def same_span(
    first: Sequence[Sequence[Fraction | int]], second: Sequence[Sequence[Fraction | int]]
) -> bool:
    """Exact equality of the spans of two families of vectors."""
    return all(in_span(v, second) for v in first) and all(in_span(v, first) for v in second)
