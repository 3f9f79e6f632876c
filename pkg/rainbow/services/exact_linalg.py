from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Sequence

from ..exceptions import InvalidParameterError

logger = logging.getLogger(__name__)

Rational = Fraction
IntVector = tuple[int, ...]


def as_rational(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise InvalidParameterError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise InvalidParameterError(
                f"expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} matrix, "
                f"got {len(self.entries)}"
            )
        object.__setattr__(self, "entries", tuple(as_rational(value) for value in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], cols: int | None = None) -> RationalMatrix:
        if cols is None:
            if not rows:
                raise InvalidParameterError("column count is required for a matrix without rows")
            cols = len(rows[0])
        flat: list[object] = []
        for index, row in enumerate(rows):
            if len(row) != cols:
                raise InvalidParameterError(f"row {index} has {len(row)} entries, expected {cols}")
            flat.extend(row)
        return cls(rows=len(rows), cols=cols, entries=tuple(flat))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RationalMatrix:
        return cls(rows=rows, cols=cols, entries=(Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, size: int) -> RationalMatrix:
        return cls.from_rows(
            [[1 if i == j else 0 for j in range(size)] for i in range(size)], cols=size
        )

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_lists(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_zero(self) -> bool:
        return all(value == 0 for value in self.entries)

    def transpose(self) -> RationalMatrix:
        return RationalMatrix.from_rows(
            [list(self.column(j)) for j in range(self.cols)], cols=self.rows
        )

    def apply(self, vector: Sequence[object]) -> tuple[Fraction, ...]:
        if len(vector) != self.cols:
            raise InvalidParameterError(f"vector has length {len(vector)}, matrix has {self.cols} columns")
        values = [as_rational(v) for v in vector]
        return tuple(sum((a * b for a, b in zip(self.row(i), values)), Fraction(0)) for i in range(self.rows))

    def annihilates(self, vector: Sequence[object]) -> bool:
        return all(value == 0 for value in self.apply(vector))

    def select_columns(self, indices: Sequence[int]) -> RationalMatrix:
        return RationalMatrix.from_rows(
            [[self.entry(i, j) for j in indices] for i in range(self.rows)], cols=len(indices)
        )

    def permute_columns(self, order: Sequence[int]) -> RationalMatrix:
        if sorted(order) != list(range(self.cols)):
            raise InvalidParameterError("column order must be a permutation")
        return self.select_columns(order)

    def scale_row(self, i: int, factor: object) -> RationalMatrix:
        factor = as_rational(factor)
        if factor == 0:
            raise InvalidParameterError("row scaling factor must be nonzero")
        rows = self.to_lists()
        rows[i] = [value * factor for value in rows[i]]
        return RationalMatrix.from_rows(rows, cols=self.cols)

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise InvalidParameterError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return RationalMatrix.from_rows(
            [
                [sum((self.entry(i, k) * other.entry(k, j) for k in range(self.cols)), Fraction(0))
                 for j in range(other.cols)]
                for i in range(self.rows)
            ],
            cols=other.cols,
        )

    def stack(self, other: RationalMatrix) -> RationalMatrix:
        if other.cols != self.cols:
            raise InvalidParameterError("stacked matrices need the same column count")
        return RationalMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def __str__(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines.extend(" ".join(str(value) for value in self.row(i)) for i in range(self.rows))
        return "\n".join(lines)


@dataclass(frozen=True)
class KernelBasis:
    ambient_dim: int
    vectors: tuple[IntVector, ...]

    def __post_init__(self) -> None:
        for vector in self.vectors:
            if len(vector) != self.ambient_dim:
                raise InvalidParameterError("kernel vector length does not match the ambient dimension")

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def as_matrix(self) -> RationalMatrix:
        return RationalMatrix.from_rows([list(v) for v in self.vectors], cols=self.ambient_dim)

    def coordinate_block(self, coordinates: Sequence[int]) -> RationalMatrix:
        """Rows are basis vectors restricted to ``coordinates``."""
        return RationalMatrix.from_rows(
            [[v[c] for c in coordinates] for v in self.vectors], cols=len(coordinates)
        )


@dataclass(frozen=True)
class LinearSolution:
    consistent: bool
    solution: tuple[Fraction, ...] | None = None


def primitive_vector(values: Iterable[object]) -> IntVector:
    """Clear denominators, divide by the gcd and make the first nonzero entry positive."""
    rationals = [as_rational(v) for v in values]
    scale = lcm(*(value.denominator for value in rationals)) if rationals else 1
    integers = [int(value * scale) for value in rationals]
    divisor = gcd(*integers) if integers else 0
    if divisor == 0:
        return tuple(integers)
    integers = [value // divisor for value in integers]
    leading = next(value for value in integers if value != 0)
    if leading < 0:
        integers = [-value for value in integers]
    return tuple(integers)


@lru_cache(maxsize=1024)
def rref(matrix: RationalMatrix) -> tuple[RationalMatrix, tuple[int, ...]]:
    work = matrix.to_lists()
    pivots: list[int] = []
    pivot_row = 0
    for col in range(matrix.cols):
        if pivot_row == matrix.rows:
            break
        row = next((r for r in range(pivot_row, matrix.rows) if work[r][col] != 0), None)
        if row is None:
            continue
        work[pivot_row], work[row] = work[row], work[pivot_row]
        pivot = work[pivot_row][col]
        work[pivot_row] = [value / pivot for value in work[pivot_row]]
        for r in range(matrix.rows):
            factor = work[r][col]
            if r != pivot_row and factor != 0:
                work[r] = [a - factor * b for a, b in zip(work[r], work[pivot_row])]
        pivots.append(col)
        pivot_row += 1
    return RationalMatrix.from_rows(work, cols=matrix.cols), tuple(pivots)


def rank(matrix: RationalMatrix) -> int:
    if matrix.cols == 0:
        return 0
    return len(rref(matrix)[1])


def determinant(matrix: RationalMatrix) -> Fraction:
    if matrix.rows != matrix.cols:
        raise InvalidParameterError("determinant needs a square matrix")
    work = matrix.to_lists()
    result = Fraction(1)
    for col in range(matrix.cols):
        row = next((r for r in range(col, matrix.rows) if work[r][col] != 0), None)
        if row is None:
            return Fraction(0)
        if row != col:
            work[col], work[row] = work[row], work[col]
            result = -result
        pivot = work[col][col]
        result *= pivot
        for r in range(col + 1, matrix.rows):
            factor = work[r][col] / pivot
            if factor:
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
    return result


def inverse(matrix: RationalMatrix) -> RationalMatrix:
    size = matrix.rows
    if size != matrix.cols:
        raise InvalidParameterError("inverse needs a square matrix")
    augmented = RationalMatrix.from_rows(
        [list(matrix.row(i)) + [1 if i == j else 0 for j in range(size)] for i in range(size)],
        cols=2 * size,
    )
    reduced, pivots = rref(augmented)
    if pivots[:size] != tuple(range(size)):
        raise InvalidParameterError("matrix is singular")
    return RationalMatrix.from_rows([list(reduced.row(i))[size:] for i in range(size)], cols=size)


def row_space_basis(matrix: RationalMatrix) -> RationalMatrix:
    """The nonzero rows of the reduced row echelon form."""
    reduced, pivots = rref(matrix)
    return RationalMatrix.from_rows([list(reduced.row(i)) for i in range(len(pivots))], cols=matrix.cols)


@lru_cache(maxsize=1024)
def kernel_basis(matrix: RationalMatrix) -> KernelBasis:
    reduced, pivots = rref(matrix)
    pivot_set = set(pivots)
    vectors: list[IntVector] = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        vector = [Fraction(0)] * matrix.cols
        vector[free] = Fraction(1)
        for r, p in enumerate(pivots):
            vector[p] = -reduced.entry(r, free)
        vectors.append(primitive_vector(vector))
    logger.debug("kernel of %dx%d matrix has dimension %d", matrix.rows, matrix.cols, len(vectors))
    return KernelBasis(ambient_dim=matrix.cols, vectors=tuple(vectors))


def solve(matrix: RationalMatrix, rhs: Sequence[object]) -> LinearSolution:
    if len(rhs) != matrix.rows:
        raise InvalidParameterError(f"right-hand side has length {len(rhs)}, expected {matrix.rows}")
    augmented = RationalMatrix.from_rows(
        [list(matrix.row(i)) + [as_rational(rhs[i])] for i in range(matrix.rows)], cols=matrix.cols + 1
    )
    reduced, pivots = rref(augmented)
    if pivots and pivots[-1] == matrix.cols:
        return LinearSolution(consistent=False)
    solution = [Fraction(0)] * matrix.cols
    for r, p in enumerate(pivots):
        solution[p] = reduced.entry(r, matrix.cols)
    return LinearSolution(consistent=True, solution=tuple(solution))


def delete_columns(matrix: RationalMatrix, i: int, j: int) -> RationalMatrix:
    if not 0 <= i < j < matrix.cols:
        raise InvalidParameterError(
            f"column pair ({i}, {j}) is invalid for a matrix with {matrix.cols} columns"
        )
    return matrix.select_columns([c for c in range(matrix.cols) if c not in (i, j)])
