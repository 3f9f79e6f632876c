from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, count
from math import comb

import sympy

from ..exceptions import InvalidParameterError, NotRainbowRegularError, VerificationError
from .exact_linalg import (
    IntVector,
    KernelBasis,
    RationalMatrix,
    delete_columns,
    kernel_basis,
    primitive_vector,
    rank,
    row_space_basis,
)
from .lattice_geometry import ehrhart, polytope

logger = logging.getLogger(__name__)

Pair = tuple[int, int]


@dataclass(frozen=True)
class ConditionCheck:
    passed: bool
    table: dict[Pair, object]
    failing_pair: Pair | None = None


@dataclass(frozen=True)
class RegularityVerdict:
    regular: bool
    rank: int
    kernel_dim: int
    positive_witness: IntVector | None = None
    failing_pair: Pair | None = None
    vanishing_row: tuple[Fraction, ...] | None = None
    condition_iii_table: dict[Pair, int] = field(default_factory=dict)
    condition_iv_table: dict[Pair, bool] = field(default_factory=dict)
    reason: str | None = None


@dataclass(frozen=True)
class RobustConstant:
    nu: Fraction
    c_squared: Fraction

    @property
    def exact(self) -> sympy.Expr:
        return sympy.sqrt(sympy.Rational(self.c_squared.numerator, self.c_squared.denominator))

    def decimal(self, digits: int = 15) -> str:
        return str(sympy.N(self.exact, digits))


@dataclass(frozen=True)
class ConjectureReport:
    theorem_regular: bool
    rows_independent: bool
    distinct_positive_vectors: tuple[IntVector, ...]
    conjecture_one: bool
    conjecture_two: bool

    @property
    def refuted(self) -> tuple[str, ...]:
        names = []
        if self.conjecture_one != self.theorem_regular:
            names.append("conjecture_one")
        if self.conjecture_two != self.theorem_regular:
            names.append("conjecture_two")
        return tuple(names)


def _phase_one(rows: list[list[Fraction]], rhs: list[Fraction], n_vars: int) -> list[Fraction] | None:
    """Find s >= 0 with rows · s = rhs by minimising the artificial variables (Bland's rule)."""
    m = len(rows)
    total = n_vars + m
    table: list[list[Fraction]] = []
    for i, (row, b) in enumerate(zip(rows, rhs)):
        sign = -1 if b < 0 else 1
        artificial = [Fraction(1 if k == i else 0) for k in range(m)]
        table.append([sign * value for value in row] + artificial + [sign * b])
    basis = [n_vars + i for i in range(m)]
    cost = [Fraction(0)] * (total + 1)
    for row in table:
        for j in range(n_vars):
            cost[j] -= row[j]
        cost[total] -= row[total]

    while True:
        entering = next((j for j in range(total) if cost[j] < 0), None)
        if entering is None:
            break
        leaving = None
        for i, row in enumerate(table):
            if row[entering] <= 0:
                continue
            ratio = row[total] / row[entering]
            if leaving is None or (ratio, basis[i]) < leaving[0]:
                leaving = ((ratio, basis[i]), i)
        if leaving is None:
            raise VerificationError("phase-one objective is unbounded")
        pivot_row = leaving[1]
        pivot = table[pivot_row][entering]
        table[pivot_row] = [value / pivot for value in table[pivot_row]]
        for i in range(m):
            factor = table[i][entering]
            if i != pivot_row and factor != 0:
                table[i] = [a - factor * b for a, b in zip(table[i], table[pivot_row])]
        factor = cost[entering]
        cost = [a - factor * b for a, b in zip(cost, table[pivot_row])]
        basis[pivot_row] = entering
        logger.debug("pivot: column %d enters at row %d", entering, pivot_row)

    if cost[total] != 0:
        return None
    solution = [Fraction(0)] * n_vars
    for i, var in enumerate(basis):
        if var < n_vars:
            solution[var] = table[i][total]
    return solution


def positive_kernel_vector(matrix: RationalMatrix) -> IntVector | None:
    """A primitive integer vector with entries >= 1 in ker(A), decided by exact phase-one simplex."""
    if matrix.cols == 0:
        return None
    equations = row_space_basis(matrix)
    rows = [list(equations.row(i)) for i in range(equations.rows)]
    # substitute x = 1 + s, s >= 0
    rhs = [-sum(row, Fraction(0)) for row in rows]
    shift = _phase_one(rows, rhs, matrix.cols)
    if shift is None:
        return None
    witness = primitive_vector([1 + value for value in shift])
    if not matrix.annihilates(witness) or min(witness) < 1:
        raise VerificationError(f"simplex produced an invalid positive witness {witness}")
    return witness


def check_condition_iii(matrix: RationalMatrix) -> ConditionCheck:
    if matrix.cols < 2:
        raise InvalidParameterError("condition (iii) needs at least two columns")
    full = rank(matrix)
    table: dict[Pair, object] = {}
    failing = None
    for pair in combinations(range(matrix.cols), 2):
        table[pair] = rank(delete_columns(matrix, *pair))
        if table[pair] != full and failing is None:
            failing = pair
    return ConditionCheck(passed=failing is None, table=table, failing_pair=failing)


def check_condition_iv(kernel: KernelBasis, d: int) -> ConditionCheck:
    if d < 2:
        raise InvalidParameterError("condition (iv) needs at least two coordinates")
    table: dict[Pair, object] = {}
    failing = None
    for i, j in combinations(range(d), 2):
        separated = any(
            x[i] * y[j] != x[j] * y[i] for x, y in combinations(kernel.vectors, 2)
        )
        table[(i, j)] = separated
        if not separated and failing is None:
            failing = (i, j)
    return ConditionCheck(passed=failing is None, table=table, failing_pair=failing)


def vanishing_row_certificate(matrix: RationalMatrix, i: int, j: int) -> tuple[Fraction, ...] | None:
    """A nonzero row-space vector supported on {i, j}, or None when the pair keeps the rank."""
    basis = row_space_basis(matrix)
    reduced = delete_columns(basis, i, j)
    if rank(reduced) == basis.rows:
        return None
    alphas = kernel_basis(reduced.transpose()).vectors[0]
    row = [
        sum((alpha * basis.entry(k, c) for k, alpha in enumerate(alphas)), Fraction(0))
        for c in range(matrix.cols)
    ]
    certificate = tuple(Fraction(value) for value in primitive_vector(row))
    if any(value != 0 for c, value in enumerate(certificate) if c not in (i, j)):
        raise VerificationError(f"certificate {certificate} is not supported on ({i}, {j})")
    return certificate


def is_rainbow_regular(matrix: RationalMatrix) -> RegularityVerdict:
    d = matrix.cols
    full = rank(matrix)
    if d == 0:
        return RegularityVerdict(regular=False, rank=0, kernel_dim=0, reason="matrix has no columns")

    witness = positive_kernel_vector(matrix)
    if d == 1:
        return RegularityVerdict(
            regular=witness is not None,
            rank=full,
            kernel_dim=1 - full,
            positive_witness=witness,
            reason=None if witness is not None else "no positive integer vector in the kernel",
        )

    kernel = kernel_basis(matrix)
    iii = check_condition_iii(matrix)
    iv = check_condition_iv(kernel, d)
    for pair, sub_rank in iii.table.items():
        if (sub_rank == full) != iv.table[pair]:
            raise VerificationError(
                f"conditions (iii) and (iv) disagree on pair {pair}: rank {sub_rank} vs {iv.table[pair]}"
            )

    regular = witness is not None and iii.passed
    vanishing = vanishing_row_certificate(matrix, *iii.failing_pair) if iii.failing_pair else None
    reason = None
    if witness is None:
        reason = "no positive integer vector in the kernel"
    elif not iii.passed:
        reason = f"deleting columns {iii.failing_pair} drops the rank"
    logger.info("matrix %dx%d: regular=%s (%s)", matrix.rows, d, regular, reason or "all pairs keep the rank")
    return RegularityVerdict(
        regular=regular,
        rank=full,
        kernel_dim=kernel.dim,
        positive_witness=witness,
        failing_pair=iii.failing_pair,
        vanishing_row=vanishing,
        condition_iii_table=dict(iii.table),
        condition_iv_table=dict(iv.table),
        reason=reason,
    )


def robust_constant(matrix: RationalMatrix, extra_samples: int = 3) -> RobustConstant:
    verdict = is_rainbow_regular(matrix)
    if not verdict.regular:
        raise NotRainbowRegularError(f"matrix is not rainbow regular: {verdict.reason}", verdict)
    if matrix.cols < 2:
        raise InvalidParameterError("the robustness constant needs at least two columns")
    nu = ehrhart(polytope(matrix), extra_samples).leading_coefficient
    if nu <= 0:
        raise VerificationError(f"leading Ehrhart coefficient {nu} of a rainbow regular matrix is not positive")
    return RobustConstant(nu=nu, c_squared=nu / comb(matrix.cols, 2))


def distinct_positive_kernel_vectors(matrix: RationalMatrix, limit: int = 2) -> tuple[IntVector, ...]:
    """Up to ``limit`` independent kernel vectors with pairwise distinct positive entries."""
    witness = positive_kernel_vector(matrix)
    if witness is None or limit < 1:
        return ()
    kernel = kernel_basis(matrix)
    d = matrix.cols
    pairs = list(combinations(range(d), 2))
    if any(all(v[i] == v[j] for v in kernel.vectors) for i, j in pairs):
        return ()
    tied = [(i, j) for i, j in pairs if witness[i] == witness[j]]
    want_two = limit >= 2 and kernel.dim >= 2
    for lam in count(1):
        g = [sum(lam**k * v[c] for k, v in enumerate(kernel.vectors)) for c in range(d)]
        if any(g[i] == g[j] for i, j in tied):
            continue
        if want_two and rank(RationalMatrix.from_rows([list(witness), g])) < 2:
            continue
        break
    scale = 2 * max(abs(value) for value in g) + 1
    vectors = [primitive_vector([scale * p + q for p, q in zip(witness, g)])]
    if want_two:
        vectors.append(primitive_vector([(scale + 1) * p + q for p, q in zip(witness, g)]))
    return tuple(vectors)


def evaluate_conjectures(matrix: RationalMatrix) -> ConjectureReport:
    verdict = is_rainbow_regular(matrix)
    vectors = distinct_positive_kernel_vectors(matrix, 2)
    rows_independent = rank(matrix) == matrix.rows
    return ConjectureReport(
        theorem_regular=verdict.regular,
        rows_independent=rows_independent,
        distinct_positive_vectors=vectors,
        conjecture_one=len(vectors) >= 2,
        conjecture_two=rows_independent and len(vectors) >= 1,
    )
