from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb, lcm
from typing import Iterator, Sequence

import sympy
from sympy.polys.polyfuncs import interpolate

from ..exceptions import InvalidParameterError, VerificationError
from .exact_linalg import (
    IntVector,
    KernelBasis,
    RationalMatrix,
    determinant,
    inverse,
    kernel_basis,
    rank,
    row_space_basis,
    solve,
)

logger = logging.getLogger(__name__)

_T = sympy.Symbol("t")


@dataclass(frozen=True)
class KernelPolytope:
    """P = [0,1]^d ∩ ker(A) with its vertices and the period of its dilations."""

    matrix: RationalMatrix
    kernel: KernelBasis
    dim: int
    vertices: tuple[tuple[Fraction, ...], ...]
    period: int
    fixed_zero: tuple[int, ...]


@dataclass(frozen=True)
class QuasiPolynomial:
    degree: int
    period: int
    coefficients: tuple[tuple[Fraction, ...], ...]

    def constituent(self, residue: int) -> tuple[Fraction, ...]:
        return self.coefficients[residue % self.period]

    def __call__(self, t: int) -> Fraction:
        value = Fraction(0)
        for coefficient in reversed(self.constituent(t)):
            value = value * t + coefficient
        return value

    @property
    def leading_coefficient(self) -> Fraction:
        return self.coefficients[0][self.degree]


@dataclass(frozen=True)
class _EnumerationPlan:
    free: tuple[int, ...]
    numerators: tuple[tuple[int, ...], ...]
    denominator: int


def _ceil_div(numerator: int, denominator: int) -> int:
    return -((-numerator) // denominator)


@lru_cache(maxsize=256)
def _enumeration_plan(kernel: KernelBasis) -> _EnumerationPlan:
    best: tuple[Fraction, tuple[int, ...], RationalMatrix] | None = None
    for coords in combinations(range(kernel.ambient_dim), kernel.dim):
        block = kernel.coordinate_block(coords)
        size = abs(determinant(block))
        if size != 0 and (best is None or size < best[0]):
            best = (size, coords, block)
    if best is None:
        raise VerificationError("kernel basis has no invertible coordinate block")
    _, free, block = best
    # x = s · (B^-1 V) for the values s chosen on the free coordinates
    transfer = inverse(block) @ kernel.as_matrix()
    denominator = lcm(*(value.denominator for value in transfer.entries))
    numerators = tuple(
        tuple(int(value * denominator) for value in transfer.row(i)) for i in range(transfer.rows)
    )
    logger.debug("free coordinates %s, denominator %d", free, denominator)
    return _EnumerationPlan(free=free, numerators=numerators, denominator=denominator)


def kernel_box_points(kernel: KernelBasis, lo: int, hi: int) -> Iterator[IntVector]:
    """Every integer x in ker(A) with lo <= x_i <= hi, lexicographic in the free coordinates."""
    if hi < lo:
        raise InvalidParameterError(f"empty box [{lo}, {hi}]")
    d, r = kernel.ambient_dim, kernel.dim
    if r == 0:
        if d == 0 or lo <= 0 <= hi:
            yield (0,) * d
        return

    plan = _enumeration_plan(kernel)
    dependent = [i for i in range(d) if i not in plan.free]
    denominator = plan.denominator
    low, high = lo * denominator, hi * denominator
    last = plan.numerators[-1]
    for prefix in product(range(lo, hi + 1), repeat=r - 1):
        base = [sum(s * row[i] for s, row in zip(prefix, plan.numerators)) for i in range(d)]
        t_lo, t_hi = lo, hi
        for i in dependent:
            c, b = last[i], base[i]
            if c > 0:
                t_lo = max(t_lo, _ceil_div(low - b, c))
                t_hi = min(t_hi, (high - b) // c)
            elif c < 0:
                t_lo = max(t_lo, _ceil_div(high - b, c))
                t_hi = min(t_hi, (low - b) // c)
            elif not low <= b <= high:
                t_hi = t_lo - 1
            if t_hi < t_lo:
                break
        for t in range(t_lo, t_hi + 1):
            values = [b + c * t for b, c in zip(base, last)]
            if denominator > 1 and any(value % denominator for value in values):
                continue
            yield tuple(value // denominator for value in values)


@lru_cache(maxsize=256)
def polytope(matrix: RationalMatrix) -> KernelPolytope:
    kernel = kernel_basis(matrix)
    d, r = matrix.cols, kernel.dim
    equations = row_space_basis(matrix)
    found: set[tuple[Fraction, ...]] = set()
    for coords in combinations(range(d), r):
        tight = RationalMatrix.from_rows([[1 if c == k else 0 for c in range(d)] for k in coords], cols=d)
        system = equations.stack(tight)
        if rank(system) < d:
            continue
        for values in product((0, 1), repeat=r):
            result = solve(system, [0] * equations.rows + list(values))
            if result.consistent and all(0 <= value <= 1 for value in result.solution):
                found.add(result.solution)
    vertices = tuple(sorted(found))
    dim = rank(RationalMatrix.from_rows([list(v) for v in vertices], cols=d)) if d else 0
    period = lcm(*(value.denominator for vertex in vertices for value in vertex))
    fixed_zero = tuple(i for i in range(d) if all(vertex[i] == 0 for vertex in vertices))
    logger.debug("polytope: %d vertices, dim %d, period %d", len(vertices), dim, period)
    return KernelPolytope(
        matrix=matrix, kernel=kernel, dim=dim, vertices=vertices, period=period, fixed_zero=fixed_zero
    )


def count_dilation(polytope_: KernelPolytope, t: int, interior: bool = False) -> int:
    """Lattice points of tP, or of its relative interior when ``interior`` is set."""
    if t < 0:
        raise InvalidParameterError("dilation factor must be non-negative")
    strict = [i for i in range(polytope_.matrix.cols) if i not in polytope_.fixed_zero]
    count = 0
    for point in kernel_box_points(polytope_.kernel, 0, t):
        if interior and any(not 0 < point[i] < t for i in strict):
            continue
        count += 1
    return count


def count_positive_points(polytope_: KernelPolytope, t: int) -> int:
    if t < 1:
        return 0
    return sum(1 for _ in kernel_box_points(polytope_.kernel, 1, t))


def _to_fraction(value: sympy.Expr) -> Fraction:
    rational = sympy.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def ehrhart(polytope_: KernelPolytope, extra_samples: int = 3) -> QuasiPolynomial:
    period, degree = polytope_.period, polytope_.dim
    constituents: list[tuple[Fraction, ...]] = []
    for residue in range(period):
        start = 0 if residue else 1
        samples = [residue + period * j for j in range(start, start + degree + 1 + extra_samples)]
        fit, held_out = samples[: degree + 1], samples[degree + 1 :]
        points = [(t, count_dilation(polytope_, t)) for t in fit]
        fitted = sympy.Poly(interpolate(points, _T), _T)
        coefficients = [_to_fraction(c) for c in reversed(fitted.all_coeffs())]
        if len(coefficients) > degree + 1:
            raise VerificationError(f"residue {residue}: interpolant exceeds degree {degree}")
        coefficients += [Fraction(0)] * (degree + 1 - len(coefficients))
        constituents.append(tuple(coefficients))
        for t in held_out:
            expected = count_dilation(polytope_, t)
            value = sum(c * t**power for power, c in enumerate(coefficients))
            if value != expected:
                raise VerificationError(
                    f"Ehrhart interpolant predicts {value} lattice points at t={t}, counted {expected}"
                )
    leading = {constituent[degree] for constituent in constituents}
    if len(leading) != 1:
        raise VerificationError(f"leading coefficients differ across residues: {sorted(leading)}")
    logger.info("Ehrhart quasi-polynomial: degree %d, period %d, leading %s", degree, period, leading)
    return QuasiPolynomial(degree=degree, period=period, coefficients=tuple(constituents))


def reciprocity_check(qp: QuasiPolynomial, polytope_: KernelPolytope, t: int) -> bool:
    """Interior count of tP against (-1)^dim qp(-t); only defined for positive t."""
    if t < 1:
        raise InvalidParameterError("reciprocity compares positive dilations")
    interior = count_dilation(polytope_, t, interior=True)
    return interior == (-1) ** polytope_.dim * qp(-t)


def non_rainbow_upper_bound(class_sizes: Sequence[int], d: int, kernel_dim: int, n: int) -> int:
    """Same-colour pairs times position pairs times the fibre size of the reduced system."""
    if kernel_dim < 2:
        raise InvalidParameterError("the counting bound needs a kernel of dimension at least 2")
    return sum(size * size for size in class_sizes) * comb(d, 2) * n ** (kernel_dim - 2)
