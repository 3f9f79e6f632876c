from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from ..exceptions import InvalidParameterError, VerificationError
from .colorings import Coloring, random_bounded_coloring
from .exact_linalg import IntVector, RationalMatrix, delete_columns, kernel_basis, solve
from .lattice_geometry import kernel_box_points, non_rainbow_upper_bound
from .regularity import check_condition_iii, robust_constant

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RainbowReport:
    found: bool
    witness: IntVector | None
    solutions_scanned: int
    non_rainbow_count: int | None = None
    bound: int | None = None


@dataclass(frozen=True)
class NonRainbowCount:
    count: int
    rainbow: int
    total: int
    bound: int | None
    condition_iii: bool


@dataclass(frozen=True)
class RobustReport:
    k: int
    size: int
    epsilon: str
    c_squared: Fraction
    c_decimal: str
    max_class_size: int
    trials: int
    rainbow_found: int
    failures: tuple[int, ...] = field(default_factory=tuple)

    @property
    def note(self) -> str | None:
        if not self.failures:
            return None
        return (
            f"{len(self.failures)} of {self.trials} bounded colourings had no rainbow vector; "
            f"N={self.size} may lie below the threshold the theorem needs"
        )


@lru_cache(maxsize=64)
def kernel_solutions(matrix: RationalMatrix, size: int) -> tuple[IntVector, ...]:
    """All of [size]^d ∩ ker(A), in the enumeration order of kernel_box_points."""
    if size < 1:
        return ()
    return tuple(kernel_box_points(kernel_basis(matrix), 1, size))


def _is_rainbow(vector: IntVector, assign: tuple[int, ...]) -> bool:
    return len({assign[value - 1] for value in vector}) == len(vector)


def find_rainbow(matrix: RationalMatrix, coloring: Coloring) -> RainbowReport:
    d = matrix.cols
    if d == 0 or d > coloring.k:
        return RainbowReport(found=False, witness=None, solutions_scanned=0)
    scanned = 0
    for vector in kernel_solutions(matrix, coloring.size):
        scanned += 1
        if _is_rainbow(vector, coloring.assign):
            if not matrix.annihilates(vector):
                raise VerificationError(f"enumerated vector {vector} is not in the kernel")
            return RainbowReport(found=True, witness=vector, solutions_scanned=scanned)
    return RainbowReport(found=False, witness=None, solutions_scanned=scanned)


def count_non_rainbow(matrix: RationalMatrix, coloring: Coloring) -> NonRainbowCount:
    solutions = kernel_solutions(matrix, coloring.size)
    non_rainbow = sum(1 for vector in solutions if not _is_rainbow(vector, coloring.assign))
    d = matrix.cols
    kernel_dim = kernel_basis(matrix).dim
    bound = None
    if kernel_dim >= 2:
        bound = non_rainbow_upper_bound(coloring.class_sizes, d, kernel_dim, coloring.size)
    condition_iii = d >= 2 and check_condition_iii(matrix).passed
    if condition_iii and bound is not None and non_rainbow > bound:
        raise VerificationError(f"{non_rainbow} non-rainbow vectors exceed the counting bound {bound}")
    return NonRainbowCount(
        count=non_rainbow,
        rainbow=len(solutions) - non_rainbow,
        total=len(solutions),
        bound=bound,
        condition_iii=condition_iii,
    )


def count_fiber(matrix: RationalMatrix, i: int, j: int, z1: int, z2: int, size: int) -> int:
    """Vectors of [size]^d ∩ ker(A) with x_i = z1 and x_j = z2."""
    reduced = delete_columns(matrix, i, j)
    rhs = [-(z1 * matrix.entry(r, i) + z2 * matrix.entry(r, j)) for r in range(matrix.rows)]
    if not solve(reduced, rhs).consistent:
        return 0
    return sum(1 for vector in kernel_solutions(matrix, size) if vector[i] == z1 and vector[j] == z2)


def _run_trial(task: tuple[RationalMatrix, int, int, int, int]) -> bool:
    matrix, size, k, max_class_size, seed = task
    coloring = random_bounded_coloring(size, k, max_class_size, seed)
    return find_rainbow(matrix, coloring).found


def trial_seeds(seed: int, trials: int) -> list[int]:
    return [int(child.generate_state(1)[0]) for child in np.random.SeedSequence(seed).spawn(trials)]


def robust_experiment(
    matrix: RationalMatrix,
    k: int,
    size: int,
    epsilon: Fraction | None,
    trials: int,
    seed: int,
    jobs: int = 1,
    epsilon_ratio: Fraction | None = None,
) -> RobustReport:
    """Draw bounded colourings with classes of size <= (C - ε)N/√k and look for rainbow vectors."""
    if trials < 0:
        raise InvalidParameterError("trials must be non-negative")
    constant = robust_constant(matrix)
    if epsilon_ratio is not None:
        eps = sympy.Rational(epsilon_ratio.numerator, epsilon_ratio.denominator) * constant.exact
    elif epsilon is not None:
        eps = sympy.Rational(epsilon.numerator, epsilon.denominator)
    else:
        raise InvalidParameterError("either epsilon or epsilon_ratio is required")
    if eps <= 0:
        raise InvalidParameterError("epsilon must be positive")
    max_class_size = int(sympy.floor((constant.exact - eps) * size / sympy.sqrt(k)))
    if max_class_size < 1 or k * max_class_size < size or k > size:
        raise InvalidParameterError(
            f"no {k}-colouring of [{size}] has every class of size <= {max_class_size} = "
            f"floor((C - eps) N / sqrt(k)) with C^2 = {constant.c_squared}"
        )

    tasks = [(matrix, size, k, max_class_size, s) for s in trial_seeds(seed, trials)]
    if jobs > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            outcomes = list(executor.map(_run_trial, tasks, chunksize=max(1, trials // (4 * jobs))))
    else:
        outcomes = [_run_trial(task) for task in tasks]
    failures = tuple(index for index, found in enumerate(outcomes) if not found)
    for index in failures:
        logger.warning("trial %d: bounded colouring of [%d] without a rainbow vector", index, size)
    return RobustReport(
        k=k,
        size=size,
        epsilon=str(eps),
        c_squared=constant.c_squared,
        c_decimal=constant.decimal(),
        max_class_size=max_class_size,
        trials=trials,
        rainbow_found=trials - len(failures),
        failures=failures,
    )
