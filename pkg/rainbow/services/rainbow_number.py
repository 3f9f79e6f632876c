from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from ..exceptions import InvalidParameterError, NotRainbowRegularError, VerificationError
from .colorings import Coloring, block_coloring, enumerate_equinumerous, lemma_coloring, orbit_count
from .exact_linalg import IntVector, RationalMatrix
from .lattice_geometry import count_positive_points, kernel_box_points, polytope
from .rainbow_search import _is_rainbow, find_rainbow, kernel_solutions
from .regularity import is_rainbow_regular

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RainbowNumberEstimate:
    matrix: RationalMatrix
    k_checked: tuple[int, int]
    n_max: int
    certificates: dict[int, Coloring | None]
    smallest_clean_k: int | None
    skipped: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    @property
    def proven_not_regular(self) -> tuple[int, ...]:
        return tuple(k for k, coloring in self.certificates.items() if coloring is not None)


@dataclass(frozen=True)
class FibonacciReport:
    d: int
    vertices: tuple[tuple[Fraction, ...], ...]
    counts: tuple[dict[str, int], ...]
    lower_bound_k: int
    tight_witness: IntVector
    below_fibonacci_witness: IntVector | None
    kernel_pair: tuple[IntVector, IntVector]
    upper_bound_margins: tuple[dict[str, object], ...]


def certificate_no_rainbow(matrix: RationalMatrix, k: int, n: int) -> Coloring | None:
    """The first canonical equinumerous k-colouring of [kn] without a rainbow kernel vector."""
    if k < 1 or n < 1:
        raise InvalidParameterError("k and n must be positive")
    size = k * n
    colorings = enumerate_equinumerous(size, k)
    if matrix.cols == 0 or matrix.cols > k:
        return next(colorings)
    # vectors with a repeated value never become rainbow
    distinct = [v for v in kernel_solutions(matrix, size) if len(set(v)) == len(v)]
    for coloring in colorings:
        if not any(_is_rainbow(vector, coloring.assign) for vector in distinct):
            if find_rainbow(matrix, coloring).found:
                raise VerificationError(f"certificate {coloring.assign} has a rainbow vector")
            return coloring
    return None


def _certificate_task(task: tuple[RationalMatrix, int, int]) -> Coloring | None:
    return certificate_no_rainbow(*task)


def estimate_rainbow_number(
    matrix: RationalMatrix, k_max: int, n_max: int, jobs: int = 1, budget: int = 100_000
) -> RainbowNumberEstimate:
    verdict = is_rainbow_regular(matrix)
    if not verdict.regular:
        raise NotRainbowRegularError(f"r(A) is undefined: {verdict.reason}", verdict)
    d = matrix.cols
    if k_max < d:
        raise InvalidParameterError(f"k_max={k_max} is below the trivial lower bound d={d}")
    if n_max < 1:
        raise InvalidParameterError("n_max must be positive")

    certificates: dict[int, Coloring | None] = {}
    skipped: list[tuple[int, int]] = []
    executor = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for k in range(d, k_max + 1):
            tasks = []
            for n in range(1, n_max + 1):
                orbits = orbit_count(k * n, k)
                if orbits > budget:
                    logger.warning("skipping k=%d n=%d: %d canonical colourings exceed the budget", k, n, orbits)
                    skipped.append((k, n))
                    continue
                logger.info("k=%d n=%d: scanning %d canonical colourings", k, n, orbits)
                tasks.append((matrix, k, n))
            found = None
            if executor is not None:
                found = next((c for c in executor.map(_certificate_task, tasks) if c is not None), None)
            else:
                for task in tasks:
                    found = certificate_no_rainbow(*task)
                    if found is not None:
                        break
            certificates[k] = found
    finally:
        if executor is not None:
            executor.shutdown()

    smallest_clean = next((k for k in sorted(certificates) if certificates[k] is None), None)
    return RainbowNumberEstimate(
        matrix=matrix,
        k_checked=(d, k_max),
        n_max=n_max,
        certificates=certificates,
        smallest_clean_k=smallest_clean,
        skipped=tuple(skipped),
    )


def anti_rainbow_coloring(matrix: RationalMatrix, k: int, n: int) -> Coloring | None:
    """An equinumerous k-colouring of [kn] with no rainbow kernel vector, built from a failing pair."""
    verdict = is_rainbow_regular(matrix)
    if verdict.regular:
        raise InvalidParameterError("matrix is rainbow regular; only certificate search applies")
    size = k * n
    witness = verdict.positive_witness
    if witness is None or verdict.failing_pair is None:
        coloring = block_coloring(size, k)
    else:
        i, j = verdict.failing_pair
        # every kernel vector satisfies x_i q_j = x_j q_i
        pair_matrix = RationalMatrix.from_rows([[witness[j], -witness[i]]])
        try:
            coloring = lemma_coloring(pair_matrix, size, k)
        except InvalidParameterError:
            return None
        if not coloring.is_equinumerous:
            logger.info("greedy colouring of [%d] with %d colours is not equinumerous", size, k)
            return None
    if find_rainbow(matrix, coloring).found:
        raise VerificationError("anti-rainbow colouring admits a rainbow vector")
    return coloring


def fib(n: int) -> int:
    if n < 0:
        raise InvalidParameterError("Fibonacci index must be non-negative")
    current, following = 0, 1
    for _ in range(n):
        current, following = following, current + following
    return current


def _sequence_from(first: int, second: int, length: int) -> IntVector:
    values = [first, second]
    while len(values) < length:
        values.append(values[-2] + values[-1])
    return tuple(values[:length])


def fibonacci_matrix(d: int) -> RationalMatrix:
    """Rows encode p_(i+2) = p_i + p_(i+1)."""
    if d < 3:
        raise InvalidParameterError("Fibonacci matrices need d >= 3")
    rows = []
    for i in range(d - 2):
        row = [0] * d
        row[i], row[i + 1], row[i + 2] = 1, 1, -1
        rows.append(row)
    return RationalMatrix.from_rows(rows)


def l_d_closed_form(d: int, t: int) -> int:
    if d < 4 or t < 0:
        raise InvalidParameterError("closed form holds for d >= 4 and t >= 0")
    doubled = fib(d - 1) * fib(d - 2) * t * t - (fib(d) - 1) * t
    if doubled % 2:
        raise VerificationError(f"closed form is not integral at d={d}, t={t}")
    return doubled // 2


def _triangle_positive_points(d: int, t: int) -> int:
    """Positive lattice points of tQ, Q the triangle (0,0), (F_(d-1),0), (0,F_(d-2))."""
    wide, tall = fib(d - 1), fib(d - 2)
    limit = t * wide * tall
    total = 0
    b = 1
    while tall + wide * b <= limit:
        total += (limit - wide * b) // tall
        b += 1
    return total


def check_fibonacci_claims(d: int, t_max: int) -> FibonacciReport:
    if d < 4:
        raise InvalidParameterError("the Fibonacci claims concern d >= 4")
    matrix = fibonacci_matrix(d)
    poly = polytope(matrix)
    expected = {
        (Fraction(0),) * d,
        tuple(Fraction(fib(i), fib(d - 1)) for i in range(d)),
        (Fraction(1, fib(d - 2)),) + tuple(Fraction(fib(i), fib(d - 2)) for i in range(d - 1)),
    }
    if set(poly.vertices) != expected:
        raise VerificationError(f"vertices {poly.vertices} differ from {sorted(expected)}")

    counts = []
    scale = fib(d - 1) * fib(d - 2)
    for t in range(1, t_max + 1):
        row = {
            "t": t,
            "closed_form": l_d_closed_form(d, t),
            "lattice": count_positive_points(poly, t * scale),
            "triangle": _triangle_positive_points(d, t),
        }
        if len({row["closed_form"], row["lattice"], row["triangle"]}) != 1:
            raise VerificationError(f"positive lattice counts disagree: {row}")
        counts.append(row)

    # the smallest distinct-entry solution starts (2, 1) and ends at F_d + F_(d-2)
    lower_k = fib(d) + fib(d - 2) - 1
    for vector in kernel_box_points(poly.kernel, 1, lower_k):
        if len(set(vector)) == d:
            raise VerificationError(f"{vector} is a distinct-entry solution inside [{lower_k}]")
    tight = _sequence_from(2, 1, d)
    if not matrix.annihilates(tight) or len(set(tight)) != d or max(tight) != lower_k + 1:
        raise VerificationError(f"{tight} should be a distinct-entry solution with maximum {lower_k + 1}")
    below_f = next(
        (v for v in kernel_box_points(poly.kernel, 1, fib(d + 1) - 1) if len(set(v)) == d), None
    )

    x = tuple(fib(i) for i in range(1, d + 1))
    y = tuple(fib(i) for i in range(2, d + 2))
    if not (matrix.annihilates(x) and matrix.annihilates(y)):
        raise VerificationError("Fibonacci kernel pair is not in the kernel")
    for i, j in combinations(range(d), 2):
        if x[i] * y[j] == x[j] * y[i]:
            raise VerificationError(f"kernel pair does not separate coordinates ({i}, {j})")

    margins = []
    factor = d * d - d + 1
    k = factor * scale
    for n in range(1, 4):
        lhs = l_d_closed_form(d, factor * n)
        rhs = Fraction(d * (d - 1), 2 * k) * (k * n) ** 2
        # lhs - rhs = (d^2 - d + 1) n (F_(d-1) F_(d-2) n - F_d + 1) / 2, zero at d = 4, n = 1
        if lhs < rhs or scale * n < fib(d) - 1:
            raise VerificationError(f"upper-bound step fails at d={d}, n={n}: {lhs} < {rhs}")
        margins.append({"n": n, "k": k, "lattice_count": lhs, "non_rainbow_bound": rhs, "tight": lhs == rhs})

    logger.info("Fibonacci claims verified for d=%d up to t=%d", d, t_max)
    return FibonacciReport(
        d=d,
        vertices=poly.vertices,
        counts=tuple(counts),
        lower_bound_k=lower_k,
        tight_witness=tight,
        below_fibonacci_witness=below_f,
        kernel_pair=(x, y),
        upper_bound_margins=tuple(margins),
    )
