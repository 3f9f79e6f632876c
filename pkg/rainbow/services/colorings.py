from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from math import ceil, factorial, gcd
from typing import Iterable, Iterator, Sequence

import numpy as np

from ..exceptions import InvalidParameterError
from .exact_linalg import RationalMatrix, primitive_vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Coloring:
    """A surjective colouring of [size] with colours 1..k; ``assign[x - 1]`` is the colour of x."""

    size: int
    k: int
    assign: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.assign) != self.size:
            raise InvalidParameterError(f"colouring lists {len(self.assign)} colours for {self.size} elements")
        if any(not 1 <= color <= self.k for color in self.assign):
            raise InvalidParameterError(f"colours must lie in 1..{self.k}")
        if len(set(self.assign)) != self.k:
            raise InvalidParameterError(f"colouring is not surjective onto {self.k} colours")

    @classmethod
    def from_classes(cls, classes: Sequence[Iterable[int]], size: int | None = None) -> Coloring:
        members = [sorted(block) for block in classes]
        if size is None:
            size = sum(len(block) for block in members)
        assign = [0] * size
        for color, block in enumerate(members, start=1):
            for x in block:
                if not 1 <= x <= size or assign[x - 1]:
                    raise InvalidParameterError(f"element {x} is out of range or coloured twice")
                assign[x - 1] = color
        return cls(size=size, k=len(members), assign=tuple(assign))

    def color_of(self, x: int) -> int:
        return self.assign[x - 1]

    @cached_property
    def class_sizes(self) -> tuple[int, ...]:
        sizes = [0] * self.k
        for color in self.assign:
            sizes[color - 1] += 1
        return tuple(sizes)

    @cached_property
    def classes(self) -> tuple[tuple[int, ...], ...]:
        blocks: list[list[int]] = [[] for _ in range(self.k)]
        for x, color in enumerate(self.assign, start=1):
            blocks[color - 1].append(x)
        return tuple(tuple(block) for block in blocks)

    @property
    def is_equinumerous(self) -> bool:
        return len(set(self.class_sizes)) == 1

    def is_monochromatic_on(self, block: Iterable[int]) -> bool:
        return len({self.color_of(x) for x in block}) <= 1

    def __str__(self) -> str:
        return f"{self.size} {self.k}\n" + " ".join(str(color) for color in self.assign)


@dataclass(frozen=True)
class MultiplicativePartition:
    a: int
    b: int
    size: int
    classes: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class PartitionStats:
    max_class_size: int
    singleton_count: int


class LemmaCase(str, Enum):
    ZERO_MATRIX = "zero_matrix"
    ZERO_ENTRY = "zero_entry"
    SAME_SIGN = "same_sign"
    OPPOSITE_EQUAL = "opposite_equal"
    MULTIPLICATIVE = "multiplicative"


@dataclass(frozen=True)
class LemmaClassification:
    case: LemmaCase
    generator: tuple[int, int] | None = None


def multiplicative_partition(a: int, b: int, size: int) -> MultiplicativePartition:
    """Classes {a^α c, a^(α-1) b c, ..., b^α c} ∩ [size]; each starts at an element not divisible by b."""
    if not 0 < a < b or gcd(a, b) != 1:
        raise InvalidParameterError(f"need coprime 0 < a < b, got a={a}, b={b}")
    if size < 1:
        raise InvalidParameterError("the partitioned interval must be nonempty")
    classes = []
    for start in range(1, size + 1):
        if start % b == 0:
            continue
        chain = [start]
        current = start
        while current % a == 0 and current // a * b <= size:
            current = current // a * b
            chain.append(current)
        classes.append(tuple(chain))
    return MultiplicativePartition(a=a, b=b, size=size, classes=tuple(classes))


def partition_stats(partition: MultiplicativePartition) -> PartitionStats:
    sizes = [len(block) for block in partition.classes]
    return PartitionStats(max_class_size=max(sizes), singleton_count=sizes.count(1))


def greedy_coloring(partition: MultiplicativePartition, k: int) -> Coloring:
    """Largest uncoloured class first (ties: smallest element), always onto a least used colour (ties: smallest)."""
    if k < 1:
        raise InvalidParameterError("k must be positive")
    if k > len(partition.classes):
        raise InvalidParameterError(
            f"{len(partition.classes)} classes cannot carry a surjective {k}-colouring"
        )
    order = sorted(partition.classes, key=lambda block: (-len(block), block[0]))
    usage = [(0, color) for color in range(1, k + 1)]
    heapq.heapify(usage)
    assign = [0] * partition.size
    for block in order:
        used, color = heapq.heappop(usage)
        for x in block:
            assign[x - 1] = color
        heapq.heappush(usage, (used + len(block), color))
    return Coloring(size=partition.size, k=k, assign=tuple(assign))


def orbit_count(size: int, k: int) -> int:
    if k < 1 or size % k:
        raise InvalidParameterError(f"k={k} does not divide N={size}")
    n = size // k
    return factorial(size) // (factorial(n) ** k * factorial(k))


def enumerate_equinumerous(size: int, k: int) -> Iterator[Coloring]:
    """One representative per relabelling orbit: colours are numbered by first occurrence."""
    if k < 1 or size < 1 or size % k:
        raise InvalidParameterError(f"k={k} must divide N={size}")
    n = size // k
    assign = [0] * size
    counts = [0] * k

    def extend(position: int, opened: int) -> Iterator[Coloring]:
        if position == size:
            yield Coloring(size=size, k=k, assign=tuple(assign))
            return
        for color in range(min(opened + 1, k)):
            if counts[color] == n:
                continue
            assign[position] = color + 1
            counts[color] += 1
            yield from extend(position + 1, max(opened, color + 1))
            counts[color] -= 1

    yield from extend(0, 0)


def block_coloring(size: int, k: int) -> Coloring:
    """Contiguous, as-equal-as-possible blocks."""
    if not 1 <= k <= size:
        raise InvalidParameterError(f"cannot colour [{size}] surjectively with {k} colours")
    return Coloring(size=size, k=k, assign=tuple((x * k) // size + 1 for x in range(size)))


def random_bounded_coloring(size: int, k: int, max_class_size: int, seed: int) -> Coloring:
    if k < 1 or max_class_size < 1 or k > size or k * max_class_size < size:
        raise InvalidParameterError(
            f"no surjective {k}-colouring of [{size}] has every class of size <= {max_class_size}"
        )
    rng = np.random.default_rng(seed)
    sizes = [1] * k
    remaining = size - k
    spare = max_class_size - 1
    capacity_after = spare * k
    for left, color in zip(range(k, 0, -1), rng.permutation(k)):
        capacity_after -= spare
        lo = max(0, remaining - capacity_after)
        hi = min(spare, remaining, max(lo, 2 * ceil(remaining / left)))
        extra = int(rng.integers(lo, hi + 1))
        sizes[int(color)] += extra
        remaining -= extra
    shuffled = rng.permutation(size)
    assign = [0] * size
    cursor = 0
    for color, class_size in enumerate(sizes, start=1):
        for index in shuffled[cursor : cursor + class_size]:
            assign[int(index)] = color
        cursor += class_size
    return Coloring(size=size, k=k, assign=tuple(assign))


def classify_one_by_two(matrix: RationalMatrix) -> LemmaClassification:
    if (matrix.rows, matrix.cols) != (1, 2):
        raise InvalidParameterError(f"expected a 1x2 matrix, got {matrix.rows}x{matrix.cols}")
    p, q = matrix.row(0)
    if p == 0 and q == 0:
        return LemmaClassification(LemmaCase.ZERO_MATRIX)
    if p == 0 or q == 0:
        return LemmaClassification(LemmaCase.ZERO_ENTRY)
    if (p > 0) == (q > 0):
        return LemmaClassification(LemmaCase.SAME_SIGN)
    if p == -q:
        return LemmaClassification(LemmaCase.OPPOSITE_EQUAL, (1, 1))
    a, b = sorted(abs(value) for value in primitive_vector([q, -p]))
    return LemmaClassification(LemmaCase.MULTIPLICATIVE, (a, b))


def lemma_coloring(matrix: RationalMatrix, size: int, k: int) -> Coloring:
    """A k-colouring of [size] with no rainbow kernel vector of a nonzero 1x2 matrix."""
    classification = classify_one_by_two(matrix)
    if classification.case is LemmaCase.ZERO_MATRIX:
        raise InvalidParameterError("the zero 1x2 matrix is rainbow regular; no anti-rainbow colouring exists")
    if classification.case is LemmaCase.MULTIPLICATIVE:
        a, b = classification.generator
        logger.info("greedy multiplicative colouring for a=%d, b=%d on [%d]", a, b, size)
        return greedy_coloring(multiplicative_partition(a, b, size), k)
    return block_coloring(size, k)
