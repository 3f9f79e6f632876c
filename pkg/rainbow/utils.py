from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

from .exceptions import InputFormatError, InvalidParameterError
from .services.colorings import Coloring
from .services.exact_linalg import RationalMatrix
from .services.graphs import OrientedGraph

RATIONAL_PATTERN = re.compile(r"-?\d+(?:/\d+)?")
INTEGER_PATTERN = re.compile(r"-?\d+")


def rainbow_setting(name: str) -> Any:
    try:
        return settings.RAINBOW[name]
    except (AttributeError, KeyError) as exc:
        raise ImproperlyConfigured(f"settings.RAINBOW has no {name!r} entry") from exc


def _tokens(line: str, line_number: int) -> list[tuple[str, int, int]]:
    return [(match.group(), line_number, match.start() + 1) for match in re.finditer(r"\S+", line)]


def _content_lines(text: str) -> list[tuple[int, str]]:
    """Non-blank lines with their 1-based numbers."""
    return [(number, line) for number, line in enumerate(text.splitlines(), start=1) if line.strip()]


def _integer(token: tuple[str, int, int], what: str, minimum: int | None = None) -> int:
    value, line, column = token
    if not INTEGER_PATTERN.fullmatch(value):
        raise InputFormatError(f"{what} must be an integer, got {value!r}", line, column)
    number = int(value)
    if minimum is not None and number < minimum:
        raise InputFormatError(f"{what} must be at least {minimum}, got {number}", line, column)
    return number


def _header(lines: list[tuple[int, str]], names: tuple[str, str], minimums: tuple[int, int]) -> tuple[int, int]:
    if not lines:
        raise InputFormatError(f"missing header line '{names[0]} {names[1]}'", 1, 1)
    number, line = lines[0]
    tokens = _tokens(line, number)
    if len(tokens) != 2:
        raise InputFormatError(f"header must hold exactly '{names[0]} {names[1]}'", number, 1)
    return (
        _integer(tokens[0], names[0], minimums[0]),
        _integer(tokens[1], names[1], minimums[1]),
    )


def _expect_line_count(lines: list[tuple[int, str]], expected: int, what: str) -> None:
    if len(lines) - 1 < expected:
        last = lines[-1][0] if lines else 0
        raise InputFormatError(f"expected {expected} {what}, found {len(lines) - 1}", last + 1, 1)
    if len(lines) - 1 > expected:
        number, _ = lines[expected + 1]
        raise InputFormatError(f"unexpected content after {expected} {what}", number, 1)


def parse_matrix(text: str) -> RationalMatrix:
    lines = _content_lines(text)
    m, d = _header(lines, ("m", "d"), (0, 0))
    if d == 0:
        # rows without columns are blank lines
        if len(lines) > 1:
            number, line = lines[1]
            raise InputFormatError(f"expected 0 entries, found {len(_tokens(line, number))}", number, 1)
        return RationalMatrix.from_rows([[] for _ in range(m)], cols=0)
    _expect_line_count(lines, m, "matrix rows")
    rows = []
    for number, line in lines[1:]:
        tokens = _tokens(line, number)
        if len(tokens) != d:
            raise InputFormatError(f"expected {d} entries, found {len(tokens)}", number, 1)
        row = []
        for value, line_no, column in tokens:
            if not RATIONAL_PATTERN.fullmatch(value):
                raise InputFormatError(f"not a rational 'p' or 'p/q': {value!r}", line_no, column)
            numerator, _, denominator = value.partition("/")
            if denominator and int(denominator) == 0:
                raise InputFormatError("denominator must be positive", line_no, column)
            row.append(Fraction(int(numerator), int(denominator or 1)))
        rows.append(row)
    return RationalMatrix.from_rows(rows, cols=d)


def parse_coloring(text: str) -> Coloring:
    lines = _content_lines(text)
    size, k = _header(lines, ("N", "k"), (1, 1))
    _expect_line_count(lines, 1, "colour line")
    number, line = lines[1]
    tokens = _tokens(line, number)
    if len(tokens) != size:
        raise InputFormatError(f"expected {size} colours, found {len(tokens)}", number, 1)
    assign = []
    for token in tokens:
        color = _integer(token, "colour", 1)
        if color > k:
            raise InputFormatError(f"colour {color} exceeds k={k}", token[1], token[2])
        assign.append(color)
    try:
        return Coloring(size=size, k=k, assign=tuple(assign))
    except InvalidParameterError as exc:
        raise InputFormatError(str(exc), number) from exc


def parse_graph(text: str) -> OrientedGraph:
    lines = _content_lines(text)
    n, m = _header(lines, ("n", "m"), (0, 0))
    _expect_line_count(lines, m, "edge lines")
    edges = []
    for number, line in lines[1:]:
        tokens = _tokens(line, number)
        if len(tokens) != 2:
            raise InputFormatError("an edge line holds exactly 'tail head'", number, 1)
        tail, head = (_integer(token, "vertex", 1) for token in tokens)
        for endpoint, token in ((tail, tokens[0]), (head, tokens[1])):
            if endpoint > n:
                raise InputFormatError(f"vertex {endpoint} exceeds n={n}", number, token[2])
        if tail == head:
            raise InputFormatError(f"self-loop at vertex {tail}", number, 1)
        edges.append((tail - 1, head - 1))
    return OrientedGraph.from_edges(n, edges)


def format_matrix(matrix: RationalMatrix) -> str:
    return f"{matrix}\n"


def format_coloring(coloring: Coloring) -> str:
    return f"{coloring}\n"


def format_graph(graph: OrientedGraph) -> str:
    return f"{graph}\n"


def _read(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc.strerror or exc}") from exc


def read_matrix(path: str | Path) -> RationalMatrix:
    return parse_matrix(_read(path))


def read_coloring(path: str | Path) -> Coloring:
    return parse_coloring(_read(path))


def read_graph(path: str | Path) -> OrientedGraph:
    return parse_graph(_read(path))


def write_text(path: str | Path, text: str) -> None:
    target = Path(path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
