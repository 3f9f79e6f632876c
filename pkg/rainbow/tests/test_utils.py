import tempfile
from fractions import Fraction
from pathlib import Path

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured
from django.test import SimpleTestCase, override_settings

from rainbow.exceptions import InputFormatError
from rainbow.services import fixtures
from rainbow.services.colorings import Coloring
from rainbow.services.exact_linalg import RationalMatrix
from rainbow.utils import (
    format_coloring,
    format_graph,
    format_matrix,
    parse_coloring,
    parse_graph,
    parse_matrix,
    rainbow_setting,
    read_coloring,
    read_matrix,
    write_text,
)


class ParseMatrixTests(SimpleTestCase):
    def assertLocated(self, text, line, column):
        with self.assertRaises(InputFormatError) as ctx:
            parse_matrix(text)
        self.assertEqual((ctx.exception.line, ctx.exception.column), (line, column))
        return ctx.exception

    def test_rationals_and_blank_lines(self):
        matrix = parse_matrix("\n1 2\n\n1/2 -3\n")
        self.assertEqual(matrix.to_lists(), [[Fraction(1, 2), -3]])

    def test_bad_entry(self):
        error = self.assertLocated("1 3\n1 x 1", 2, 3)
        self.assertTrue(str(error).startswith("line 2, column 3: "))

    def test_zero_denominator(self):
        self.assertLocated("1 3\n1 2/0 1", 2, 3)

    def test_missing_row(self):
        self.assertLocated("2 2\n1 2\n", 3, 1)

    def test_extra_row(self):
        self.assertLocated("1 2\n1 2\n3 4", 3, 1)

    def test_short_row(self):
        self.assertLocated("1 3\n1 2", 2, 1)

    def test_bad_header(self):
        self.assertLocated("abc", 1, 1)
        self.assertLocated("x 2\n1 1", 1, 1)

    def test_round_trip(self):
        text = format_matrix(fixtures.THREE_BY_FIVE)
        self.assertEqual(text, "3 5\n1 0 1 -1 0\n0 1 1 0 -1\n1 0 0 1 -1\n")
        self.assertEqual(parse_matrix(text), fixtures.THREE_BY_FIVE)

    def test_matrix_without_columns(self):
        empty = RationalMatrix.from_rows([[]], cols=0)
        text = format_matrix(empty)
        self.assertEqual(text, "1 0\n\n")
        self.assertEqual(parse_matrix(text), empty)
        self.assertEqual(parse_matrix("2 0\n"), RationalMatrix.from_rows([[], []], cols=0))
        self.assertLocated("1 0\n3\n", 2, 1)


class ParseColoringTests(SimpleTestCase):
    def test_valid(self):
        coloring = parse_coloring("4 2\n1 2 2 1\n")
        self.assertEqual(coloring.class_sizes, (2, 2))

    def test_colour_out_of_range(self):
        with self.assertRaises(InputFormatError) as ctx:
            parse_coloring("4 2\n1 1 3 2")
        self.assertEqual((ctx.exception.line, ctx.exception.column), (2, 5))

    def test_not_surjective(self):
        with self.assertRaises(InputFormatError) as ctx:
            parse_coloring("3 2\n1 1 1")
        self.assertEqual(ctx.exception.line, 2)

    def test_wrong_length(self):
        with self.assertRaises(InputFormatError):
            parse_coloring("3 2\n1 2")

    def test_format(self):
        coloring = Coloring(size=3, k=2, assign=(1, 2, 1))
        self.assertEqual(format_coloring(coloring), "3 2\n1 2 1\n")


class ParseGraphTests(SimpleTestCase):
    def test_one_indexed_input(self):
        graph = parse_graph("3 2\n1 2\n3 1\n")
        self.assertEqual(graph.edges, ((0, 1), (2, 0)))
        self.assertEqual(format_graph(graph), "3 2\n1 2\n3 1\n")

    def test_self_loop(self):
        with self.assertRaises(InputFormatError) as ctx:
            parse_graph("3 1\n2 2")
        self.assertEqual(ctx.exception.line, 2)

    def test_vertex_out_of_range(self):
        with self.assertRaises(InputFormatError) as ctx:
            parse_graph("2 1\n1 3")
        self.assertEqual((ctx.exception.line, ctx.exception.column), (2, 3))


class FileTests(SimpleTestCase):
    def test_write_then_read(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "nested" / "ap.txt"
            write_text(path, format_matrix(fixtures.ARITHMETIC_PROGRESSION))
            self.assertEqual(read_matrix(path), fixtures.ARITHMETIC_PROGRESSION)

    def test_missing_file(self):
        with self.assertRaises(InputFormatError):
            read_coloring("/nonexistent/coloring.txt")


class SettingsTests(SimpleTestCase):
    def test_reads_project_settings(self):
        self.assertEqual(rainbow_setting("ORBIT_BUDGET"), settings.RAINBOW["ORBIT_BUDGET"])

    @override_settings(RAINBOW={"FLOW_BOUND": 7})
    def test_override_replaces_the_whole_dict(self):
        self.assertEqual(rainbow_setting("FLOW_BOUND"), 7)
        with self.assertRaises(ImproperlyConfigured):
            rainbow_setting("ORBIT_BUDGET")
