from django.test import SimpleTestCase

from rainbow.exceptions import InvalidParameterError, NotRainbowRegularError
from rainbow.services import fixtures
from rainbow.services.colorings import orbit_count
from rainbow.services.rainbow_number import (
    anti_rainbow_coloring,
    certificate_no_rainbow,
    check_fibonacci_claims,
    estimate_rainbow_number,
    fib,
    fibonacci_matrix,
    l_d_closed_form,
)
from rainbow.services.rainbow_search import find_rainbow


class CertificateTests(SimpleTestCase):
    def test_wide_matrix_is_trivially_certified(self):
        coloring = certificate_no_rainbow(fixtures.SIDON, 3, 2)
        self.assertEqual(coloring.assign, (1, 1, 2, 2, 3, 3))

    def test_no_distinct_solutions(self):
        coloring = certificate_no_rainbow(fixtures.EQUAL_PAIR, 3, 1)
        self.assertEqual(coloring.assign, (1, 2, 3))

    def test_progressions_in_small_intervals(self):
        for n in (1, 2, 3):
            self.assertIsNone(certificate_no_rainbow(fixtures.ARITHMETIC_PROGRESSION, 3, n))

    def test_rejects_non_positive(self):
        with self.assertRaises(InvalidParameterError):
            certificate_no_rainbow(fixtures.SCHUR, 0, 2)


class EstimateTests(SimpleTestCase):
    def test_progression_estimate(self):
        estimate = estimate_rainbow_number(fixtures.ARITHMETIC_PROGRESSION, 4, 2)
        self.assertEqual(estimate.certificates, {3: None, 4: None})
        self.assertEqual(estimate.smallest_clean_k, 3)
        self.assertEqual(estimate.proven_not_regular, ())
        self.assertEqual(estimate.k_checked, (3, 4))

    def test_budget_skips_large_orbits(self):
        self.assertEqual(orbit_count(9, 3), 280)
        estimate = estimate_rainbow_number(fixtures.ARITHMETIC_PROGRESSION, 3, 4, budget=100)
        self.assertEqual(estimate.skipped, ((3, 3), (3, 4)))

    def test_parallel_matches_sequential(self):
        sequential = estimate_rainbow_number(fixtures.SCHUR, 4, 2)
        parallel = estimate_rainbow_number(fixtures.SCHUR, 4, 2, jobs=2)
        self.assertEqual(sequential.certificates, parallel.certificates)

    def test_not_regular(self):
        with self.assertRaises(NotRainbowRegularError) as ctx:
            estimate_rainbow_number(fixtures.RATIO_PAIR, 3, 2)
        self.assertFalse(ctx.exception.verdict.regular)

    def test_k_below_column_count(self):
        with self.assertRaises(InvalidParameterError):
            estimate_rainbow_number(fixtures.SIDON, 3, 2)


class AntiRainbowTests(SimpleTestCase):
    def test_ratio_pair(self):
        coloring = anti_rainbow_coloring(fixtures.RATIO_PAIR, 3, 3)
        self.assertTrue(coloring.is_equinumerous)
        self.assertEqual(coloring.class_sizes, (3, 3, 3))
        self.assertFalse(find_rainbow(fixtures.RATIO_PAIR, coloring).found)

    def test_three_by_five(self):
        coloring = anti_rainbow_coloring(fixtures.THREE_BY_FIVE, 3, 4)
        self.assertTrue(coloring.is_equinumerous)

    def test_regular_matrix(self):
        with self.assertRaises(InvalidParameterError):
            anti_rainbow_coloring(fixtures.SCHUR, 3, 2)


class FibonacciTests(SimpleTestCase):
    def test_sequence(self):
        self.assertEqual([fib(n) for n in range(8)], [0, 1, 1, 2, 3, 5, 8, 13])
        with self.assertRaises(InvalidParameterError):
            fib(-1)

    def test_matrix_rows(self):
        matrix = fibonacci_matrix(4)
        self.assertEqual(matrix.to_lists(), [[1, 1, -1, 0], [0, 1, 1, -1]])
        with self.assertRaises(InvalidParameterError):
            fibonacci_matrix(2)

    def test_closed_form(self):
        self.assertEqual([l_d_closed_form(4, t) for t in (1, 2, 3)], [0, 2, 6])
        self.assertEqual(l_d_closed_form(5, 1), 1)
        with self.assertRaises(InvalidParameterError):
            l_d_closed_form(3, 1)

    def test_claims_for_four(self):
        report = check_fibonacci_claims(4, 3)
        self.assertEqual(report.lower_bound_k, 3)
        self.assertEqual(report.tight_witness, (2, 1, 3, 4))
        self.assertEqual(report.below_fibonacci_witness, (2, 1, 3, 4))
        self.assertEqual(report.kernel_pair, ((1, 1, 2, 3), (1, 2, 3, 5)))
        self.assertEqual([row["t"] for row in report.counts], [1, 2, 3])
        self.assertEqual(len(report.upper_bound_margins), 3)

    def test_upper_bound_step_is_tight_at_four(self):
        first, second, _ = check_fibonacci_claims(4, 1).upper_bound_margins
        self.assertEqual((first["k"], first["lattice_count"], first["non_rainbow_bound"]), (26, 156, 156))
        self.assertTrue(first["tight"])
        self.assertEqual((second["lattice_count"], second["non_rainbow_bound"]), (650, 624))
        self.assertFalse(second["tight"])

    def test_upper_bound_step_is_strict_from_five(self):
        for d in (5, 6):
            margins = check_fibonacci_claims(d, 1).upper_bound_margins
            self.assertFalse(any(row["tight"] for row in margins))
        first = check_fibonacci_claims(5, 1).upper_bound_margins[0]
        self.assertEqual((first["lattice_count"], first["non_rainbow_bound"]), (1281, 1260))

    def test_claims_for_five(self):
        report = check_fibonacci_claims(5, 2)
        self.assertEqual(report.lower_bound_k, 6)
        self.assertEqual(report.tight_witness, (2, 1, 3, 4, 7))
        self.assertEqual(len(report.vertices), 3)

    def test_claims_need_four_columns(self):
        with self.assertRaises(InvalidParameterError):
            check_fibonacci_claims(3, 2)
