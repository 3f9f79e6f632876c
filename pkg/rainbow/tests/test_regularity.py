from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from rainbow.exceptions import InvalidParameterError, NotRainbowRegularError
from rainbow.services import fixtures
from rainbow.services.exact_linalg import RationalMatrix, kernel_basis, rank
from rainbow.services.lattice_geometry import ehrhart, polytope
from rainbow.services.regularity import (
    check_condition_iii,
    check_condition_iv,
    distinct_positive_kernel_vectors,
    evaluate_conjectures,
    is_rainbow_regular,
    positive_kernel_vector,
    robust_constant,
    vanishing_row_certificate,
)

random_matrices = st.integers(1, 3).flatmap(
    lambda m: st.integers(2, 6).flatmap(
        lambda d: st.lists(
            st.lists(st.integers(-3, 3), min_size=d, max_size=d), min_size=m, max_size=m
        )
    )
)

small_regular_candidates = st.integers(1, 2).flatmap(
    lambda m: st.integers(2, 4).flatmap(
        lambda d: st.lists(
            st.lists(st.integers(-2, 2), min_size=d, max_size=d), min_size=m, max_size=m
        )
    )
)


class VerdictTableTests(SimpleTestCase):
    def test_regular_fixtures(self):
        for name, matrix in fixtures.REGULAR_MATRICES.items():
            with self.subTest(name):
                verdict = is_rainbow_regular(matrix)
                self.assertTrue(verdict.regular)
                self.assertIsNone(verdict.failing_pair)
                self.assertTrue(matrix.annihilates(verdict.positive_witness))
                self.assertGreaterEqual(min(verdict.positive_witness), 1)

    def test_not_regular_fixtures_report_failing_pair(self):
        for name, (matrix, pair) in fixtures.NOT_REGULAR_MATRICES.items():
            with self.subTest(name):
                verdict = is_rainbow_regular(matrix)
                self.assertFalse(verdict.regular)
                self.assertEqual(verdict.failing_pair, pair)
                self.assertIsNotNone(verdict.reason)

    def test_every_nonzero_one_by_two_is_not_regular(self):
        for matrix in fixtures.nonzero_one_by_two():
            with self.subTest(matrix.row(0)):
                self.assertFalse(is_rainbow_regular(matrix).regular)

    def test_zero_pair_is_regular_with_all_ones_witness(self):
        verdict = is_rainbow_regular(fixtures.ZERO_PAIR)
        self.assertTrue(verdict.regular)
        self.assertEqual(verdict.positive_witness, (1, 1))

    def test_single_column(self):
        self.assertTrue(is_rainbow_regular(RationalMatrix.from_rows([[0]])).regular)
        self.assertFalse(is_rainbow_regular(RationalMatrix.from_rows([[2]])).regular)

    def test_no_columns_is_not_regular(self):
        self.assertFalse(is_rainbow_regular(RationalMatrix.from_rows([[]], cols=0)).regular)

    def test_same_sign_row_has_no_positive_vector(self):
        self.assertIsNone(positive_kernel_vector(RationalMatrix.from_rows([[1, 2, 3]])))


class ConditionTests(SimpleTestCase):
    def test_condition_iii_table_for_equal_pair(self):
        check = check_condition_iii(fixtures.EQUAL_PAIR)
        self.assertFalse(check.passed)
        self.assertEqual(check.table, {(0, 1): 0, (0, 2): 1, (1, 2): 1})

    def test_condition_iv_detects_proportional_coordinates(self):
        check = check_condition_iv(kernel_basis(fixtures.EQUAL_PAIR), 3)
        self.assertEqual(check.failing_pair, (0, 1))
        self.assertTrue(check.table[(0, 2)])

    def test_conditions_need_two_columns(self):
        with self.assertRaises(InvalidParameterError):
            check_condition_iii(RationalMatrix.from_rows([[1]]))

    @settings(max_examples=200, deadline=None)
    @given(random_matrices)
    def test_conditions_agree_pair_by_pair(self, rows):
        matrix = RationalMatrix.from_rows(rows)
        iii = check_condition_iii(matrix)
        iv = check_condition_iv(kernel_basis(matrix), matrix.cols)
        full = rank(matrix)
        for pair, sub_rank in iii.table.items():
            self.assertEqual(sub_rank == full, iv.table[pair], pair)

    @settings(max_examples=100, deadline=None)
    @given(random_matrices, st.randoms(use_true_random=False))
    def test_column_permutation_keeps_the_verdict(self, rows, rng):
        matrix = RationalMatrix.from_rows(rows)
        order = list(range(matrix.cols))
        rng.shuffle(order)
        self.assertEqual(is_rainbow_regular(matrix).regular, is_rainbow_regular(matrix.permute_columns(order)).regular)

    @settings(max_examples=100, deadline=None)
    @given(random_matrices, st.integers(1, 4))
    def test_row_scaling_keeps_the_verdict(self, rows, factor):
        matrix = RationalMatrix.from_rows(rows)
        scaled = matrix.scale_row(0, Fraction(-factor, 3))
        self.assertEqual(is_rainbow_regular(matrix).regular, is_rainbow_regular(scaled).regular)


class CertificateTests(SimpleTestCase):
    def test_vanishing_row_for_equal_pair(self):
        self.assertEqual(vanishing_row_certificate(fixtures.EQUAL_PAIR, 0, 1), (1, -1, 0))

    def test_vanishing_row_for_three_by_five(self):
        self.assertEqual(vanishing_row_certificate(fixtures.THREE_BY_FIVE, 0, 1), (2, -1, 0, 0, 0))

    def test_no_certificate_when_rank_is_kept(self):
        self.assertIsNone(vanishing_row_certificate(fixtures.ARITHMETIC_PROGRESSION, 0, 1))

    @settings(max_examples=150, deadline=None)
    @given(random_matrices)
    def test_every_failing_pair_has_a_vanishing_row(self, rows):
        matrix = RationalMatrix.from_rows(rows)
        full = rank(matrix)
        vectors = kernel_basis(matrix).vectors
        for (i, j), sub_rank in check_condition_iii(matrix).table.items():
            certificate = vanishing_row_certificate(matrix, i, j)
            if sub_rank == full:
                self.assertIsNone(certificate)
                continue
            support = {c for c, value in enumerate(certificate) if value}
            self.assertTrue(support)
            self.assertLessEqual(support, {i, j})
            for vector in vectors:
                self.assertEqual(sum(r * x for r, x in zip(certificate, vector)), 0)
            for x in vectors:
                for y in vectors:
                    self.assertEqual(x[i] * y[j], x[j] * y[i])


class RobustConstantTests(SimpleTestCase):
    def test_arithmetic_progression(self):
        constant = robust_constant(fixtures.ARITHMETIC_PROGRESSION)
        self.assertEqual(constant.nu, Fraction(1, 2))
        self.assertEqual(constant.c_squared, Fraction(1, 6))
        self.assertTrue(constant.decimal().startswith("0.40824829"))

    def test_zero_pair(self):
        constant = robust_constant(fixtures.ZERO_PAIR)
        self.assertEqual(constant.nu, 1)
        self.assertEqual(constant.c_squared, 1)

    def test_not_regular_is_rejected(self):
        with self.assertRaises(NotRainbowRegularError) as caught:
            robust_constant(fixtures.EQUAL_PAIR)
        self.assertFalse(caught.exception.verdict.regular)

    @settings(max_examples=15, deadline=None)
    @given(small_regular_candidates)
    def test_positive_kernel_vector_gives_positive_volume(self, rows):
        matrix = RationalMatrix.from_rows(rows)
        assume(positive_kernel_vector(matrix) is not None)
        leading = ehrhart(polytope(matrix)).leading_coefficient
        self.assertGreater(leading, 0)
        if is_rainbow_regular(matrix).regular:
            self.assertEqual(robust_constant(matrix).nu, leading)


class ConjectureTests(SimpleTestCase):
    def test_equal_pair_defeats_both_conjectures(self):
        report = evaluate_conjectures(fixtures.EQUAL_PAIR)
        self.assertFalse(report.theorem_regular)
        self.assertFalse(report.conjecture_one)
        self.assertFalse(report.conjecture_two)
        self.assertEqual(report.refuted, ())

    def test_ratio_pair_and_three_by_five_are_counterexamples(self):
        for matrix in (fixtures.RATIO_PAIR, fixtures.THREE_BY_FIVE):
            with self.subTest(matrix.cols):
                report = evaluate_conjectures(matrix)
                self.assertFalse(report.theorem_regular)
                self.assertTrue(report.conjecture_one)
                self.assertTrue(report.conjecture_two)
                self.assertEqual(report.refuted, ("conjecture_one", "conjecture_two"))

    def test_distinct_positive_vectors_are_valid(self):
        for matrix in (fixtures.SIDON, fixtures.THREE_BY_FIVE, fixtures.ARITHMETIC_PROGRESSION):
            vectors = distinct_positive_kernel_vectors(matrix, 2)
            self.assertEqual(len(vectors), 2)
            for vector in vectors:
                self.assertTrue(matrix.annihilates(vector))
                self.assertEqual(len(set(vector)), len(vector))
                self.assertGreaterEqual(min(vector), 1)
            self.assertEqual(rank(RationalMatrix.from_rows([list(v) for v in vectors])), 2)
