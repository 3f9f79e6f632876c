from fractions import Fraction
from math import gcd, log2

from django.test import SimpleTestCase
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from rainbow.exceptions import InvalidParameterError
from rainbow.services.colorings import (
    Coloring,
    LemmaCase,
    block_coloring,
    classify_one_by_two,
    enumerate_equinumerous,
    greedy_coloring,
    lemma_coloring,
    multiplicative_partition,
    orbit_count,
    partition_stats,
    random_bounded_coloring,
)
from rainbow.services.exact_linalg import RationalMatrix
from rainbow.services.rainbow_search import find_rainbow

DOUBLING = RationalMatrix.from_rows([[1, -2]])


class ColoringTests(SimpleTestCase):
    def test_accessors(self):
        coloring = Coloring(size=5, k=2, assign=(1, 2, 1, 1, 2))
        self.assertEqual(coloring.class_sizes, (3, 2))
        self.assertEqual(coloring.classes, ((1, 3, 4), (2, 5)))
        self.assertEqual(coloring.color_of(5), 2)
        self.assertFalse(coloring.is_equinumerous)
        self.assertTrue(coloring.is_monochromatic_on([1, 3, 4]))
        self.assertEqual(str(coloring), "5 2\n1 2 1 1 2")

    def test_from_classes(self):
        coloring = Coloring.from_classes([[2, 4], [1, 3]])
        self.assertEqual(coloring.assign, (2, 1, 2, 1))

    def test_invalid_colorings(self):
        with self.assertRaises(InvalidParameterError):
            Coloring(size=3, k=2, assign=(1, 1))
        with self.assertRaises(InvalidParameterError):
            Coloring(size=3, k=2, assign=(1, 3, 1))
        with self.assertRaises(InvalidParameterError):
            Coloring(size=3, k=2, assign=(1, 1, 1))


class MultiplicativePartitionTests(SimpleTestCase):
    def test_doubling_partition_of_twelve(self):
        partition = multiplicative_partition(1, 2, 12)
        self.assertEqual(
            partition.classes, ((1, 2, 4, 8), (3, 6, 12), (5, 10), (7,), (9,), (11,))
        )
        stats = partition_stats(partition)
        self.assertEqual((stats.max_class_size, stats.singleton_count), (4, 3))

    def test_two_three_partition(self):
        partition = multiplicative_partition(2, 3, 6)
        self.assertEqual(partition.classes, ((1,), (2, 3), (4, 6), (5,)))

    def test_rejects_bad_generators(self):
        for a, b in ((2, 4), (3, 2), (0, 1)):
            with self.assertRaises(InvalidParameterError):
                multiplicative_partition(a, b, 10)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 5), st.integers(2, 7), st.integers(1, 80))
    def test_partition_covers_the_interval_once(self, a, b, size):
        assume(a < b and gcd(a, b) == 1)
        partition = multiplicative_partition(a, b, size)
        members = sorted(x for block in partition.classes for x in block)
        self.assertEqual(members, list(range(1, size + 1)))
        for block in partition.classes:
            for x, y in zip(block, block[1:]):
                self.assertEqual(x * b, y * a)

    def test_one_two_singleton_share_never_shrinks(self):
        ratios = []
        for t in range(1, 11):
            size = 2**t
            singletons = partition_stats(multiplicative_partition(1, 2, size)).singleton_count
            if t >= 2:
                self.assertEqual(singletons, size // 4)
            ratios.append(Fraction(singletons, size))
        self.assertEqual(ratios[:3], [0, Fraction(1, 4), Fraction(1, 4)])
        self.assertEqual(ratios, sorted(ratios))

    def test_two_three_singleton_share_settles_near_four_ninths(self):
        shares = [
            Fraction(partition_stats(multiplicative_partition(2, 3, 2**t)).singleton_count, 2**t)
            for t in range(1, 11)
        ]
        self.assertEqual(
            shares[:6],
            [1, Fraction(1, 2), Fraction(1, 2), Fraction(7, 16), Fraction(15, 32), Fraction(29, 64)],
        )
        for t, share in enumerate(shares, start=1):
            self.assertLessEqual(abs(share - Fraction(4, 9)), Fraction(4, 2**t))

    def test_two_three_singletons_up_to_one_hundred(self):
        stats = partition_stats(multiplicative_partition(2, 3, 100))
        self.assertEqual(stats.singleton_count, 45)
        # elements coprime to 6 always stand alone
        coprime_to_six = 100 - 100 // 2 - 100 // 3 + 100 // 6
        self.assertEqual(coprime_to_six, 33)
        self.assertGreaterEqual(stats.singleton_count, coprime_to_six)


class GreedyColoringTests(SimpleTestCase):
    def test_twelve_with_three_colours(self):
        partition = multiplicative_partition(1, 2, 12)
        coloring = greedy_coloring(partition, 3)
        self.assertEqual(coloring.class_sizes, (4, 4, 4))
        for block in partition.classes:
            self.assertTrue(coloring.is_monochromatic_on(block))
        self.assertFalse(find_rainbow(DOUBLING, coloring).found)

    def test_square_sizes_are_equinumerous_from_five_colours(self):
        for k in range(5, 9):
            with self.subTest(k=k):
                partition = multiplicative_partition(1, 2, k * k)
                coloring = greedy_coloring(partition, k)
                self.assertTrue(coloring.is_equinumerous)
                self.assertLessEqual(partition_stats(partition).max_class_size, 1 + log2(k * k))
                self.assertFalse(find_rainbow(DOUBLING, coloring).found)

    def test_small_squares_have_an_oversized_class(self):
        for k in (3, 4):
            partition = multiplicative_partition(1, 2, k * k)
            self.assertGreater(partition_stats(partition).max_class_size, k)

    def test_too_many_colours(self):
        with self.assertRaises(InvalidParameterError):
            greedy_coloring(multiplicative_partition(1, 2, 4), 4)


class EnumerationTests(SimpleTestCase):
    def test_orbit_counts(self):
        self.assertEqual(orbit_count(4, 2), 3)
        self.assertEqual(orbit_count(6, 3), 15)
        self.assertEqual(orbit_count(12, 3), 5775)
        self.assertEqual(orbit_count(12, 4), 15400)

    def test_four_into_two(self):
        listed = [c.assign for c in enumerate_equinumerous(4, 2)]
        self.assertEqual(listed, [(1, 1, 2, 2), (1, 2, 1, 2), (1, 2, 2, 1)])

    def test_enumeration_is_canonical_and_complete(self):
        listed = list(enumerate_equinumerous(9, 3))
        self.assertEqual(len(listed), orbit_count(9, 3))
        self.assertEqual(len({c.assign for c in listed}), len(listed))
        for coloring in listed:
            self.assertTrue(coloring.is_equinumerous)
            first_seen = [coloring.assign.index(color) for color in range(1, 4)]
            self.assertEqual(first_seen, sorted(first_seen))

    def test_k_must_divide_n(self):
        with self.assertRaises(InvalidParameterError):
            list(enumerate_equinumerous(7, 3))


class RandomColoringTests(SimpleTestCase):
    def test_block_coloring(self):
        self.assertEqual(block_coloring(7, 3).assign, (1, 1, 1, 2, 2, 3, 3))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 12), st.integers(1, 60), st.integers(0, 2**32 - 1))
    def test_bounded_coloring_respects_the_bound(self, k, size, seed):
        assume(k <= size)
        max_class = -(-size // k) + 1
        coloring = random_bounded_coloring(size, k, max_class, seed)
        self.assertLessEqual(max(coloring.class_sizes), max_class)
        self.assertEqual(coloring.k, k)
        self.assertEqual(coloring, random_bounded_coloring(size, k, max_class, seed))

    def test_infeasible_bound(self):
        with self.assertRaises(InvalidParameterError):
            random_bounded_coloring(10, 3, 3, 1)


class LemmaTests(SimpleTestCase):
    def test_classification(self):
        cases = {
            (0, 0): (LemmaCase.ZERO_MATRIX, None),
            (0, 3): (LemmaCase.ZERO_ENTRY, None),
            (2, 3): (LemmaCase.SAME_SIGN, None),
            (2, -2): (LemmaCase.OPPOSITE_EQUAL, (1, 1)),
            (1, -2): (LemmaCase.MULTIPLICATIVE, (1, 2)),
            (3, -2): (LemmaCase.MULTIPLICATIVE, (2, 3)),
            (-4, 6): (LemmaCase.MULTIPLICATIVE, (2, 3)),
        }
        for (p, q), (case, generator) in cases.items():
            with self.subTest(p=p, q=q):
                result = classify_one_by_two(RationalMatrix.from_rows([[p, q]]))
                self.assertEqual((result.case, result.generator), (case, generator))

    def test_lemma_coloring_has_no_rainbow_vector(self):
        for row in ([1, -2], [2, -3], [1, 1], [1, -1], [0, 5]):
            with self.subTest(row=row):
                matrix = RationalMatrix.from_rows([row])
                self.assertFalse(find_rainbow(matrix, lemma_coloring(matrix, 18, 3)).found)

    def test_zero_matrix_is_rejected(self):
        with self.assertRaises(InvalidParameterError):
            lemma_coloring(RationalMatrix.zeros(1, 2), 12, 3)
