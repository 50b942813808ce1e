import itertools
import math
import random
import unittest
from fractions import Fraction

import _paths  # noqa: F401
import sympy
from sympy.matrices.normalforms import invariant_factors
from sympy.polys.domains import ZZ

from errors import PreconditionError, SchemaError
from exact import (ONE, ZERO, CScalar, Mat, QuadScalar, cs, check_field, complex_from_json, inverse,
                   integer_kernel, kernel_over_field, kernel_over_Q, primitive_integer_vector, qsign,
                   quad_from_json, rank, rref, saturated_lattice, scalar_to_json, smith_normal_form, solve,
                   to_rat)


def _sympy(x):
    ''' The same number as a sympy expression, used as an independent oracle '''
    return sympy.Rational(x.a.numerator, x.a.denominator) + \
        sympy.Rational(x.b.numerator, x.b.denominator) * sympy.sqrt(x.d or 1)


class TestRationals(unittest.TestCase):
    def test_parsing(self):
        # strings, ints and Fractions all land on the same reduced value
        self.assertEqual(to_rat("6/4"), Fraction(3, 2))
        self.assertEqual(to_rat(3), Fraction(3))
        self.assertEqual(to_rat(Fraction(1, 3)), Fraction(1, 3))

    def test_floats_refused(self):
        # a float is never an exact input
        with self.assertRaises(SchemaError):
            to_rat(0.5)
        with self.assertRaises(SchemaError):
            to_rat(True)
        with self.assertRaises(SchemaError):
            to_rat("one half")


class TestQuadScalar(unittest.TestCase):
    def setUp(self):
        self.r2 = QuadScalar(0, 1, 2)

    def test_field_descriptor(self):
        # d must be squarefree and at least 2
        self.assertEqual(check_field(5), 5)
        with self.assertRaises(PreconditionError):
            check_field(4)
        with self.assertRaises(PreconditionError):
            check_field(1)

    def test_irrational_part_needs_field(self):
        with self.assertRaises(SchemaError):
            QuadScalar(0, 1)

    def test_arithmetic(self):
        # (1 + sqrt2)(1 - sqrt2) = -1 and sqrt2 * sqrt2 = 2
        a = 1 + self.r2
        b = 1 - self.r2
        self.assertEqual(a * b, -1)
        self.assertEqual(self.r2 * self.r2, 2)
        self.assertEqual((a / b) * b, a)
        self.assertTrue((a * b).is_rational())

    def test_sign_against_sympy(self):
        # every sign is decided without floats; sympy confirms it
        samples = [QuadScalar(a, b, 2) for a in (-3, -1, Fraction(7, 5), 2, 3) for b in (-2, -1, 1, 2)]
        samples += [QuadScalar(Fraction(-99, 70), 1, 2), QuadScalar(Fraction(99, 70), -1, 2)]
        for x in samples:
            expected = int(sympy.sign(_sympy(x)))
            self.assertEqual(qsign(x), expected, msg=repr(x))

    def test_ordering(self):
        self.assertTrue(QuadScalar(Fraction(7, 5)) < self.r2 < QuadScalar(Fraction(3, 2)))

    def test_json(self):
        # rational values serialize as "p/q"
        self.assertEqual(scalar_to_json(QuadScalar(Fraction(1, 2))), "1/2")
        self.assertEqual(scalar_to_json(self.r2), {"a": "0/1", "b": "1/1"})
        self.assertEqual(quad_from_json({"a": "1/2", "b": "-1"}, 3), QuadScalar(Fraction(1, 2), -1, 3))
        with self.assertRaises(SchemaError):
            quad_from_json({"a": 1, "c": 2}, 3)


class TestCScalar(unittest.TestCase):
    def test_i_squared(self):
        i = cs(0, 1)
        self.assertEqual(i * i, -1)

    def test_division(self):
        # (1 - 3i)/2 is the ratio of the triangle differences
        z = (cs(-1, -1) - cs(0, 1)) / (cs(1) - cs(0, 1))
        self.assertEqual(z, cs("1/2", "-3/2"))

    def test_parse_forms(self):
        # pairs, dicts and bare reals describe the same numbers
        self.assertEqual(complex_from_json([1, "3/2"]), cs(1, "3/2"))
        self.assertEqual(complex_from_json({"re": 2}), CScalar(QuadScalar(2)))
        self.assertEqual(complex_from_json(-1), cs(-1))
        with self.assertRaises(SchemaError):
            complex_from_json([1, 2, 3])

    def test_mixed_fields_refused(self):
        with self.assertRaises(SchemaError):
            cs((0, 1), 0, d=2) + cs((0, 1), 0, d=3)


class TestLinearAlgebra(unittest.TestCase):
    def test_rank_against_sympy(self):
        rows = [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, -1, 2], [1, 3, 2, 6]]
        self.assertEqual(rank(rows), sympy.Matrix(rows).rank())

    def test_rref_canonical(self):
        # two bases of the same row space reduce to the same rows
        first, _ = rref([[1, 1, 0], [0, 1, 1]])
        second, _ = rref([[1, 2, 1], [1, 0, -1]])
        self.assertEqual(first, second)

    def test_kernel_against_sympy(self):
        rows = [[1, 0, -1, 2], [0, 1, 1, -1]]
        ker = kernel_over_field(Mat.from_rows(rows))
        self.assertEqual(ker.rows, len(sympy.Matrix(rows).nullspace()))
        for i in range(ker.rows):
            self.assertTrue(all(x == 0 for x in Mat.from_rows(rows).apply(ker.row(i))))

    def test_kernel_over_field_with_sqrt(self):
        # (1, -1 + sqrt2, -sqrt2) has a two-dimensional kernel over Q(sqrt2)
        r2 = QuadScalar(0, 1, 2)
        M = Mat.from_rows([[ONE, r2 - 1, -r2]])
        self.assertEqual(kernel_over_field(M).rows, 2)

    def test_kernel_over_Q(self):
        # only (1, 1, 1) survives as a rational kernel vector
        r2 = QuadScalar(0, 1, 2)
        ker = kernel_over_Q(Mat.from_rows([[ONE, r2 - 1, -r2]]))
        self.assertEqual(ker.rows, 1)
        self.assertEqual(list(ker.row(0)), [1, 1, 1])
        self.assertEqual(kernel_over_Q(Mat.from_rows([[ONE, r2]])).rows, 0)

    def test_solve_and_inverse(self):
        self.assertEqual(solve([[1, 1], [1, -1]], [3, 1], 2), [2, 1])
        self.assertIsNone(solve([[1, 1], [1, 1]], [1, 2], 2))
        self.assertEqual(inverse([[2, 0], [0, 4]]), [[Fraction(1, 2), ZERO], [ZERO, Fraction(1, 4)]])
        with self.assertRaises(PreconditionError):
            inverse([[1, 2], [2, 4]])

    def test_primitive_vector(self):
        self.assertEqual(primitive_integer_vector([Fraction(1, 2), Fraction(-3, 4), 0]), (2, -3, 0))

    def test_random_rational_kernels(self):
        # dimension n - rank, every row killed, rows independent
        rng = random.Random(11)
        for _ in range(60):
            rows = [[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(rng.randint(1, 4))]]
            cols = len(rows[0])
            rows += [[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(cols)]
                     for _ in range(rng.randint(0, 3))]
            M = Mat.from_rows(rows, cols)
            ker = kernel_over_field(M)
            oracle = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])
            self.assertEqual(ker.rows, cols - rank(rows))
            self.assertEqual(ker.rows, len(oracle.nullspace()))
            self.assertEqual(rank(ker), ker.rows)
            for i in range(ker.rows):
                self.assertTrue(all(x == 0 for x in M.apply(ker.row(i))))

    def test_random_kernels_over_Q_of_sqrt2(self):
        # rational rows that the irrational matrix kills
        rng = random.Random(12)
        for _ in range(40):
            cols = rng.randint(2, 4)
            rows = [[QuadScalar(rng.randint(-3, 3), rng.choice((0, 0, 1, -1)), 2) for _ in range(cols)]
                    for _ in range(rng.randint(1, 2))]
            M = Mat.from_rows(rows, cols)
            ker = kernel_over_Q(M)
            for i in range(ker.rows):
                self.assertTrue(all(to_rat(x) == x for x in ker.row(i)))
                self.assertTrue(all(x == 0 for x in M.apply(ker.row(i))))
            self.assertLessEqual(ker.rows, kernel_over_field(M).rows)


class TestLattices(unittest.TestCase):
    def test_saturation(self):
        self.assertEqual(saturated_lattice([[2, 4]], 2), ((1, 2),))
        self.assertEqual(saturated_lattice([[2, 0], [0, 3]], 2), ((1, 0), (0, 1)))
        self.assertEqual(saturated_lattice([[0, 0, 0]], 3), ())

    def test_index_five_sublattice_is_filled_in(self):
        # (1, 2, -1, -2, 0) is a fifth of an integer combination of these two rows
        rows = [[5, 0, 9, -2, -12], [0, 5, -7, -4, 6]]
        self.assertEqual(saturated_lattice(rows, 5), ((1, 2, -1, -2, 0), (0, 5, -7, -4, 6)))

    def test_integer_kernel(self):
        self.assertEqual(integer_kernel([[1, 1]], 2), ((1, -1),))
        self.assertEqual(integer_kernel([], 2), ((1, 0), (0, 1)))
        self.assertEqual(integer_kernel([[2, 3, 0]], 3), ((3, -2, 0), (0, 0, 1)))

    def test_random_saturation(self):
        # same rank, the input rows are integer combinations, maximal minors have gcd 1
        rng = random.Random(13)
        for _ in range(40):
            cols = rng.randint(2, 4)
            rows = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rng.randint(1, cols))]
            basis = saturated_lattice(rows, cols)
            self.assertEqual(len(basis), rank(rows))
            if not basis:
                continue
            columns = [[v[j] for v in basis] for j in range(cols)]
            for row in rows:
                coefficients = solve(columns, row, len(basis))
                self.assertTrue(all(x.denominator == 1 for x in coefficients))
            minors = [int(sympy.Matrix([[v[j] for j in sub] for v in basis]).det())
                      for sub in itertools.combinations(range(cols), len(basis))]
            self.assertEqual(math.gcd(*minors), 1)


class TestSmithNormalForm(unittest.TestCase):
    def test_diagonal(self):
        self.assertEqual(smith_normal_form([[2, 0], [0, 3]]), ((1, 6), 2))

    def test_small_matrix(self):
        self.assertEqual(smith_normal_form([[2, 4], [6, 8]]), ((2, 4), 2))

    def test_zero_matrix(self):
        self.assertEqual(smith_normal_form([[0, 0], [0, 0]]), ((), 0))

    def test_against_determinant(self):
        # the product of the factors is |det| and the first one is the gcd of the entries
        rows = [[4, 6, 2], [2, 8, 10], [6, 2, 14]]
        factors, r = smith_normal_form(rows)
        self.assertEqual(r, 3)
        self.assertEqual(math.prod(factors), abs(sympy.Matrix(rows).det()))
        self.assertEqual(factors[0], math.gcd(*(x for row in rows for x in row)))
        for a, b in zip(factors, factors[1:]):
            self.assertEqual(b % a, 0)

    def test_against_sympy(self):
        rows = [[2, 4, 4], [-6, 6, 12], [10, -4, -16], [0, 0, 0]]
        expected = invariant_factors(sympy.Matrix(rows), domain=ZZ)
        factors, r = smith_normal_form(rows)
        self.assertEqual(factors, tuple(abs(int(x)) for x in expected if x != 0))
        self.assertEqual(r, len(factors))

    def test_random_against_minors(self):
        # d1 * ... * dr is the gcd of the r x r minors
        rng = random.Random(14)
        for _ in range(60):
            nrows, ncols = rng.randint(1, 4), rng.randint(1, 4)
            rows = [[rng.randint(-6, 6) for _ in range(ncols)] for _ in range(nrows)]
            factors, r = smith_normal_form(rows)
            oracle = sympy.Matrix(rows)
            self.assertEqual(r, oracle.rank())
            for size in range(1, r + 1):
                minors = [int(oracle.extract(list(rs), list(cs_)).det())
                          for rs in itertools.combinations(range(nrows), size)
                          for cs_ in itertools.combinations(range(ncols), size)]
                self.assertEqual(math.prod(factors[:size]), math.gcd(*minors))

    def test_rectangular(self):
        # the boundary of a triangle's edges onto its vertices has rank 2
        factors, r = smith_normal_form([[-1, -1, 0], [1, 0, -1], [0, 1, 1]])
        self.assertEqual(r, 2)
        self.assertEqual(factors, (1, 1))

    def test_non_integer_refused(self):
        with self.assertRaises(PreconditionError):
            smith_normal_form([[Fraction(1, 2)]])


if __name__ == "__main__":
    unittest.main()
