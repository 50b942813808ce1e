import itertools
import random
import unittest
from fractions import Fraction

import _paths  # noqa: F401

from convex import (affine_rank, full_dimensional, interiors_intersect, maximize, orientation, planar_hull,
                    wall_side_counts, zero_in_hull)
from errors import PreconditionError
from exact import QuadScalar


class TestZeroInHull(unittest.TestCase):
    def test_triangle_around_origin(self):
        # the certificate re-verifies and uses at most D + 1 points
        points = [(1, 0), (0, 1), (-1, -1)]
        cert = zero_in_hull(points)
        self.assertIsNotNone(cert)
        self.assertTrue(cert.verify(points))
        self.assertLessEqual(len(cert.indices), 3)
        self.assertEqual(sum(cert.coefficients), 1)

    def test_origin_outside(self):
        self.assertIsNone(zero_in_hull([(1, 0), (0, 1), (1, 1)]))
        self.assertIsNone(zero_in_hull([]))

    def test_origin_on_a_segment(self):
        # a closed hull: the origin on an edge counts
        cert = zero_in_hull([(1, 1), (-2, -2), (5, 3)])
        self.assertEqual(cert.indices, (0, 1))
        self.assertEqual(cert.coefficients, (Fraction(2, 3), Fraction(1, 3)))

    def test_origin_as_a_point(self):
        self.assertEqual(zero_in_hull([(3, 1), (0, 0)]).indices, (1,))

    def test_irrational_coordinates(self):
        # (-1, -sqrt2) and (1, 3/2) do not line up with the origin, the triangle with (0, 1) does not contain it
        r2 = QuadScalar(0, 1, 2)
        self.assertIsNone(zero_in_hull([(-1, -r2), (1, Fraction(3, 2))]))
        self.assertIsNotNone(zero_in_hull([(-1, -r2), (1, 0), (0, 1)]))


def _cross(p, q):
    return p[0] * q[1] - p[1] * q[0]


def _covered_by_small_subset(points):
    ''' The origin is one of the points, on a segment between two, or in a triangle of three '''
    if any(p == (0, 0) for p in points):
        return True
    for p, q in itertools.combinations(points, 2):
        if _cross(p, q) == 0 and p[0] * q[0] + p[1] * q[1] <= 0:
            return True
    for p, q, r in itertools.combinations(points, 3):
        signs = {(s > 0) - (s < 0) for s in (_cross(p, q), _cross(q, r), _cross(r, p))}
        if signs != {0} and not {-1, 1} <= signs:
            return True
    return False


class TestAgainstTriangles(unittest.TestCase):
    def test_random_planar_sets(self):
        # up to 7 integer points, compared with an orientation check on every pair and triple
        rng = random.Random(7)
        for _ in range(400):
            points = [(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(rng.randint(1, 7))]
            cert = zero_in_hull(points)
            self.assertEqual(cert is not None, _covered_by_small_subset(points), points)
            if cert is not None:
                self.assertTrue(cert.verify(points))

    def test_every_triple_of_a_small_grid(self):
        # exhaustive on the 3x3 grid around the origin, origin excluded
        grid = [(x, y) for x in (-1, 0, 1) for y in (-1, 0, 1) if (x, y) != (0, 0)]
        for size in (1, 2, 3):
            for points in itertools.combinations(grid, size):
                self.assertEqual(zero_in_hull(list(points)) is not None, _covered_by_small_subset(points), points)


class TestLinearProgram(unittest.TestCase):
    def test_bounded_optimum(self):
        # max x + 2y with x + y + s = 4, x, y, s >= 0
        self.assertEqual(maximize([[1, 1, 1]], [4], [1, 2, 0]), 8)

    def test_infeasible(self):
        self.assertIsNone(maximize([[1, 1]], [-1], [0, 0]))

    def test_equality_system(self):
        # x - y = 1 and x + y = 3 forces x = 2
        self.assertEqual(maximize([[1, -1], [1, 1]], [1, 3], [1, 0]), 2)


class TestInteriors(unittest.TestCase):
    def setUp(self):
        self.big = [(2, 0), (-2, 2), (-2, -2)]
        self.small = [(1, 0), (0, 1), (-1, -1)]

    def test_nested_triangles_meet(self):
        self.assertTrue(interiors_intersect(self.big, self.small))

    def test_touching_triangles_do_not_meet(self):
        # the two share only the edge x = 0
        left = [(0, 1), (0, -1), (-1, 0)]
        right = [(0, 1), (0, -1), (1, 0)]
        self.assertFalse(interiors_intersect(left, right))

    def test_flat_hull(self):
        flat = [(1, 0), (-1, 0), (2, 0)]
        self.assertFalse(full_dimensional(flat))
        self.assertFalse(interiors_intersect(flat, self.big))
        self.assertEqual(affine_rank(flat), 1)

    def test_empty_refused(self):
        with self.assertRaises(PreconditionError):
            interiors_intersect([], self.big)


class TestWalls(unittest.TestCase):
    def test_side_counts(self):
        # the wall through (1, 0) and (0, 1) separates (2, 2) from the rest
        points = [(1, 0), (0, 1), (2, 2), (-1, -1), (0, 0)]
        sides = wall_side_counts(points, (0, 1))
        self.assertEqual(sides.counts(), (1, 2, 0))
        self.assertEqual(sides.left, (2,))

    def test_point_on_the_wall(self):
        points = [(1, 0), (0, 1), (2, -1), (-1, -1)]
        sides = wall_side_counts(points, (0, 1))
        self.assertEqual(sides.extras, (2,))


class TestPlanar(unittest.TestCase):
    def test_orientation(self):
        self.assertEqual(orientation((0, 0), (1, 0), (0, 1)), 1)
        self.assertEqual(orientation((0, 0), (0, 1), (1, 0)), -1)
        self.assertEqual(orientation((0, 0), (1, 1), (2, 2)), 0)

    def test_hull_drops_interior_and_repeated_points(self):
        points = [(0, 0), (2, 0), (2, 2), (0, 2), (1, 1), (2, 0)]
        hull = planar_hull(points)
        self.assertEqual(sorted(hull), [0, 1, 2, 3])
        self.assertEqual(len(hull), 4)


if __name__ == "__main__":
    unittest.main()
