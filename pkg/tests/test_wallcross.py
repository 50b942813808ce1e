import json
import unittest
from fractions import Fraction

import _paths  # noqa: F401
from fixtures import PENTAGON

from classify import Disk, Sphere, Torus, connected_sum, expr_homology, product
from config import Configuration, validate
from errors import PreconditionError, SchemaError
from exact import cs
from polytope import face_lattice
from scomplex import moment_angle_homology
from wallcross import (Homotopy, chamber_samples, chamber_signature, path_events, surgery_description,
                       wall_events)


def _pentagon_path():
    with open(_paths.data_file("pentagon-path.json"), encoding="utf-8") as handle:
        return Homotopy.from_json(json.load(handle))


class TestHomotopy(unittest.TestCase):
    def setUp(self):
        self.h = _pentagon_path()

    def test_endpoints(self):
        # the path ends on the pentagon
        self.assertEqual(self.h.end(), PENTAGON)
        self.assertEqual(validate(self.h.start()).k, 2)

    def test_json(self):
        self.assertEqual(Homotopy.from_json(self.h.to_json()), self.h)
        with self.assertRaises(SchemaError):
            Homotopy.from_json({"config": {}, "direction": [1, 0], "speed": 2})
        with self.assertRaises(SchemaError):
            Homotopy.from_json({"direction": [1, 0]})

    def test_bad_parameters(self):
        with self.assertRaises(PreconditionError):
            Homotopy(PENTAGON, (0, 0))
        with self.assertRaises(SchemaError):
            Homotopy(PENTAGON, (1, 0, 0))
        with self.assertRaises(PreconditionError):
            Homotopy(PENTAGON, (1, 0), 1, 0)


class TestWallEvents(unittest.TestCase):
    def setUp(self):
        self.h = _pentagon_path()
        self.events = wall_events(self.h)

    def test_two_flips(self):
        self.assertEqual([e.t for e in self.events], [Fraction(11, 31), Fraction(3, 7)])
        self.assertEqual([e.flip for e in self.events], [(1, 2), (1, 2)])
        for e in self.events:
            self.assertEqual(sum(e.flip), PENTAGON.n - 2 * PENTAGON.m)
            self.assertFalse(e.degenerate)

    def test_first_event(self):
        first = self.events[0]
        self.assertEqual(first.wall, (0, 2))
        self.assertEqual(first.before, (1,))
        self.assertEqual(first.after, (3, 4))
        self.assertEqual(first.to_json()["wall"], [1, 3])
        self.assertEqual(self.events[1].wall, (1, 4))

    def test_threads_do_not_change_the_events(self):
        self.assertEqual(wall_events(self.h, threads=3), self.events)

    def test_chambers(self):
        # k drops from 2 to 1 to 0 and each chamber has its own fingerprint
        samples = chamber_samples(self.h, self.events)
        self.assertEqual(len(samples), 5)
        ks = [validate(c).k for _, c in samples]
        self.assertEqual(ks, [2, 2, 1, 0, 0])
        signatures = [chamber_signature(c) for _, c in samples]
        self.assertEqual(signatures[0], signatures[1])
        self.assertEqual(signatures[3], signatures[4])
        self.assertEqual(len({signatures[1], signatures[2], signatures[3]}), 3)

    def test_chamber_homology(self):
        # S^5 x T^2, then S^3 x S^3 x S^1, then five copies of S^3 x S^4
        expected = [product(Sphere(5), Torus(2)), product(Sphere(3), Sphere(3), Sphere(1)),
                    connected_sum([(5, product(Sphere(3), Sphere(4)))])]
        samples = chamber_samples(self.h, self.events)[1:4]
        for (_, c), shape in zip(samples, expected):
            k = validate(c).k
            self.assertEqual(moment_angle_homology(face_lattice(c), k).h1, expr_homology(shape))

    def test_quiet_path(self):
        self.assertEqual(wall_events(Homotopy(PENTAGON, (Fraction(1, 10), 0))), [])

    def test_split_path(self):
        first = Homotopy(self.h.base, self.h.direction, 0, Fraction(2, 5))
        second = Homotopy(self.h.base, self.h.direction, Fraction(2, 5), 1)
        tagged = path_events([first, second])
        self.assertEqual([(i, e.t) for i, e in tagged], [(0, Fraction(11, 31)), (1, Fraction(3, 7))])
        with self.assertRaises(PreconditionError):
            path_events([second, first])

    def test_through_a_point(self):
        # the origin runs over the sixth point, every wall through it is hit at once
        c = Configuration.planar([cs(5, 1), cs(1, 5), cs(-5, 3), cs(-4, -4), cs(3, -5), cs(1, "1/2")])
        with self.assertRaisesRegex(PreconditionError, "perturb the path"):
            wall_events(Homotopy(c, (2, 1)))

    def test_inadmissible_end(self):
        with self.assertRaises(PreconditionError):
            wall_events(Homotopy(PENTAGON, (20, 0)))


class TestSignature(unittest.TestCase):
    def test_translate(self):
        moved = Homotopy(PENTAGON, (Fraction(1, 10), Fraction(1, 10))).end()
        self.assertEqual(chamber_signature(moved), chamber_signature(PENTAGON))
        self.assertTrue(chamber_signature(PENTAGON).startswith("sha256:"))

    def test_labels_matter(self):
        # a cyclic relabeling keeps the labeled triangles, a transposition does not
        rotated = PENTAGON.permute([1, 2, 3, 4, 0])
        swapped = PENTAGON.permute([1, 0, 2, 3, 4])
        self.assertEqual(chamber_signature(rotated), chamber_signature(PENTAGON))
        self.assertNotEqual(chamber_signature(swapped), chamber_signature(PENTAGON))


class TestSurgery(unittest.TestCase):
    def test_index_one(self):
        s = surgery_description((1, 2), 5, 1)
        self.assertEqual(s.p, 7)
        self.assertEqual(s.removed, product(Torus(3), Disk(4), Sphere(1)))
        self.assertEqual(s.glued, product(Torus(3), Sphere(3), Disk(2)))
        self.assertIn("(M0 x S^1)", s.formula)
        self.assertIn("flip of type (1, 2)", s.polytope)

    def test_higher_index(self):
        s = surgery_description((2, 2), 6, 1)
        self.assertEqual(s.p, 9)
        self.assertEqual(s.removed, product(Torus(2), Disk(4), Sphere(3)))
        self.assertEqual(s.glued, product(Torus(2), Sphere(3), Disk(4)))
        self.assertEqual(s.removed.dim, s.p)

    def test_rejections(self):
        with self.assertRaises(PreconditionError):
            surgery_description((0, 3), 5, 1)
        with self.assertRaises(PreconditionError):
            surgery_description((1, 1), 5, 1)
        with self.assertRaises(PreconditionError):
            surgery_description((1, 2), 5, 1, k=5)


if __name__ == "__main__":
    unittest.main()
