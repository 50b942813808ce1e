import unittest
from fractions import Fraction

import _paths  # noqa: F401
from fixtures import CE, PENTAGON, TRIANGLE

from config import Configuration
from errors import PreconditionError
from exact import QuadScalar, cs
from plot import _display, count_elements, plot_svg, svg_element_ids


class TestPlot(unittest.TestCase):
    def setUp(self):
        self.svg = plot_svg(PENTAGON)

    def test_pentagon(self):
        # five labeled points, every chord between them, the hull and the origin cross
        self.assertEqual(count_elements(self.svg), (5, 10, 0))
        ids = svg_element_ids(self.svg)
        self.assertIn("hull", ids)
        self.assertIn("origin", ids)
        self.assertIn("label-5", ids)

    def test_triangle(self):
        self.assertEqual(count_elements(plot_svg(TRIANGLE)), (3, 3, 0))

    def test_multiplicities(self):
        # the doubled points of Calabi-Eckmann are drawn once with a multiplicity label
        ids = svg_element_ids(plot_svg(CE))
        self.assertEqual(count_elements(plot_svg(CE)), (3, 3, 2))
        self.assertIn("mult-2", ids)
        self.assertIn("mult-4", ids)

    def test_exact_comment(self):
        self.assertIn("<!-- exact coordinates 1: (5/1, 1/1);", self.svg)

    def test_deterministic(self):
        self.assertEqual(plot_svg(PENTAGON), self.svg)

    def test_needs_planar(self):
        c = Configuration(2, tuple((cs(1), cs(0)) for _ in range(5)))
        with self.assertRaises(PreconditionError):
            plot_svg(c)


class TestDisplayCoordinates(unittest.TestCase):
    def test_exact_rounding(self):
        # a tie is rounded away from zero from the exact value, not from its binary float
        self.assertEqual(_display(Fraction(1, 2_000_000)), 0.000001)
        self.assertEqual(_display(Fraction(-3, 2_000_000)), -0.000002)
        self.assertEqual(_display(QuadScalar(0, 1, 2)), 1.414214)
        self.assertEqual(_display(QuadScalar(1, -1, 2)), -0.414214)

    def test_large_coordinates(self):
        self.assertEqual(_display(Fraction(123456789012345678, 10 ** 9)), 123456789.012346)


if __name__ == "__main__":
    unittest.main()
