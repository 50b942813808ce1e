"""Configurations shared by several test modules."""
import _paths  # noqa: F401

from config import Configuration
from exact import cs

TRIANGLE = Configuration.planar([cs(1), cs(0, 1), cs(-1, -1)])
HOPF = Configuration.planar([cs(1), cs(0, 1), cs(-1, -1), cs(-1, -1)])
CE = Configuration.planar([cs(1), cs(0, 1), cs(0, 1), cs(-1, -1), cs(-1, -1)])
PENTAGON = Configuration.planar([cs(5, 1), cs(1, 5), cs(-5, 3), cs(-4, -4), cs(3, -5)])
HEPTAGON = Configuration.planar([cs(10, 0), cs(6, 8), cs(-2, 10), cs(-9, 4), cs(-9, -4), cs(-2, -10),
                                 cs(6, -8)])
ALGEBRAIC = Configuration.planar([cs(1), cs(0, 1), cs(-1, -1), cs(1, "3/2"), cs("-1/2", -1)])
PERTURBED = Configuration.planar([cs(1), cs(0, 1), cs(-1, (0, -1), d=2), cs(1, "3/2"), cs("-1/2", -1)])
DEL_PEZZO = Configuration.planar([cs(1), cs(0, 1), cs(-2, -4), cs(4, 4), cs(-4, -2)])


def hirzebruch(a):
    ''' The configuration whose quotient fibres over the Hirzebruch surface of index a '''
    return Configuration.planar([cs(1), cs(0, 1), cs(2 * a * a + 3 * a, 2 * a + 1), cs(1), cs(-2 * (a + 1), -2)])


# (3,1,1,1,1): three points on one ray and four single ones, shaped like the pentagon
TRIPLE_PENTAGON = Configuration.planar([cs(5, 1), cs(5, 1), cs(5, 1), cs(1, 5), cs(-5, 3), cs(-4, -4),
                                        cs(3, -5)])

CORPUS = {
    "triangle": (TRIANGLE, (1, 1, 1), 3),
    "hopf": (HOPF, (1, 1, 2), 2),
    "ce": (CE, (1, 2, 2), 1),
    "pentagon": (PENTAGON, (1, 1, 1, 1, 1), 0),
    "triple_pentagon": (TRIPLE_PENTAGON, (3, 1, 1, 1, 1), 0),
    "heptagon": (HEPTAGON, (1, 1, 1, 1, 1, 1, 1), 0),
}
