"""
SVG pictures of planar configurations: the points with their labels and
multiplicities, the convex hull, the chords between points and a cross at the
origin.

Drawn with matplotlib on a fixed 800x800 canvas. Decimal coordinates are for
display only; the exact ones are written into a comment at the top of the file.
"""
from __future__ import annotations

import io
import logging
from decimal import ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction
from typing import Dict, List, Tuple
from xml.etree import ElementTree

import matplotlib

matplotlib.use("Agg")
from matplotlib.figure import Figure  # noqa: E402

from config import Configuration  # noqa: E402
from convex import planar_hull  # noqa: E402
from errors import PreconditionError  # noqa: E402
from exact import QuadScalar, scalar_to_json, to_rat  # noqa: E402

LOGGER = logging.getLogger(__name__)

CANVAS = 800
PALETTE = {"point": "#1f3b73", "hull": "#2a9d8f", "chord": "#b0b0b0", "origin": "#d62828", "text": "#000000"}
NAN = float("nan")
PLACES = Decimal("0.000001")
_RC = {"svg.hashsalt": "lvm", "svg.fonttype": "none", "path.simplify": False}


def _decimal(x: Fraction) -> Decimal:
    return Decimal(x.numerator) / Decimal(x.denominator)


def _display(x) -> float:
    ''' Exact value rounded half-up to six decimals, then handed to matplotlib '''
    with localcontext() as ctx:
        ctx.prec = 60
        if isinstance(x, QuadScalar):
            value = _decimal(x.a)
            if x.b:
                value += _decimal(x.b) * Decimal(x.d).sqrt()
        else:
            value = _decimal(to_rat(x))
        return float(value.quantize(PLACES, rounding=ROUND_HALF_UP))


def _locations(c: Configuration) -> Dict[tuple, List[int]]:
    ''' Distinct points, each with the indices sitting on it, in index order '''
    groups: Dict[tuple, List[int]] = {}
    for i, p in enumerate(c.real_points()):
        groups.setdefault(p, []).append(i)
    return groups


def _exact_comment(c: Configuration) -> str:
    def fmt(x):
        value = scalar_to_json(x)
        return value if isinstance(value, str) else f"{value['a']}+{value['b']}*sqrt({c.d})"

    coords = "; ".join(f"{i + 1}: ({fmt(p[0])}, {fmt(p[1])})" for i, p in enumerate(c.real_points()))
    return f"<!-- exact coordinates {coords} -->\n"


def plot_svg(c: Configuration, title: str = "") -> str:
    """
    Renders an m = 1 configuration.

    Parameters:
    c (Configuration): a planar configuration.
    title (str, optional): caption drawn above the picture.

    Returns:
    The SVG document as a string. Elements carry ids: point-<i>, label-<i>,
    mult-<i> (only for repeated points), chord-<i>-<j>, hull, origin.
    """
    if c.m != 1:
        raise PreconditionError("plotting needs m = 1")
    # one marker per distinct location, the origin always in view
    groups = _locations(c)
    points = list(groups)
    xs = [_display(p[0]) for p in points] + [0.0]
    ys = [_display(p[1]) for p in points] + [0.0]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    margin = span * 0.15

    with matplotlib.rc_context(_RC):
        fig = Figure(figsize=(CANVAS / 72, CANVAS / 72), dpi=72)
        ax = fig.add_axes((0, 0, 1, 1))
        ax.set_xlim(min(xs) - margin, max(xs) + margin)
        ax.set_ylim(min(ys) - margin, max(ys) + margin)
        ax.set_aspect("equal")
        ax.axis("off")
        if title:
            ax.set_title(title)

        # a chord between every pair of distinct locations
        for a in range(len(points)):
            for b in range(a + 1, len(points)):
                i, j = groups[points[a]][0], groups[points[b]][0]
                ax.plot([xs[a], xs[b]], [ys[a], ys[b]], color=PALETTE["chord"], linewidth=0.8,
                        gid=f"chord-{i + 1}-{j + 1}")

        hull = planar_hull(points)
        if len(hull) >= 2:
            ring = hull + hull[:1]
            ax.plot([xs[h] for h in ring], [ys[h] for h in ring], color=PALETTE["hull"], linewidth=2,
                    gid="hull")

        arm = span * 0.04
        ax.plot([-arm, arm, NAN, 0, 0], [0, 0, NAN, -arm, arm], color=PALETTE["origin"], linewidth=1.5,
                gid="origin")

        for a, p in enumerate(points):
            indices = groups[p]
            first = indices[0] + 1
            ax.plot([xs[a]], [ys[a]], marker="o", markersize=7, color=PALETTE["point"], gid=f"point-{first}")
            ax.text(xs[a] + arm, ys[a] + arm, ",".join(str(i + 1) for i in indices), color=PALETTE["text"],
                    fontsize=12, gid=f"label-{first}")
            if len(indices) > 1:
                ax.text(xs[a] + arm, ys[a] - 2 * arm, str(len(indices)), color=PALETTE["point"], fontsize=14,
                        fontweight="bold", gid=f"mult-{first}")

        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None, "Creator": None})
    svg = buffer.getvalue()
    LOGGER.debug("rendered %d points, %d hull vertices", len(points), len(hull))
    # exact coordinates go right after the XML declaration
    header, _, body = svg.partition("\n")
    if header.startswith("<?xml"):
        return header + "\n" + _exact_comment(c) + body
    return _exact_comment(c) + svg


def svg_element_ids(svg: str) -> List[str]:
    ''' The id attributes of the drawing, in document order '''
    root = ElementTree.fromstring(svg.encode("utf-8"))
    return [el.get("id") for el in root.iter() if el.get("id")]


def count_elements(svg: str) -> Tuple[int, int, int]:
    ''' (points, chords, multiplicity labels) in a rendered picture '''
    ids = svg_element_ids(svg)
    return (sum(1 for i in ids if i.startswith("point-")),
            sum(1 for i in ids if i.startswith("chord-")),
            sum(1 for i in ids if i.startswith("mult-")))


if __name__ == "__main__":
    from exact import cs
    svg = plot_svg(Configuration.planar([cs(1), cs(0, 1), cs(-1, -1)]), "triangle")
    print(count_elements(svg))
