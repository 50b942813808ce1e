"""
Translation homotopies of configurations and the walls they cross.

A homotopy moves every point by -t*c, which is the same as moving the origin
along t*c. The origin crosses a wall when it passes through the convex hull of
2m points; each crossing changes the polytope by a flip of type (a, b).
"""
from __future__ import annotations

import hashlib
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cmp_to_key
from typing import List, Optional, Sequence, Tuple

from classify import Disk, ManifoldExpr, Sphere, Torus, expr_to_json, expr_to_text, product
from config import Configuration, config_from_json, config_to_json, require_admissible, validate
from convex import maximize, wall_side_counts, zero_in_hull
from errors import InvariantError, PreconditionError, SchemaError
from exact import ONE, ZERO, Mat, dot, kernel_over_field, qsign, rank, rat_to_str, scalar_to_json, solve, to_rat

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Homotopy:
    """Lambda(t) = Lambda - t*c for t0 <= t <= t1; c is a rational vector of R^{2m}."""

    base: Configuration
    direction: tuple
    t0: object = ZERO
    t1: object = ONE

    def __post_init__(self):
        direction = tuple(to_rat(x) for x in self.direction)
        object.__setattr__(self, "direction", direction)
        object.__setattr__(self, "t0", to_rat(self.t0))
        object.__setattr__(self, "t1", to_rat(self.t1))
        if len(direction) != 2 * self.base.m:
            raise SchemaError(f"direction needs {2 * self.base.m} real coordinates")
        if not any(direction):
            raise PreconditionError("direction must be nonzero")
        if self.t0 >= self.t1:
            raise PreconditionError("t0 must be smaller than t1")

    def at(self, t) -> Configuration:
        points = [[x - t * y for x, y in zip(p, self.direction)] for p in self.base.real_points()]
        return Configuration.from_real_points(self.base.m, points, self.base.d)

    def start(self) -> Configuration:
        return self.at(self.t0)

    def end(self) -> Configuration:
        return self.at(self.t1)

    def to_json(self) -> dict:
        return {"config": config_to_json(self.base), "direction": [rat_to_str(x) for x in self.direction],
                "t0": rat_to_str(self.t0), "t1": rat_to_str(self.t1)}

    @classmethod
    def from_json(cls, data, d: Optional[int] = None) -> "Homotopy":
        if not isinstance(data, dict) or "config" not in data or "direction" not in data:
            raise SchemaError("a homotopy needs 'config' and 'direction'")
        unknown = set(data) - {"config", "direction", "t0", "t1"}
        if unknown:
            raise SchemaError(f"unknown homotopy fields: {sorted(unknown)}")
        return cls(config_from_json(data["config"], d), tuple(data["direction"]),
                   data.get("t0", 0), data.get("t1", 1))


@dataclass(frozen=True)
class WallEvent:
    """
    The origin crosses the hull of ``wall`` at time t.

    ``before`` holds the remaining indices on the origin's side just before
    the crossing, ``after`` the others; flip = (len(before), len(after)).
    """

    t: object
    wall: Tuple[int, ...]
    flip: Tuple[int, int]
    before: Tuple[int, ...] = ()
    after: Tuple[int, ...] = ()

    @property
    def degenerate(self) -> bool:
        ''' a = 0 or b = 0: the number of indispensable points changes instead '''
        return 0 in self.flip

    def to_json(self) -> dict:
        return {"t": scalar_to_json(self.t), "wall": [i + 1 for i in self.wall], "flip": list(self.flip),
                "before": [i + 1 for i in self.before], "after": [i + 1 for i in self.after],
                "degenerate": self.degenerate}


def _check_endpoints(h: Homotopy) -> None:
    for name, c in (("start", h.start()), ("end", h.end())):
        if c.n < 2 * c.m + 1 or not validate(c).admissible:
            raise PreconditionError(f"the {name} of the path is not admissible")


def _meets_in_range(points: Sequence[tuple], wall: Sequence[int], h: Homotopy) -> bool:
    """
    Whether the origin enters the closed hull of the wall for some t in [t0, t1].

    Variables alpha_j >= 0, s = t - t0 >= 0 and u = t1 - t >= 0; the condition
    sum alpha_j p_j - t c = 0 with sum alpha_j = 1 is linear.
    """
    D = len(h.direction)
    size = len(wall)
    # sum alpha_j p_j - s c = t0 c, sum alpha_j = 1, s + u = t1 - t0
    rows = []
    rhs = []
    for r in range(D):
        rows.append([points[w][r] for w in wall] + [-h.direction[r], ZERO])
        rhs.append(h.t0 * h.direction[r])
    rows.append([ONE] * size + [ZERO, ZERO])
    rhs.append(ONE)
    rows.append([ZERO] * size + [ONE, ONE])
    rhs.append(h.t1 - h.t0)
    return maximize(rows, rhs, [ZERO] * (size + 2)) is not None


def _crossing(points: Sequence[tuple], wall: Tuple[int, ...], h: Homotopy):
    """Crossing time of one wall inside the open range, or None."""
    labels = [w + 1 for w in wall]
    base = points[wall[0]]
    diffs = [[x - y for x, y in zip(points[w], base)] for w in wall[1:]]
    D = len(h.direction)
    generic = rank(diffs) == len(wall) - 1 if diffs else True
    # t c = base + sum mu_j (p_j - base), unknowns t and mu
    coeff = [[h.direction[r]] + [-diff[r] for diff in diffs] for r in range(D)]
    solution = solve(coeff, list(base), len(wall))
    free_t = any(row[0] != 0 for row in kernel_over_field(Mat.from_rows(coeff, len(wall))).to_rows())
    # degenerate walls only matter when the path actually touches them
    if not generic or (solution is not None and free_t):
        if _meets_in_range(points, wall, h):
            raise PreconditionError(f"perturb the path: it meets a lower-dimensional cell at wall {labels}")
        return None
    if solution is None:
        return None
    t = solution[0]
    if qsign(t - h.t0) <= 0 or qsign(h.t1 - t) <= 0:
        return None
    # the hyperplane is crossed, check the origin is inside the wall cell
    moved = [[x - t * y for x, y in zip(points[w], h.direction)] for w in wall]
    if zero_in_hull(moved) is None:
        return None
    return t


def _flip_at(h: Homotopy, t, wall: Tuple[int, ...]) -> WallEvent:
    points = h.at(t).real_points()
    sides = wall_side_counts(points, wall)
    if sides.extras:
        raise PreconditionError(f"perturb the path: points {[i + 1 for i in sides.extras]} "
                                f"lie on the wall hyperplane")
    drift = qsign(dot(sides.normal, h.direction))
    if drift == 0:
        raise InvariantError("path is parallel to a wall it crosses")
    # just before t the origin sits on the side where normal.x - offset has sign -drift
    before, after = (sides.right, sides.left) if drift > 0 else (sides.left, sides.right)
    return WallEvent(t, wall, (len(before), len(after)), before, after)


def wall_events(h: Homotopy, threads: int = 1) -> List[WallEvent]:
    """
    Walls crossed strictly inside (t0, t1), sorted by time.

    Parameters:
    h (Homotopy): a path with admissible endpoints.
    threads (int): worker threads for the per-wall scan.

    Returns:
    The list of WallEvent. Raises PreconditionError "perturb the path" when two
    walls are crossed at once or the path is not generic.
    """
    _check_endpoints(h)
    c = h.base
    points = c.real_points()
    walls = list(itertools.combinations(range(c.n), 2 * c.m))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            times = list(pool.map(lambda w: _crossing(points, w, h), walls))
    else:
        times = [_crossing(points, w, h) for w in walls]
    hits = sorted(((t, w) for t, w in zip(times, walls) if t is not None),
                  key=cmp_to_key(lambda x, y: qsign(x[0] - y[0]) or (x[1] > y[1]) - (x[1] < y[1])))
    # simultaneous walls are not generic
    for (t, w), (u, v) in zip(hits, hits[1:]):
        if t == u:
            raise PreconditionError(f"perturb the path: walls {[i + 1 for i in w]} and "
                                    f"{[i + 1 for i in v]} are crossed at the same time")
    events = [_flip_at(h, t, w) for t, w in hits]
    for e in events:
        if sum(e.flip) != c.n - 2 * c.m:
            raise InvariantError(f"flip {e.flip} does not add up to n - 2m")
    LOGGER.info("%d wall events on the path", len(events))
    return events


def path_events(segments: Sequence[Homotopy], threads: int = 1) -> List[Tuple[int, WallEvent]]:
    ''' Events of a piecewise-linear path, tagged with the segment index '''
    for first, second in zip(segments, segments[1:]):
        if first.end().real_points() != second.start().real_points():
            raise PreconditionError("consecutive segments do not join up")
    return [(i, e) for i, seg in enumerate(segments) for e in wall_events(seg, threads)]


def chamber_samples(h: Homotopy, events: Optional[List[WallEvent]] = None) -> List[Tuple[object, Configuration]]:
    """The endpoints and one exact midpoint between consecutive event times."""
    events = wall_events(h) if events is None else events
    times = [h.t0] + [e.t for e in events] + [h.t1]
    samples = [(h.t0, h.start())]
    for left, right in zip(times, times[1:]):
        mid = (left + right) / 2
        samples.append((mid, h.at(mid)))
    samples.append((h.t1, h.end()))
    return samples


def chamber_signature(c: Configuration) -> str:
    ''' Fingerprint of the labeled minimal subsets around the origin '''
    report = require_admissible(c)
    payload = f"{c.n}:{c.m}:" + ";".join(",".join(str(i + 1) for i in e) for e in sorted(report.e_min))
    return "sha256:" + hashlib.sha256(payload.encode("ascii")).hexdigest()


# ---------------------------------------------------------------- surgery

@dataclass(frozen=True)
class SurgeryDescription:
    flip: Tuple[int, int]
    n: int
    m: int
    k: int
    p: int
    removed: ManifoldExpr
    glued: ManifoldExpr
    formula: str
    polytope: str

    def to_json(self) -> dict:
        return {"flip": list(self.flip), "n": self.n, "m": self.m, "k": self.k, "p": self.p,
                "removed": expr_to_json(self.removed), "glued": expr_to_json(self.glued),
                "formula": self.formula, "polytope": self.polytope}


def surgery_description(flip: Tuple[int, int], n: int, m: int, k: int = 0) -> SurgeryDescription:
    """
    The elementary surgery of type (a, b) realizing a flip on M_0.

    Parameters:
    flip: (a, b) with a + b = n - 2m and both positive.
    n, m: size of the configuration.
    k (int): indispensable points before the crossing; p = dim M_0 = 2n - 2m - 1 - k.

    Returns:
    SurgeryDescription with the removed and glued pieces as expressions.
    """
    a, b = flip
    if a + b != n - 2 * m:
        raise PreconditionError(f"flip ({a}, {b}) needs a + b = n - 2m = {n - 2 * m}")
    if a < 1 or b < 1:
        raise PreconditionError(f"degenerate crossing ({a}, {b}) changes the number of indispensable points")
    p = 2 * n - 2 * m - 1 - k
    # a = 1 is a surgery on M0 x S^1
    if a == 1:
        circles = p - 2 * b
        removed = product(Torus(circles), Disk(2 * b), Sphere(1))
        glued = product(Torus(circles), Sphere(2 * b - 1), Disk(2))
        ambient = "(M0 x S^1)"
    else:
        circles = p - 2 * b - 2 * a + 1
        removed = product(Torus(circles), Disk(2 * b), Sphere(2 * a - 1))
        glued = product(Torus(circles), Sphere(2 * b - 1), Disk(2 * a))
        ambient = "M0"
    if circles < 0:
        raise PreconditionError(f"no surgery of type ({a}, {b}) on a manifold of dimension {p}")
    formula = f"M0' = {ambient} \\ ({expr_to_text(removed)}) U ({expr_to_text(glued)})"
    statement = f"K' is obtained from K by a flip of type ({a}, {b})"
    return SurgeryDescription((a, b), n, m, k, p, removed, glued, formula, statement)


if __name__ == "__main__":
    for flip in ((2, 1), (1, 2)):
        print(flip, surgery_description(flip, 5, 1).formula)
