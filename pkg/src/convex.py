"""
Exact convexity oracles over R^D with coordinates in Q(sqrt d).

Hull membership is decided by Caratheodory enumeration; interiors are compared
with a small exact simplex method (Bland's rule, two phases).
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from errors import InvariantError, PreconditionError
from exact import ONE, ZERO, Mat, dot, kernel_over_field, qsign, rank, solve

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class HullCertificate:
    """Proof that 0 lies in a convex hull: a small subset and its barycentric weights."""

    indices: Tuple[int, ...]
    coefficients: tuple

    def verify(self, points: Sequence[Sequence]) -> bool:
        # weights form a probability vector
        if sum(self.coefficients, ZERO) != 1:
            return False
        if any(qsign(a) < 0 for a in self.coefficients):
            return False
        # and the weighted sum vanishes in every coordinate
        dim = len(points[0])
        for k in range(dim):
            if dot([points[i][k] for i in self.indices], self.coefficients) != 0:
                return False
        return True


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull (rank of the differences to the first point)."""
    if not points:
        raise PreconditionError("affine_rank needs at least one point")
    base = points[0]
    diffs = [[x - y for x, y in zip(p, base)] for p in points[1:]]
    return rank(diffs) if diffs else 0


def _barycentric_zero(chosen: Sequence[Sequence], dim: int) -> Optional[list]:
    # sum alpha_i p_i = 0 and sum alpha_i = 1
    rows = [[p[k] for p in chosen] for k in range(dim)]
    rows.append([ONE] * len(chosen))
    rhs = [ZERO] * dim + [ONE]
    return solve(rows, rhs, len(chosen))


@lru_cache(maxsize=1 << 16)
def _zero_in_hull(points: tuple) -> Optional[HullCertificate]:
    dim = len(points[0])
    for size in range(1, min(dim + 1, len(points)) + 1):
        for subset in itertools.combinations(range(len(points)), size):
            chosen = [points[i] for i in subset]
            # only affinely independent subsets, so the weights are unique
            if size > 1 and affine_rank(chosen) != size - 1:
                continue
            alpha = _barycentric_zero(chosen, dim)
            if alpha is not None and all(qsign(a) >= 0 for a in alpha):
                return HullCertificate(subset, tuple(alpha))
    return None


def zero_in_hull(points: Sequence[Sequence]) -> Optional[HullCertificate]:
    """
    Decides whether the origin lies in the closed convex hull of the points.

    Parameters:
    points: real vectors of a common dimension D.

    Returns:
    A HullCertificate whose indices refer to ``points`` (at most D+1 of them),
    or None when the origin is outside the hull.
    """
    points = tuple(tuple(p) for p in points)
    if not points:
        return None
    cert = _zero_in_hull(points)
    if cert is not None and not cert.verify(points):
        raise InvariantError("hull certificate does not re-verify")
    return cert


# ---------------------------------------------------------------- exact simplex

def _pivot(T: List[list], basis: List[int], r: int, col: int) -> None:
    lead = T[r][col]
    T[r] = [x / lead if x != 0 else x for x in T[r]]
    for i in range(len(T)):
        if i != r and T[i][col] != 0:
            f = T[i][col]
            T[i] = [x - f * y if y != 0 else x for x, y in zip(T[i], T[r])]
    basis[r] = col


def _optimize(T: List[list], basis: List[int], cost: Sequence, allowed: Sequence[int]) -> None:
    while True:
        entering = None
        for j in allowed:
            reduced = cost[j] - sum((cost[basis[r]] * T[r][j] for r in range(len(T))), ZERO)
            if qsign(reduced) > 0:
                entering = j
                break
        if entering is None:
            return
        leaving, best = None, None
        for r in range(len(T)):
            if qsign(T[r][entering]) > 0:
                ratio = T[r][-1] / T[r][entering]
                if leaving is None or qsign(ratio - best) < 0 or (
                        ratio == best and basis[r] < basis[leaving]):
                    leaving, best = r, ratio
        if leaving is None:
            raise InvariantError("unbounded linear program")
        _pivot(T, basis, leaving, entering)


def maximize(A: Sequence[Sequence], b: Sequence, c: Sequence):
    """
    Exact optimum of max c.x subject to A x = b, x >= 0.

    Parameters:
    A, b, c: exact scalars; the program must be bounded when feasible.

    Returns:
    The optimal value, or None when the program is infeasible.
    """
    n = len(c)
    m = len(A)
    rows = []
    rhs = []
    for row, value in zip(A, b):
        if qsign(value) < 0:
            rows.append([-x for x in row])
            rhs.append(-value)
        else:
            rows.append(list(row))
            rhs.append(value)
    # phase one: one artificial variable per row
    T = [rows[i] + [ONE if j == i else ZERO for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    phase_one = [ZERO] * n + [-ONE] * m
    _optimize(T, basis, phase_one, range(n + m))
    if any(qsign(T[r][-1]) > 0 for r in range(m) if basis[r] >= n):
        return None
    # drive the artificials that stayed basic at zero out of the basis
    for r in range(m):
        if basis[r] >= n:
            col = next((j for j in range(n) if T[r][j] != 0), None)
            if col is not None:
                _pivot(T, basis, r, col)
    # phase two on the real cost, artificials frozen
    cost = list(c) + [ZERO] * m
    _optimize(T, basis, cost, range(n))
    return sum((cost[basis[r]] * T[r][-1] for r in range(m)), ZERO)


def interiors_intersect(A: Sequence[Sequence], B: Sequence[Sequence]) -> bool:
    """
    True iff the interiors of conv(A) and conv(B) meet.

    Both hulls must be full-dimensional, and there must be a common point whose
    barycentric weights in A and in B are all at least some t > 0; t is
    maximized exactly.
    """
    if not A or not B:
        raise PreconditionError("interiors_intersect needs two nonempty point lists")
    dim = len(A[0])
    if affine_rank(A) < dim or affine_rank(B) < dim:
        return False
    p, q = len(A), len(B)
    # variables: t, alpha'_1..alpha'_p, beta'_1..beta'_q with alpha = t + alpha'
    rows = []
    for k in range(dim):
        shift = sum((a[k] for a in A), ZERO) - sum((b[k] for b in B), ZERO)
        rows.append([shift] + [a[k] for a in A] + [-b[k] for b in B])
    rows.append([ONE * p] + [ONE] * p + [ZERO] * q)
    rows.append([ONE * q] + [ZERO] * p + [ONE] * q)
    rhs = [ZERO] * dim + [ONE, ONE]
    objective = [ONE] + [ZERO] * (p + q)
    best = maximize(rows, rhs, objective)
    LOGGER.debug("interior slack %s", best)
    return best is not None and qsign(best) > 0


def full_dimensional(points: Sequence[Sequence]) -> bool:
    return bool(points) and affine_rank(points) == len(points[0])


# ---------------------------------------------------------------- walls

@dataclass(frozen=True)
class WallSides:
    """
    Split of the points off a wall hyperplane.

    ``left`` is the side where normal.x exceeds the wall offset; the normal is
    the reduced-echelon kernel vector, so its leading coordinate is positive.
    """

    left: Tuple[int, ...]
    right: Tuple[int, ...]
    extras: Tuple[int, ...]
    normal: tuple
    offset: object

    def counts(self) -> Tuple[int, int, int]:
        return len(self.left), len(self.right), len(self.extras)


def hyperplane_through(points: Sequence[Sequence]):
    ''' Normal and offset of the hyperplane spanned by D affinely independent points in R^D '''
    dim = len(points[0])
    base = points[0]
    diffs = [[x - y for x, y in zip(p, base)] for p in points[1:]]
    ker = kernel_over_field(Mat.from_rows(diffs, dim))
    if len(points) != dim or ker.rows != 1:
        raise PreconditionError("degenerate wall")
    normal = ker.row(0)
    return normal, dot(normal, base)


def wall_side_counts(points: Sequence[Sequence], wall: Sequence[int]) -> WallSides:
    """
    Counts the points strictly on each side of the hyperplane through ``wall``.

    Parameters:
    points: all configuration points in R^{2m}.
    wall: 2m indices into points.

    Returns:
    WallSides; left + right + extras = len(points) - len(wall).
    """
    wall = tuple(wall)
    normal, offset = hyperplane_through([points[w] for w in wall])
    left, right, extras = [], [], []
    # sign of normal.p - offset sorts every other point
    for idx, p in enumerate(points):
        if idx in wall:
            continue
        side = qsign(dot(normal, p) - offset)
        (left if side > 0 else right if side < 0 else extras).append(idx)
    return WallSides(tuple(left), tuple(right), tuple(extras), tuple(normal), offset)


# ---------------------------------------------------------------- planar helpers

def orientation(a: Sequence, b: Sequence, c: Sequence) -> int:
    ''' Sign of det(b - a, c - a): +1 counterclockwise, -1 clockwise, 0 collinear '''
    return qsign((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def planar_hull(points: Sequence[Sequence]) -> List[int]:
    """
    Indices of the vertices of the convex hull of planar points, counterclockwise.

    Monotone-chain scan with exact orientation tests; repeated points keep
    their smallest index.
    """
    # lexicographic order, duplicates collapsed to their first index
    order = sorted(range(len(points)), key=lambda i: (tuple(points[i]), i))
    unique = []
    for i in order:
        if not unique or tuple(points[unique[-1]]) != tuple(points[i]):
            unique.append(i)
    if len(unique) < 3:
        return unique

    def chain(indices):
        out = []
        for i in indices:
            while len(out) > 1 and orientation(points[out[-2]], points[out[-1]], points[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    # lower chain then upper chain, each without its last point
    lower = chain(unique)
    upper = chain(reversed(unique))
    return lower[:-1] + upper[:-1]


if __name__ == "__main__":
    triangle = [(1, 0), (0, 1), (-1, -1)]
    print("0 in hull:", zero_in_hull(triangle))
    print("hull:", planar_hull(triangle + [(0, 0)]))
    print("interiors meet:", interiors_intersect(triangle, [(2, 0), (-2, 2), (-2, -2)]))
