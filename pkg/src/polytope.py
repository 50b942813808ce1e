"""
The polytope of a configuration: face lattices, Gale presentation and inversion,
H-polytopes and their quadric systems, and combinatorial equivalence.

Faces are indexed by the set J of facets containing them (the coordinates that
vanish on the face), so the empty set is the whole polytope and the maximal
sets are the vertices.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from config import (Configuration, linear_normal_form, require_admissible, system_matrix, validate)
from convex import maximize, zero_in_hull
from errors import InvariantError, PreconditionError, SchemaError
from exact import (ONE, ZERO, CScalar, Mat, dot, kernel_over_field, primitive_integer_vector, qsign,
                   rank, rat_to_str, scalar_to_json, solve, to_rat)
from scomplex import SimplicialComplex, dual_complex_of

LOGGER = logging.getLogger(__name__)

Face = Tuple[int, ...]


@dataclass(frozen=True)
class FaceLattice:
    """
    Combinatorics of a simple polytope.

    ground: the facet labels.
    faces: every J that is the facet set of a face, the empty set included.
    dim: the polytope dimension; every maximal J has exactly dim elements.
    """

    ground: Tuple[int, ...]
    faces: FrozenSet[Face]
    dim: int

    def __post_init__(self):
        faces = frozenset(tuple(sorted(J)) for J in self.faces)
        object.__setattr__(self, "faces", faces)
        object.__setattr__(self, "ground", tuple(sorted(self.ground)))
        if () not in faces:
            raise PreconditionError("a face lattice must contain the empty face")
        for J in faces:
            if len(J) > self.dim:
                raise PreconditionError(f"face {J} has more than dim = {self.dim} facets")
            if not set(J) <= set(self.ground):
                raise PreconditionError(f"face {J} uses labels outside the ground set")
            for size in range(len(J)):
                if any(sub not in faces for sub in itertools.combinations(J, size)):
                    raise PreconditionError(f"face family is not downward closed at {J}")
        for J in self.maximal_faces():
            if len(J) != self.dim:
                raise PreconditionError(f"non-simple incidence: maximal face {J} has {len(J)} facets")
        if any((v,) not in faces for v in self.ground) and self.dim > 0:
            raise PreconditionError("every ground label must be a facet")

    def maximal_faces(self) -> List[Face]:
        return sorted(J for J in self.faces
                      if not any(len(K) > len(J) and set(J) <= set(K) for K in self.faces))

    def vertices(self) -> List[Face]:
        return sorted(J for J in self.faces if len(J) == self.dim)

    def facets(self) -> Tuple[int, ...]:
        return self.ground

    def f_vector(self) -> Tuple[int, ...]:
        ''' (f_0, ..., f_{dim-1}): f_j counts the faces of dimension j '''
        return tuple(sum(1 for J in self.faces if len(J) == self.dim - j) for j in range(self.dim))

    def degree(self, label: int) -> int:
        ''' Number of vertices on the facet ``label`` '''
        return sum(1 for J in self.vertices() if label in J)

    def to_json(self) -> dict:
        return {"ground": [v + 1 for v in self.ground],
                "faces": [[v + 1 for v in J] for J in sorted(self.faces, key=lambda J: (len(J), J))],
                "dim": self.dim,
                "f_vector": list(self.f_vector())}


def lattice_from_json(data: dict) -> FaceLattice:
    try:
        return FaceLattice(tuple(v - 1 for v in data["ground"]),
                           frozenset(tuple(v - 1 for v in J) for J in data["faces"]), int(data["dim"]))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad face lattice document: {exc}") from exc


def face_lattice(c: Configuration) -> FaceLattice:
    """
    Face lattice of the polytope of an admissible configuration.

    J is a face exactly when the origin lies in the convex hull of the points
    outside J; candidates are grown size by size from faces already found.

    Parameters:
    c (Configuration): an admissible configuration.

    Returns:
    FaceLattice on the non-indispensable indices, of dimension n - 2m - 1.
    """
    report = require_admissible(c)
    dim = c.n - 2 * c.m - 1
    ground = tuple(i for i in range(c.n) if i not in report.indispensable)
    points = c.real_points()
    faces = {()}
    layer = [()]
    # grow faces one facet label at a time
    for size in range(1, dim + 1):
        candidates = sorted({tuple(sorted(J + (v,))) for J in layer for v in ground if v not in J})
        layer = []
        for J in candidates:
            # every smaller face has to be there already
            if any(sub not in faces for sub in itertools.combinations(J, size - 1)):
                continue
            # J is a face when the points off J still surround the origin
            rest = [points[i] for i in range(c.n) if i not in J]
            if zero_in_hull(rest) is not None:
                layer.append(J)
        faces.update(layer)
    LOGGER.info("face lattice: %d facets, %d faces, dim %d", len(ground), len(faces), dim)
    lattice = FaceLattice(ground, frozenset(faces), dim)
    if len(lattice.ground) != c.n - report.k:
        raise InvariantError("facet count differs from n - k")
    return lattice


def polygon_lattice(p: int) -> FaceLattice:
    if p < 3:
        raise PreconditionError("a polygon needs at least 3 sides")
    # single facets, plus a vertex where consecutive facets meet
    faces = {()} | {(i,) for i in range(p)} | {tuple(sorted((i, (i + 1) % p))) for i in range(p)}
    return FaceLattice(tuple(range(p)), frozenset(faces), 2)


def simplex_lattice(q: int) -> FaceLattice:
    ''' The q-simplex: q + 1 facets, any q of them meet in a vertex '''
    if q < 1:
        raise PreconditionError("simplex dimension must be at least 1")
    faces = {J for size in range(q + 1) for J in itertools.combinations(range(q + 1), size)}
    return FaceLattice(tuple(range(q + 1)), frozenset(faces), q)


def cube_lattice(q: int) -> FaceLattice:
    ''' The q-cube; facets i and i + q are opposite '''
    if q < 1:
        raise PreconditionError("cube dimension must be at least 1")
    faces = set()
    for size in range(q + 1):
        for J in itertools.combinations(range(2 * q), size):
            if not any(i in J and i + q in J for i in range(q)):
                faces.add(J)
    return FaceLattice(tuple(range(2 * q)), frozenset(faces), q)


def product_lattice(L1: FaceLattice, L2: FaceLattice) -> FaceLattice:
    """Product polytope; facets of L2 are relabeled after those of L1."""
    first = {v: i for i, v in enumerate(L1.ground)}
    second = {v: len(first) + i for i, v in enumerate(L2.ground)}
    faces = {tuple(sorted([first[v] for v in J1] + [second[v] for v in J2]))
             for J1 in L1.faces for J2 in L2.faces}
    return FaceLattice(tuple(range(len(first) + len(second))), frozenset(faces), L1.dim + L2.dim)


def abstract_lattice(vertex_facets: Iterable[Iterable[int]]) -> FaceLattice:
    """
    Face lattice from a vertex-facet incidence.

    Parameters:
    vertex_facets: for each vertex, the labels of the facets through it.

    Returns:
    The downward closure of the vertex sets. Raises PreconditionError when the
    vertices do not all lie on the same number of facets.
    """
    vertex_sets = [tuple(sorted(set(v))) for v in vertex_facets]
    if not vertex_sets:
        raise PreconditionError("incidence with no vertex")
    sizes = {len(v) for v in vertex_sets}
    if len(sizes) != 1:
        raise PreconditionError("non-simple incidence: vertices lie on different numbers of facets")
    dim = sizes.pop()
    # downward closure of the vertex sets
    faces = {sub for v in vertex_sets for size in range(dim + 1) for sub in itertools.combinations(v, size)}
    ground = sorted({x for v in vertex_sets for x in v})
    return FaceLattice(tuple(ground), frozenset(faces), dim)


def dual_complex(L: FaceLattice) -> SimplicialComplex:
    return dual_complex_of(L)


# ---------------------------------------------------------------- combinatorial equivalence

def combinatorially_equal(L1: FaceLattice, L2: FaceLattice) -> Optional[Dict[int, int]]:
    """
    Searches for a relabeling of the facets of L1 onto those of L2 that carries
    faces to faces.

    Labels are assigned one at a time; a branch is cut as soon as a face whose
    labels are all assigned maps outside L2, and candidates must have the same
    number of vertices on them.

    Returns:
    The relabeling as a dict, or None when the lattices differ.
    """
    # cheap invariants first
    if (L1.dim != L2.dim or len(L1.ground) != len(L2.ground) or len(L1.faces) != len(L2.faces)
            or L1.f_vector() != L2.f_vector()):
        return None
    degree1 = {v: L1.degree(v) for v in L1.ground}
    degree2 = {v: L2.degree(v) for v in L2.ground}
    if sorted(degree1.values()) != sorted(degree2.values()):
        return None
    # most constrained labels first
    order = sorted(L1.ground, key=lambda v: (-degree1[v], v))
    # faces of L1 indexed by the position of their last assigned label
    position = {v: i for i, v in enumerate(order)}
    checks: Dict[int, List[Face]] = {}
    for J in L1.faces:
        if J:
            checks.setdefault(max(position[v] for v in J), []).append(J)

    def search(level: int, mapping: Dict[int, int], used: set) -> Optional[Dict[int, int]]:
        if level == len(order):
            return dict(mapping)
        label = order[level]
        for target in L2.ground:
            if target in used or degree2[target] != degree1[label]:
                continue
            mapping[label] = target
            if all(tuple(sorted(mapping[v] for v in J)) in L2.faces for J in checks.get(level, [])):
                used.add(target)
                found = search(level + 1, mapping, used)
                if found is not None:
                    return found
                used.discard(target)
            del mapping[label]
        return None

    return search(0, {}, set())


# ---------------------------------------------------------------- Gale duality

@dataclass(frozen=True)
class GalePresentation:
    """Rows of V solve the exponent system; epsilon is a point of the polytope."""

    V: Mat
    epsilon: tuple

    def to_json(self) -> dict:
        return {"V": [[scalar_to_json(x) for x in self.V.row(i)] for i in range(self.V.rows)],
                "epsilon": [scalar_to_json(x) for x in self.epsilon]}


def _vertex_point(c: Configuration, J: Face) -> list:
    system = system_matrix(c).to_rows()
    rows = system + [[ONE if j == i else ZERO for j in range(c.n)] for i in J]
    # x_i = 0 on J, sum of x = 1
    rhs = [ZERO] * (len(system) - 1) + [ONE] + [ZERO] * len(J)
    if rank(rows) != c.n:
        raise InvariantError(f"vertex {J} is not cut out by its facets")
    point = solve(rows, rhs, c.n)
    if point is None:
        raise InvariantError(f"vertex {J} has no solution")
    return point


def vertices(c: Configuration) -> Dict[Face, tuple]:
    """
    The vertices of the polytope as points of the first orthant of R^n.

    The vertex with facet set J is the unique solution of the exponent system
    with sum 1 that vanishes on J.
    """
    L = face_lattice(c)
    return {J: tuple(_vertex_point(c, J)) for J in L.vertices()}


def gale_presentation(c: Configuration) -> GalePresentation:
    """
    Basis of real solutions of the exponent system together with the barycenter
    of the vertices.
    """
    require_admissible(c)
    V = kernel_over_field(system_matrix(c))
    points = list(vertices(c).values())
    count = len(points)
    epsilon = tuple(sum((p[i] for p in points), ZERO) / count for i in range(c.n))
    return GalePresentation(V, epsilon)


def verify_gale(c: Configuration, V: Sequence[Sequence], epsilon: Sequence) -> bool:
    """
    True when the rows of V are a basis of the real solutions of the exponent
    system of c and epsilon is a point of its polytope.
    """
    S = system_matrix(c)
    rows = [list(r) for r in V]
    if any(len(r) != c.n for r in rows) or len(epsilon) != c.n:
        raise SchemaError("V and epsilon must have n columns")
    solutions = kernel_over_field(S)
    if len(rows) != solutions.rows or (rows and rank(rows) != len(rows)):
        return False
    if any(any(x != 0 for x in S.apply(r)) for r in rows):
        return False
    eps = [to_rat(x) if not hasattr(x, "a") else x for x in epsilon]
    # epsilon is a point of the polytope
    if any(qsign(x) < 0 for x in eps) or sum(eps, ZERO) != 1:
        return False
    return all(x == 0 for x in S.apply(eps)[:-1])


def gale_inverse(V: Sequence[Sequence], epsilon: Sequence, m: int, d: Optional[int] = None) -> Configuration:
    """
    Reconstructs a configuration from Gale data.

    Parameters:
    V: rows spanning the wanted solution space; each row sums to 0.
    epsilon: a point with positive entries summing to 1.
    m (int): complex dimension of the result.
    d (int, optional): quadratic extension of the entries.

    Returns:
    The admissible configuration whose solution space is the row space of V
    and whose polytope contains epsilon, in linear normal form.
    """
    rows = [list(r) for r in V]
    n = len(epsilon)
    if any(len(r) != n for r in rows):
        raise SchemaError("V and epsilon must have the same number of columns")
    if any(sum(r, ZERO) != 0 for r in rows):
        raise PreconditionError("rows of V must sum to zero")
    if rows and rank(rows) != len(rows):
        raise PreconditionError("V must have full row rank")
    if len(rows) != n - 2 * m - 1:
        raise PreconditionError(f"V needs n - 2m - 1 = {n - 2 * m - 1} rows")
    eps = [x if hasattr(x, "a") else to_rat(x) for x in epsilon]
    if any(qsign(x) <= 0 for x in eps) or sum(eps, ZERO) != 1:
        raise PreconditionError("epsilon must be positive with sum 1")
    # the real and imaginary parts span the complement of V and epsilon
    complement = kernel_over_field(Mat.from_rows(rows + [eps], n))
    if complement.rows != 2 * m:
        raise InvariantError("orthogonal complement has the wrong dimension")
    real = [complement.row(r) for r in range(2 * m)]
    vectors = tuple(tuple(CScalar(real[2 * j][i], real[2 * j + 1][i]) for j in range(m)) for i in range(n))
    c = Configuration(m, vectors, d)
    if not validate(c).admissible:
        raise PreconditionError("not a polytopal Gale input")
    return linear_normal_form(c)


# ---------------------------------------------------------------- H-polytopes and quadrics

@dataclass(frozen=True)
class HPolytope:
    """{x in R^n : A x + b >= 0}, one row of A per facet."""

    A: Tuple[tuple, ...]
    b: tuple

    def __post_init__(self):
        A = tuple(tuple(to_rat(x) for x in row) for row in self.A)
        b = tuple(to_rat(x) for x in self.b)
        if not A or len(A) != len(b) or len({len(r) for r in A}) != 1:
            raise SchemaError("A must be a nonempty rectangular matrix with one b entry per row")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def ambient(self) -> int:
        return len(self.A[0])

    def is_bounded(self) -> bool:
        ''' True when some positive combination of the rows of A vanishes '''
        # gamma_i = 1 + s_i with s >= 0 and sum gamma_i a_i = 0
        rows = [[self.A[i][j] for i in range(len(self.A))] for j in range(self.ambient)]
        rhs = [-sum((self.A[i][j] for i in range(len(self.A))), ZERO) for j in range(self.ambient)]
        return maximize(rows, rhs, [ZERO] * len(self.A)) is not None

    def vertices(self) -> Dict[Face, tuple]:
        ''' Vertices keyed by their tight inequalities '''
        n = self.ambient
        out = {}
        for S in itertools.combinations(range(len(self.A)), n):
            rows = [list(self.A[i]) for i in S]
            if rank(rows) != n:
                continue
            x = solve(rows, [-self.b[i] for i in S], n)
            # keep it only when it satisfies every inequality
            slack = [dot(self.A[i], x) + self.b[i] for i in range(len(self.A))]
            if any(s < 0 for s in slack):
                continue
            tight = tuple(i for i, s in enumerate(slack) if s == 0)
            if len(tight) != n:
                raise PreconditionError("hyperplanes are not in general position")
            out[tight] = tuple(x)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "HPolytope":
        try:
            return cls(tuple(tuple(r) for r in data["A"]), tuple(data["b"]))
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad polytope document: {exc}") from exc


def hpolytope_lattice(P: HPolytope) -> FaceLattice:
    return abstract_lattice(P.vertices().keys())


@dataclass(frozen=True)
class QuadricSystem:
    """sum_k Gamma[j][k] |z_k|^2 = rhs[j] for every row j."""

    Gamma: Tuple[Tuple[int, ...], ...]
    rhs: tuple

    def satisfied_by(self, squares: Sequence) -> bool:
        ''' Substitutes |z_k|^2 = squares[k] '''
        return all(dot(row, squares) == value for row, value in zip(self.Gamma, self.rhs))

    def to_json(self) -> dict:
        return {"Gamma": [list(r) for r in self.Gamma], "rhs": [rat_to_str(x) for x in self.rhs]}


def polytope_to_quadrics(P: HPolytope) -> QuadricSystem:
    """
    Quadric system whose zero set is the moment-angle manifold of P.

    Gamma is the integer-cleared echelon basis of the linear relations between
    the rows of A, so Gamma A = 0.
    """
    rows = [list(r) for r in P.A]
    if rank(rows) != P.ambient:
        raise PreconditionError("A must have full column rank")
    if not P.is_bounded():
        raise PreconditionError("the polytope is unbounded")
    # linear relations among the facet normals
    relations = kernel_over_field(Mat.from_rows(rows, P.ambient).transpose())
    gamma = tuple(primitive_integer_vector(relations.row(i)) for i in range(relations.rows))
    for g in gamma:
        if any(dot(g, [r[j] for r in rows]) != 0 for j in range(P.ambient)):
            raise InvariantError("Gamma A is not zero")
    rhs = tuple(dot(g, P.b) for g in gamma)
    LOGGER.debug("%d quadrics in %d variables", len(gamma), len(rows))
    return QuadricSystem(gamma, rhs)


if __name__ == "__main__":
    from exact import cs
    pentagon = Configuration.planar([cs(1), cs(0, 1), cs(-1, -1), cs(1, "3/2"), cs("-1/2", -1)])
    lattice = face_lattice(pentagon)
    print("f-vector:", lattice.f_vector())
    print("same as the abstract pentagon:", combinatorially_equal(lattice, polygon_lattice(5)) is not None)
    square = HPolytope(((1, 0), (-1, 0), (0, 1), (0, -1)), (0, 1, 0, 1))
    print("quadrics:", polytope_to_quadrics(square).to_json())
