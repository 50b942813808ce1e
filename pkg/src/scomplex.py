"""
Simplicial complexes, integral reduced homology through Smith normal form, and the
homology of moment-angle manifolds as a sum over full subcomplexes of the dual
complex.
"""
from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from errors import InvariantError, PreconditionError, SchemaError
from exact import smith_normal_form

LOGGER = logging.getLogger(__name__)

MAX_GROUND = 16


def _normalize_torsion(orders: Iterable[int]) -> Tuple[int, ...]:
    ''' Invariant factors of a direct sum of cyclic groups of the given orders '''
    # drop the trivial summands
    orders = [o for o in orders if o > 1]
    if not orders:
        return ()
    diagonal = [[o if i == j else 0 for j in range(len(orders))] for i, o in enumerate(orders)]
    factors, _ = smith_normal_form(diagonal)
    return tuple(f for f in factors if f > 1)


@dataclass(frozen=True)
class GradedHomology:
    """
    A graded abelian group: degree -> (free rank, invariant factors of the torsion).

    Zero groups are never stored, so two equal groups compare equal.
    """

    groups: Tuple[Tuple[int, int, Tuple[int, ...]], ...] = ()

    @classmethod
    def from_dict(cls, data: Mapping[int, object]) -> "GradedHomology":
        ''' Accepts {degree: rank} or {degree: (rank, torsion)} '''
        groups = []
        for degree in sorted(data):
            value = data[degree]
            if isinstance(value, int):
                rank, torsion = value, ()
            else:
                rank, torsion = value
            torsion = _normalize_torsion(torsion)
            if rank < 0:
                raise InvariantError(f"negative rank in degree {degree}")
            if rank or torsion:
                groups.append((int(degree), int(rank), torsion))
        return cls(tuple(groups))

    def as_dict(self) -> Dict[int, Tuple[int, Tuple[int, ...]]]:
        return {deg: (rank, torsion) for deg, rank, torsion in self.groups}

    def ranks(self) -> Dict[int, int]:
        return {deg: rank for deg, rank, _ in self.groups if rank}

    def rank(self, degree: int) -> int:
        return self.as_dict().get(degree, (0, ()))[0]

    def torsion(self, degree: int) -> Tuple[int, ...]:
        return self.as_dict().get(degree, (0, ()))[1]

    def degrees(self) -> List[int]:
        return [deg for deg, _, _ in self.groups]

    def __add__(self, other: "GradedHomology") -> "GradedHomology":
        ''' Direct sum '''
        merged: Dict[int, Tuple[int, list]] = {}
        for deg, rank, torsion in self.groups + other.groups:
            r, t = merged.get(deg, (0, []))
            merged[deg] = (r + rank, t + list(torsion))
        return GradedHomology.from_dict(merged)

    def shift(self, amount: int) -> "GradedHomology":
        return GradedHomology(tuple((deg + amount, rank, torsion) for deg, rank, torsion in self.groups))

    def times_torus(self, k: int) -> "GradedHomology":
        """Kuenneth with (S^1)^k: degree j of the torus has rank C(k, j)."""
        merged: Dict[int, Tuple[int, list]] = {}
        for deg, rank, torsion in self.groups:
            for j in range(k + 1):
                copies = comb(k, j)
                r, t = merged.get(deg + j, (0, []))
                merged[deg + j] = (r + copies * rank, t + list(torsion) * copies)
        return GradedHomology.from_dict(merged)

    def without_degree(self, degree: int) -> "GradedHomology":
        return GradedHomology(tuple(g for g in self.groups if g[0] != degree))

    def to_json(self) -> dict:
        return {str(deg): {"rank": rank, "torsion": list(torsion)} for deg, rank, torsion in self.groups}

    @classmethod
    def from_json(cls, data: Mapping) -> "GradedHomology":
        try:
            return cls.from_dict({int(deg): (int(v["rank"]), [int(t) for t in v.get("torsion", [])])
                                  for deg, v in data.items()})
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad homology document: {exc}") from exc

    def __str__(self):
        parts = []
        for deg, rank, torsion in self.groups:
            pieces = ([f"Z^{rank}" if rank > 1 else "Z"] if rank else []) + [f"Z/{t}" for t in torsion]
            parts.append(f"{deg}: " + " + ".join(pieces))
        return "{" + ", ".join(parts) + "}"


def euler_characteristic(h: GradedHomology) -> int:
    return sum((-1) ** deg * rank for deg, rank, _ in h.groups if deg >= 0)


# ---------------------------------------------------------------- complexes

@dataclass(frozen=True)
class SimplicialComplex:
    """
    A finite simplicial complex given by its vertex set and maximal simplices.

    Every vertex is a 0-simplex. The complex with no vertex is the empty
    complex {emptyset}, whose reduced homology is Z in degree -1.
    """

    vertices: Tuple[int, ...]
    facets: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_simplices(cls, vertices: Iterable[int], simplices: Iterable[Iterable[int]]) -> "SimplicialComplex":
        vertices = tuple(sorted(set(vertices)))
        known = set(vertices)
        cells = {tuple(sorted(s)) for s in simplices if s}
        for s in cells:
            if not set(s) <= known:
                raise PreconditionError(f"simplex {s} uses vertices outside the vertex set")
        cells.update((v,) for v in vertices)
        # keep the maximal ones
        ordered = sorted(cells, key=lambda s: (-len(s), s))
        facets = []
        for s in ordered:
            if not any(set(s) <= set(f) for f in facets):
                facets.append(s)
        return cls(vertices, tuple(sorted(facets)))

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def simplices(self, dim: int) -> List[Tuple[int, ...]]:
        ''' Sorted list of all simplices with dim+1 vertices (dim = -1 gives the empty simplex) '''
        if dim < -1:
            return []
        if dim == -1:
            return [()]
        out = set()
        for f in self.facets:
            if len(f) > dim:
                out.update(itertools.combinations(f, dim + 1))
        return sorted(out)

    def is_cone(self) -> bool:
        ''' True when some vertex lies in every facet '''
        if not self.vertices:
            return False
        common = set(self.facets[0])
        for f in self.facets[1:]:
            common &= set(f)
        return bool(common)

    def components(self) -> int:
        ''' Number of connected components, by breadth-first search over the 1-skeleton '''
        # 1-skeleton as adjacency sets
        adjacency = {v: set() for v in self.vertices}
        for u, v in self.simplices(1):
            adjacency[u].add(v)
            adjacency[v].add(u)
        seen = set()
        count = 0
        for start in self.vertices:
            if start in seen:
                continue
            count += 1
            queue = [start]
            seen.add(start)
            while queue:
                current = queue.pop(0)
                for nxt in sorted(adjacency[current]):
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
        return count


def full_subcomplex(K: SimplicialComplex, subset: Iterable[int]) -> SimplicialComplex:
    """All simplices of K whose vertices lie in ``subset``."""
    subset = set(subset)
    if not subset <= set(K.vertices):
        raise PreconditionError("subset is not contained in the vertex set")
    pieces = [tuple(v for v in f if v in subset) for f in K.facets]
    return SimplicialComplex.from_simplices(subset, pieces)


def boundary_matrix(K: SimplicialComplex, dim: int) -> List[List[int]]:
    """
    Matrix of the boundary C_dim -> C_{dim-1}, rows indexed by (dim-1)-simplices.

    For dim = 0 this is the augmentation onto the empty simplex.
    """
    rows = K.simplices(dim - 1)
    cols = K.simplices(dim)
    index = {s: i for i, s in enumerate(rows)}
    matrix = [[0] * len(cols) for _ in rows]
    for j, s in enumerate(cols):
        # alternating signs over the deleted vertex
        for pos in range(len(s)):
            face = s[:pos] + s[pos + 1:]
            matrix[index[face]][j] = -1 if pos % 2 else 1
    return matrix


def _compose_is_zero(A: List[List[int]], B: List[List[int]]) -> bool:
    if not A or not B or not B[0]:
        return True
    for row in A:
        for j in range(len(B[0])):
            if sum(row[t] * B[t][j] for t in range(len(B)) if row[t]):
                return False
    return True


def reduced_homology(K: SimplicialComplex) -> GradedHomology:
    """
    Reduced integral homology, degree -1 included.

    Parameters:
    K (SimplicialComplex): the complex; the empty complex has H_{-1} = Z.

    Returns:
    GradedHomology with ranks and invariant factors per degree.
    """
    top = K.dimension
    boundaries = {q: boundary_matrix(K, q) for q in range(0, top + 1)}
    for q in range(1, top + 1):
        if not _compose_is_zero(boundaries[q - 1], boundaries[q]):
            raise InvariantError(f"boundary of boundary is not zero in degree {q}")
    snf = {q: smith_normal_form(boundaries[q]) for q in boundaries}
    # rank H_q = chains - rank d_q - rank d_{q+1}, torsion from the factors of d_{q+1}
    groups = {}
    for q in range(-1, top + 1):
        chains = len(K.simplices(q))
        rank_out = snf[q][1] if q in snf else 0
        factors_in, rank_in = snf.get(q + 1, ((), 0))
        groups[q] = (chains - rank_out - rank_in, [f for f in factors_in if f > 1])
    return GradedHomology.from_dict(groups)


# ---------------------------------------------------------------- moment-angle manifolds

@dataclass(frozen=True)
class MomentAngleHomology:
    h0: GradedHomology
    h1: GradedHomology
    dim0: int
    dim1: int

    def to_json(self) -> dict:
        return {"h0": self.h0.to_json(), "h1": self.h1.to_json(), "dim0": self.dim0, "dim1": self.dim1}


def dual_complex_of(lattice) -> SimplicialComplex:
    ''' The complex on the facet labels whose simplices are the faces of the lattice '''
    return SimplicialComplex.from_simplices(lattice.ground, lattice.faces)


def _census(K: SimplicialComplex, shift_of, threads: int) -> GradedHomology:
    ground = K.vertices
    if len(ground) > MAX_GROUND:
        raise PreconditionError(f"census over {len(ground)} facets exceeds the cap of {MAX_GROUND}")
    # every full subcomplex, the empty one included
    subsets = [s for size in range(len(ground) + 1) for s in itertools.combinations(ground, size)]

    def term(subset):
        sub = full_subcomplex(K, subset)
        # cones are contractible
        if sub.is_cone():
            return GradedHomology()
        return reduced_homology(sub).shift(shift_of(len(subset)))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            terms = list(pool.map(term, subsets))
    else:
        terms = [term(s) for s in subsets]
    # merge in subset order
    total = GradedHomology()
    for t in terms:
        total = total + t
    LOGGER.info("census over %d subsets of %d facets", len(subsets), len(ground))
    return total


def moment_angle_homology(lattice, k: int = 0, threads: int = 1) -> MomentAngleHomology:
    """
    Integral homology of the moment-angle manifold of a simple polytope.

    H_i(M0) is the sum over vertex subsets I of the dual complex of
    H~_{i-|I|-1}(K*_I); M1 = M0 x (S^1)^k.

    Parameters:
    lattice: a FaceLattice (anything with ``ground``, ``faces`` and ``dim``).
    k (int): number of indispensable points, i.e. circle factors.
    threads (int): worker threads for the subset census.

    Returns:
    MomentAngleHomology with both groups and the dimensions of M0 and M1.
    """
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    K = dual_complex_of(lattice)
    h0 = _census(K, lambda size: size + 1, threads)
    dim0 = len(lattice.ground) + lattice.dim
    return MomentAngleHomology(h0, h0.times_torus(k), dim0, dim0 + k)


def real_moment_angle_homology(lattice, k: int = 0, threads: int = 1) -> GradedHomology:
    """
    Homology of the real moment-angle manifold: the sum of H~_{i-1}(K*_I) over I,
    times 2^k copies for the k indispensable sign choices.
    """
    K = dual_complex_of(lattice)
    h = _census(K, lambda size: 1, threads)
    return GradedHomology.from_dict({deg: (rank * 2 ** k, list(torsion) * 2 ** k)
                                     for deg, rank, torsion in h.groups})


# ---------------------------------------------------------------- checks

@dataclass(frozen=True)
class SanityReport:
    failures: Tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"passed": self.passed, "failures": list(self.failures)}


def sanity_report(h: GradedHomology, dim: int, d: Optional[int] = None,
                  two_connected: bool = False) -> SanityReport:
    """
    Consistency checks for the homology of a closed orientable manifold.

    Parameters:
    h (GradedHomology): the homology.
    dim (int): the manifold dimension.
    d (int, optional): when given, H_i must vanish for 1 <= i <= 2d-2.
    two_connected (bool): also require H_1 = H_2 = 0.

    Returns:
    SanityReport listing every failed check (empty when all pass).
    """
    if dim < 0:
        raise PreconditionError("dimension must be nonnegative")
    failures = []
    # Poincare duality on ranks
    for i in range(dim + 1):
        if h.rank(i) != h.rank(dim - i):
            failures.append(f"rank H_{i} = {h.rank(i)} but rank H_{dim - i} = {h.rank(dim - i)}")
    # torsion pairs with one degree lower
    for i in range(dim):
        if h.torsion(i) != h.torsion(dim - i - 1):
            failures.append(f"torsion of H_{i} does not match torsion of H_{dim - i - 1}")
    if dim % 2 == 1 and euler_characteristic(h) != 0:
        failures.append(f"Euler characteristic {euler_characteristic(h)} of an odd-dimensional manifold")
    if two_connected:
        for i in (1, 2):
            if h.rank(i) or h.torsion(i):
                failures.append(f"H_{i} is not zero")
    if d is not None:
        for i in range(1, 2 * d - 1):
            if h.rank(i) or h.torsion(i):
                failures.append(f"H_{i} is not zero below degree {2 * d - 1}")
    return SanityReport(tuple(failures))


if __name__ == "__main__":
    pentagon = SimplicialComplex.from_simplices(range(5), [(i, (i + 1) % 5) for i in range(5)])
    print("reduced homology of a circle:", reduced_homology(pentagon))
    print("full subcomplex on 0, 2:", full_subcomplex(pentagon, (0, 2)))
