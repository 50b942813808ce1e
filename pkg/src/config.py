"""
The configuration Lambda of n vectors in C^m, and everything computed directly from it:
admissibility, indispensable points, the family of minimal subsets around the
origin, Bosio's conditions, the linear system of exponents, condition (K),
the cyclic normal form for m = 1, the torus modulus and the lattice of the
Cousin group.

Indices are 0-based everywhere in the library; reports serialized to JSON are
1-based, as in the mathematical notation.
"""
from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import classify
from convex import full_dimensional, interiors_intersect, orientation, zero_in_hull
from errors import InvariantError, PreconditionError, SchemaError
from exact import (ONE, ZERO, CScalar, Mat, complex_from_json, complex_to_json, field_of,
                   inverse, join_fields, kernel_over_Q, quad, rank, rat_to_str, saturated_lattice)

LOGGER = logging.getLogger(__name__)


def _labels(indices: Iterable[int]) -> List[int]:
    return [i + 1 for i in indices]


@dataclass(frozen=True)
class Configuration:
    """
    n vectors Lambda_1..Lambda_n in C^m whose coordinates share one field Q(sqrt d)[i].

    ``lam[i][j]`` is the j-th complex coordinate of the i-th vector.
    """

    m: int
    lam: Tuple[Tuple[CScalar, ...], ...]
    d: Optional[int] = None

    def __post_init__(self):
        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 1:
            raise SchemaError(f"m must be a positive integer, got {self.m!r}")
        vectors = []
        for vector in self.lam:
            if isinstance(vector, (CScalar, int)) or not isinstance(vector, (tuple, list)):
                vector = (vector,)
            vector = tuple(x if isinstance(x, CScalar) else CScalar(quad(x)) for x in vector)
            if len(vector) != self.m:
                raise SchemaError(f"every vector needs {self.m} coordinates")
            vectors.append(vector)
        object.__setattr__(self, "lam", tuple(vectors))
        d = join_fields(self.d, field_of(x for v in vectors for x in v))
        object.__setattr__(self, "d", d)

    @classmethod
    def planar(cls, values: Sequence, d: Optional[int] = None) -> "Configuration":
        ''' An m = 1 configuration from a list of complex scalars '''
        return cls(1, tuple((v,) for v in values), d)

    @property
    def n(self) -> int:
        return len(self.lam)

    def real_points(self) -> Tuple[tuple, ...]:
        ''' Each vector as a point (Re z1, Im z1, ..., Re zm, Im zm) of R^{2m} '''
        return tuple(tuple(part for z in v for part in (z.re, z.im)) for v in self.lam)

    def restrict(self, keep: Iterable[int]) -> "Configuration":
        return Configuration(self.m, tuple(self.lam[i] for i in keep), self.d)

    def drop(self, removed: Iterable[int]) -> "Configuration":
        removed = set(removed)
        return self.restrict(i for i in range(self.n) if i not in removed)

    def permute(self, order: Sequence[int]) -> "Configuration":
        ''' The configuration whose i-th vector is the order[i]-th vector of this one '''
        if sorted(order) != list(range(self.n)):
            raise PreconditionError("not a permutation of the indices")
        return self.restrict(order)

    @classmethod
    def from_real_points(cls, m: int, points: Sequence[Sequence], d: Optional[int] = None):
        vectors = [tuple(CScalar(p[2 * j], p[2 * j + 1]) for j in range(m)) for p in points]
        return cls(m, tuple(vectors), d)


def config_from_json(data, d: Optional[int] = None) -> Configuration:
    """
    Parses {"m": int, "n": int, "d": int|null, "lambda": [[scalar x m] x n]}.

    Parameters:
    data (dict): the decoded JSON document.
    d (int, optional): quadratic extension forced from the command line.

    Returns:
    The Configuration. Raises SchemaError on malformed input.
    """
    if not isinstance(data, dict):
        raise SchemaError("a configuration must be a JSON object")
    unknown = set(data) - {"m", "n", "d", "lambda"}
    if unknown:
        raise SchemaError(f"unknown configuration fields: {sorted(unknown)}")
    if "m" not in data or "lambda" not in data:
        raise SchemaError("a configuration needs 'm' and 'lambda'")
    # the field named in the file and the one forced on the command line must agree
    field = join_fields(data.get("d"), d)
    m = data["m"]
    rows = data["lambda"]
    if not isinstance(rows, list):
        raise SchemaError("'lambda' must be a list of vectors")
    vectors = []
    for row in rows:
        if not isinstance(row, list) or len(row) != m:
            raise SchemaError(f"every vector in 'lambda' must be a list of {m} scalars")
        vectors.append(tuple(complex_from_json(x, field) for x in row))
    if "n" in data and data["n"] != len(vectors):
        raise SchemaError(f"'n' is {data['n']} but 'lambda' has {len(vectors)} vectors")
    return Configuration(m, tuple(vectors), field)


def config_to_json(c: Configuration) -> dict:
    return {"m": c.m, "n": c.n, "d": c.d,
            "lambda": [[complex_to_json(z) for z in v] for v in c.lam]}


# ---------------------------------------------------------------- admissibility

@dataclass(frozen=True)
class AdmissibilityReport:
    n: int
    m: int
    siegel: bool
    weak_hyperbolic: bool
    violations: Tuple[Tuple[int, ...], ...]
    indispensable: Tuple[int, ...]
    e_min: Tuple[Tuple[int, ...], ...]

    @property
    def admissible(self) -> bool:
        return self.siegel and self.weak_hyperbolic

    @property
    def k(self) -> int:
        return len(self.indispensable)

    @property
    def is_simplex(self) -> bool:
        return self.admissible and self.n == 2 * self.m + 1

    # the manifold is a compact complex torus, Kaehler or Moishezon exactly in the simplex case
    is_torus = is_kahler = is_moishezon = is_simplex

    def to_json(self) -> dict:
        return {
            "admissible": self.admissible,
            "siegel": self.siegel,
            "weak_hyperbolic": self.weak_hyperbolic,
            "violations": [_labels(v) for v in self.violations],
            "indispensable": _labels(self.indispensable),
            "k": self.k,
            "is_simplex": self.is_simplex,
            "is_torus": self.is_torus,
            "is_kahler": self.is_kahler,
            "is_moishezon": self.is_moishezon,
            "e_min": [_labels(e) for e in self.e_min],
            "n": self.n,
            "m": self.m,
        }


def _subsets_around_zero(points: Sequence[tuple], size: int, threads: int = 1) -> Tuple[tuple, ...]:
    subsets = list(itertools.combinations(range(len(points)), size))

    def contains_zero(subset):
        return zero_in_hull([points[i] for i in subset]) is not None

    if threads > 1 and len(subsets) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            flags = list(pool.map(contains_zero, subsets))
    else:
        flags = [contains_zero(s) for s in subsets]
    return tuple(s for s, flag in zip(subsets, flags) if flag)


@lru_cache(maxsize=512)
def _admissibility(c: Configuration, threads: int) -> AdmissibilityReport:
    points = c.real_points()
    # Siegel: the origin lies in the hull of all the points
    siegel = zero_in_hull(points) is not None
    # weak hyperbolicity: no 2m of them capture it
    violations = _subsets_around_zero(points, 2 * c.m, threads)
    indispensable = ()
    e_min = ()
    if siegel and not violations:
        # a point is indispensable when dropping it loses the origin
        indispensable = tuple(i for i in range(c.n)
                              if zero_in_hull(points[:i] + points[i + 1:]) is None)
        e_min = _subsets_around_zero(points, 2 * c.m + 1, threads)
    LOGGER.debug("validated n=%d m=%d: siegel=%s, %d violations, k=%d",
                 c.n, c.m, siegel, len(violations), len(indispensable))
    return AdmissibilityReport(c.n, c.m, siegel, not violations, violations, indispensable, e_min)


def validate(c: Configuration, threads: int = 1) -> AdmissibilityReport:
    """
    Checks the Siegel condition and weak hyperbolicity, and lists indispensable points.

    Parameters:
    c (Configuration): the configuration.
    threads (int): worker threads for the subset scans.

    Returns:
    AdmissibilityReport. ``e_min`` and ``indispensable`` are empty when the
    configuration is not admissible.
    """
    if c.n < 2 * c.m + 1:
        raise PreconditionError(f"too few vectors: n={c.n} but 2m+1={2 * c.m + 1}")
    return _admissibility(c, threads)


def require_admissible(c: Configuration) -> AdmissibilityReport:
    report = validate(c)
    if not report.admissible:
        raise PreconditionError("configuration is not admissible")
    return report


def is_removable(c: Configuration, indices: Iterable[int]) -> bool:
    """True iff the configuration without ``indices`` is still admissible."""
    removed = frozenset(indices)
    if not removed:
        raise PreconditionError("the index set to remove must be nonempty")
    if not removed <= set(range(c.n)):
        raise PreconditionError("index out of range")
    if len(removed) == c.n:
        raise PreconditionError("cannot remove every index")
    rest = c.drop(removed)
    # too few vectors left cannot be admissible
    if rest.n < 2 * rest.m + 1:
        return False
    return validate(rest).admissible


def e_family(c: Configuration) -> Tuple[Tuple[int, ...], ...]:
    ''' Every subset I (any size) whose points contain the origin in their hull '''
    points = c.real_points()
    out = []
    for size in range(1, c.n + 1):
        out.extend(_subsets_around_zero(points, size))
    return tuple(out)


def lvm_dimension(c: Configuration) -> int:
    ''' Complex dimension n - m - 1 of the quotient manifold '''
    return c.n - c.m - 1


# ---------------------------------------------------------------- arithmetic

@dataclass(frozen=True)
class ArithmeticReport:
    solution_basis: Mat
    rational_dim: int
    condition_k: bool
    algebraic_dimension: Optional[int]
    reason: Optional[str]
    monomials: Tuple[Tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {
            "solution_basis": [[rat_to_str(x) for x in self.solution_basis.row(i)]
                               for i in range(self.solution_basis.rows)],
            "rational_dim": self.rational_dim,
            "condition_k": self.condition_k,
            "algebraic_dimension": self.algebraic_dimension,
            "reason": self.reason,
            "monomials": [list(s) for s in self.monomials],
        }


def system_matrix(c: Configuration) -> Mat:
    """
    The real (2m+1) x n matrix of the system sum s_i Lambda_i = 0, sum s_i = 0.

    Rows are Re and Im of each complex coordinate, then the row of ones.
    """
    rows = []
    for j in range(c.m):
        rows.append([v[j].re for v in c.lam])
        rows.append([v[j].im for v in c.lam])
    rows.append([ONE] * c.n)
    return Mat.from_rows(rows, c.n)


def arithmetic_report(c: Configuration) -> ArithmeticReport:
    """
    Rational solutions of the exponent system, condition (K) and the algebraic dimension.

    Returns:
    ArithmeticReport. The algebraic dimension is only filled in when the
    configuration is admissible with no indispensable point; otherwise
    ``reason`` says why and the rational dimension is a lower bound. With fewer
    than 2m+1 vectors there is no admissibility to speak of and the report says
    so instead of raising. ``monomials`` is a Z-basis of every integer solution.
    """
    basis = kernel_over_Q(system_matrix(c))
    rational_dim = basis.rows
    condition_k = rational_dim == c.n - 2 * c.m - 1
    # too few vectors: no admissibility check to run
    if c.n < 2 * c.m + 1:
        algebraic, reason = None, f"too few vectors: n={c.n} but 2m+1={2 * c.m + 1}"
    else:
        report = validate(c)
        if not report.admissible:
            algebraic, reason = None, "configuration is not admissible"
        elif report.k > 0:
            algebraic = None
            reason = f"{report.k} indispensable points; rational_dim {rational_dim} is a lower bound"
        else:
            algebraic, reason = rational_dim, None
    monomials = saturated_lattice(basis.to_rows(), c.n)
    return ArithmeticReport(basis, rational_dim, condition_k, algebraic, reason, monomials)


# ---------------------------------------------------------------- m = 1 normal form

def cyclic_partition(c: Configuration) -> "classify.Partition":
    """
    The partition (n_1, ..., n_{2l+1}) of the cyclic normal form of a planar configuration.

    Two indices share a class when no minimal triangle around the origin uses
    both. Classes are then walked counterclockwise from the class of index 0:
    adjacent classes are those completed to a minimal triangle by exactly one
    third class, and the orientation of that triangle fixes the direction.
    """
    if c.m != 1:
        raise PreconditionError("the cyclic normal form needs m = 1")
    report = require_admissible(c)
    # pairs that sit together in some minimal triangle
    together = set()
    for triple in report.e_min:
        together.update(itertools.combinations(triple, 2))

    parent = list(range(c.n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    # the rest of the pairs are glued into one class
    for i, j in itertools.combinations(range(c.n), 2):
        if (i, j) not in together:
            parent[find(j)] = find(i)
    groups = {}
    for i in range(c.n):
        groups.setdefault(find(i), []).append(i)
    classes = sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])
    for cls in classes:
        if any(pair in together for pair in itertools.combinations(cls, 2)):
            raise InvariantError("class relation is not consistent with the minimal triangles")
    if len(classes) % 2 == 0:
        raise InvariantError(f"even number of classes ({len(classes)}) for an admissible configuration")

    # minimal triangles seen on the classes
    label = {i: idx for idx, cls in enumerate(classes) for i in cls}
    triangles = {frozenset(label[i] for i in t) for t in report.e_min}
    count = len(classes)

    def completions(a, b):
        return [x for x in range(count) if x not in (a, b) and frozenset((a, b, x)) in triangles]

    adjacent = {a: [b for b in range(count) if b != a and len(completions(a, b)) == 1]
                for a in range(count)}
    if any(len(nbrs) != 2 for nbrs in adjacent.values()):
        raise InvariantError("classes do not form a cycle")
    points = c.real_points()
    rep = [points[cls[0]] for cls in classes]
    # pick the neighbour that turns counterclockwise
    first = adjacent[0][0]
    third = completions(0, first)[0]
    successor = first if orientation(rep[0], rep[first], rep[third]) > 0 else adjacent[0][1]
    order = [0]
    prev, cur = 0, successor
    while cur != 0:
        order.append(cur)
        nxt = adjacent[cur][0] if adjacent[cur][0] != prev else adjacent[cur][1]
        prev, cur = cur, nxt
        if len(order) > count:
            raise InvariantError("cyclic walk does not close")
    if len(order) != count:
        raise InvariantError("cyclic walk misses classes")
    ordered = tuple(classes[i] for i in order)
    return classify.Partition(tuple(len(cls) for cls in ordered), classes=ordered)


def torus_modulus(c: Configuration) -> CScalar:
    ''' Modulus (lambda_3 - lambda_2)/(lambda_1 - lambda_2) of the elliptic curve for n = 3, m = 1 '''
    if c.m != 1 or c.n != 3:
        raise PreconditionError("torus modulus needs n = 3 and m = 1")
    require_admissible(c)
    l1, l2, l3 = (v[0] for v in c.lam)
    if l1 == l2:
        raise InvariantError("repeated point in an admissible triangle")
    return (l3 - l2) / (l1 - l2)


# ---------------------------------------------------------------- Cousin group lattice

@dataclass(frozen=True)
class GLattice:
    permutation: Tuple[int, ...]
    matrix: Tuple[Tuple[CScalar, ...], ...]

    @property
    def rows(self) -> int:
        return len(self.matrix)

    def to_json(self) -> dict:
        return {"permutation": _labels(self.permutation),
                "matrix": [[complex_to_json(z) for z in row] for row in self.matrix]}


def _complex_rank(rows: Sequence[Sequence]) -> int:
    return rank([list(r) for r in rows])


def g_lattice(c: Configuration) -> GLattice:
    """
    Lattice basis (Id, B A^{-1}) of the Cousin group quotient.

    The first m+1 vectors (after a permutation, reported) must satisfy the rank
    condition, i.e. A built from Lambda_{j} - Lambda_1 (j = 2..m+1) is invertible;
    B collects the remaining differences Lambda_j - Lambda_1, j = m+2..n.
    """
    m, n = c.m, c.n
    # first m+1 vectors in index order with an invertible A
    chosen = None
    for subset in itertools.combinations(range(n), m + 1):
        head = subset[0]
        A = [[c.lam[j][k] - c.lam[head][k] for k in range(m)] for j in subset[1:]]
        if _complex_rank(A) == m:
            chosen = subset
            break
    if chosen is None:
        raise PreconditionError("no choice of m+1 vectors satisfies the rank condition")
    rest = [i for i in range(n) if i not in chosen]
    head = chosen[0]
    A = [[c.lam[j][k] - c.lam[head][k] for k in range(m)] for j in chosen[1:]]
    B = [[c.lam[j][k] - c.lam[head][k] for k in range(m)] for j in rest]
    A_inv = inverse(A)
    # rows of B A^{-1}, each prefixed by a row of the identity
    extra = [[sum((row[t] * A_inv[t][k] for t in range(m)), ZERO) for k in range(m)] for row in B]
    size = len(rest)
    matrix = []
    for r in range(size):
        identity = [CScalar(ONE if r == s else ZERO) for s in range(size)]
        matrix.append(tuple(identity + [z if isinstance(z, CScalar) else CScalar(z) for z in extra[r]]))
    return GLattice(tuple(chosen) + tuple(rest), tuple(matrix))


# ---------------------------------------------------------------- Bosio

@dataclass(frozen=True)
class LVMBReport:
    affine_span: bool
    interiors: bool
    exchange: bool
    failures: Tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.affine_span and self.interiors and self.exchange

    def to_json(self) -> dict:
        return {"ok": self.ok, "affine_span": self.affine_span, "interiors": self.interiors,
                "exchange": self.exchange, "failures": list(self.failures)}


def lvmb_check(c: Configuration, family: Iterable[Iterable[int]],
               interior_mode: str = "intersect") -> LVMBReport:
    """
    Evaluates Bosio's three conditions on a family of (2m+1)-subsets.

    Parameters:
    c (Configuration): the vectors.
    family: the subsets E (0-based indices).
    interior_mode (str): "intersect" asks the interiors of every pair of hulls
        to meet; "full" only asks every hull to be full-dimensional.

    Returns:
    LVMBReport with one flag per condition and a readable list of failures.
    """
    if interior_mode not in ("intersect", "full"):
        raise PreconditionError(f"unknown interior mode {interior_mode!r}")
    members = sorted({tuple(sorted(e)) for e in family})
    if not members:
        raise PreconditionError("the family E must be nonempty")
    size = 2 * c.m + 1
    for e in members:
        if len(e) != size or len(set(e)) != size:
            raise PreconditionError(f"member {_labels(e)} does not have {size} elements")
        if not set(e) <= set(range(c.n)):
            raise PreconditionError(f"member {_labels(e)} has an index out of range")
    # (i) every member spans C^m affinely
    failures = []
    affine_ok = True
    for e in members:
        rows = [[c.lam[i][k] for i in e] for k in range(c.m)] + [[CScalar(ONE)] * size]
        if _complex_rank(rows) != c.m + 1:
            affine_ok = False
            failures.append(f"(i) affine hull of {_labels(e)} is not C^m")
    # (ii) either pairwise meeting interiors or full-dimensional hulls
    points = c.real_points()
    hulls = {e: [points[i] for i in e] for e in members}
    interiors_ok = True
    if interior_mode == "full":
        for e in members:
            if not full_dimensional(hulls[e]):
                interiors_ok = False
                failures.append(f"(ii) hull of {_labels(e)} has empty interior")
    else:
        for e, f in itertools.combinations_with_replacement(members, 2):
            if not interiors_intersect(hulls[e], hulls[f]):
                interiors_ok = False
                failures.append(f"(ii) interiors of {_labels(e)} and {_labels(f)} do not meet")
    # (iii) exchange: k can always replace some member of E
    exchange_ok = True
    member_set = set(members)
    for e in members:
        for k in range(c.n):
            if k in e:
                continue
            if not any(tuple(sorted((set(e) - {j}) | {k})) in member_set for j in e):
                exchange_ok = False
                failures.append(f"(iii) no exchange of {k + 1} into {_labels(e)}")
    return LVMBReport(affine_ok, interiors_ok, exchange_ok, tuple(failures))


# ---------------------------------------------------------------- derived configurations

def binding_subconfig(c: Configuration, i: int) -> Configuration:
    """Deletes lambda_i; the result is the binding of the open book at z_i = 0."""
    if not 0 <= i < c.n:
        raise PreconditionError("index out of range")
    if not is_removable(c, {i}):
        raise PreconditionError(f"binding empty: index {i + 1} is indispensable")
    return c.drop({i})


@dataclass(frozen=True)
class AffineImage:
    config: Configuration
    admissible_before: bool
    admissible_after: bool
    same_e_min: bool

    @property
    def preserves_admissibility(self) -> bool:
        return self.admissible_before == self.admissible_after


def _is_admissible(c: Configuration) -> bool:
    return c.n >= 2 * c.m + 1 and validate(c).admissible


def affine_image(c: Configuration, A: Sequence[Sequence], B: Optional[Sequence] = None) -> AffineImage:
    """
    Applies Lambda_i -> A Lambda_i + B.

    Parameters:
    c (Configuration): the configuration.
    A: either an m x m complex matrix, or a 2m x 2m rational matrix acting on
        the real points (the real-affine variant).
    B: translation, m complex or 2m real entries; zero by default.

    Returns:
    AffineImage with the new configuration and whether admissibility and the
    minimal subsets survived.
    """
    m = c.m
    if len(A) == m and all(len(row) == m for row in A):
        inverse(A)
        shift = list(B) if B is not None else [ZERO] * m
        vectors = [tuple(sum((A[r][k] * v[k] for k in range(m)), ZERO) + shift[r] for r in range(m))
                   for v in c.lam]
        image = Configuration(m, tuple(tuple(x if isinstance(x, CScalar) else CScalar(x) for x in v)
                                       for v in vectors), c.d)
    elif len(A) == 2 * m and all(len(row) == 2 * m for row in A):
        inverse(A)
        shift = list(B) if B is not None else [ZERO] * (2 * m)
        points = [[sum((A[r][k] * p[k] for k in range(2 * m)), ZERO) + shift[r] for r in range(2 * m)]
                  for p in c.real_points()]
        image = Configuration.from_real_points(m, points, c.d)
    else:
        raise PreconditionError("A must be m x m (complex) or 2m x 2m (real)")
    before = _is_admissible(c)
    after = _is_admissible(image)
    same = before and after and validate(c).e_min == validate(image).e_min
    return AffineImage(image, before, after, same)


def linear_normal_form(c: Configuration) -> Configuration:
    """
    Real-linear normalization: the first 2m points (greedy, by index) that are
    linearly independent are sent to 1, i, e_2, i e_2, ... in that order.
    """
    points = c.real_points()
    dim = 2 * c.m
    chosen = []
    for i, p in enumerate(points):
        if rank([points[j] for j in chosen] + [p]) == len(chosen) + 1:
            chosen.append(i)
        if len(chosen) == dim:
            break
    if len(chosen) < dim:
        raise PreconditionError("points do not span R^{2m}")
    P = [[points[chosen[k]][r] for k in range(dim)] for r in range(dim)]
    return affine_image(c, inverse(P)).config


if __name__ == "__main__":
    from exact import cs
    pentagon = Configuration.planar([cs(1), cs(0, 1), cs(-1, -1), cs(1, "3/2"), cs("-1/2", -1)])
    report = validate(pentagon)
    print("admissible:", report.admissible, "k:", report.k)
    print("E_min:", [_labels(e) for e in report.e_min])
    print("partition:", cyclic_partition(pentagon).parts)
    print("monomials:", arithmetic_report(pentagon).monomials)
