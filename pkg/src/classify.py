"""
Symbolic manifolds and the classification of the m = 1 family.

Expressions are small frozen trees (spheres, disks, tori, exteriors, products,
connected sums, boundary connected sums, punctured products). The classification
theorems build them from a cyclic partition, and ``expr_homology`` computes their
integral homology independently of any simplicial census.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union

import config
from errors import PreconditionError, SchemaError
from scomplex import GradedHomology

LOGGER = logging.getLogger(__name__)

FLAVORS = ("complex", "real")


def _check_flavor(flavor: str) -> None:
    if flavor not in FLAVORS:
        raise PreconditionError(f"flavor must be 'complex' or 'real', got {flavor!r}")


@dataclass(frozen=True)
class Partition:
    """
    Cyclic partition (n_1, ..., n_{2l+1}) of n.

    d_i is the sum of the l consecutive parts starting at n_i (indices taken
    cyclically); ``classes`` optionally records which configuration indices
    form each part.
    """

    parts: Tuple[int, ...]
    classes: Optional[Tuple[Tuple[int, ...], ...]] = field(default=None, compare=False)

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if len(parts) % 2 == 0:
            raise PreconditionError(f"a cyclic partition needs an odd number of parts, got {len(parts)}")
        if any(not isinstance(p, int) or p < 1 for p in parts):
            raise PreconditionError("every part must be a positive integer")
        if self.classes is not None and [len(c) for c in self.classes] != list(parts):
            raise PreconditionError("classes do not match the parts")

    @classmethod
    def from_config(cls, c) -> "Partition":
        return config.cyclic_partition(c)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def ell(self) -> int:
        return (len(self.parts) - 1) // 2

    @property
    def d_values(self) -> Tuple[int, ...]:
        size = len(self.parts)
        return tuple(sum(self.parts[(i + j) % size] for j in range(self.ell)) for i in range(size))

    @property
    def d(self) -> int:
        return min(self.d_values) if self.ell else 0

    def rotate(self, i: int) -> "Partition":
        ''' The same cycle read from part i '''
        size = len(self.parts)
        i %= size
        classes = None if self.classes is None else self.classes[i:] + self.classes[:i]
        return Partition(self.parts[i:] + self.parts[:i], classes)

    def doubled(self) -> "Partition":
        ''' The real partition whose half-manifold is the complex one: (2n_1 - 1, 2n_2, ..., 2n_{2l+1}) '''
        return Partition((2 * self.parts[0] - 1,) + tuple(2 * p for p in self.parts[1:]))

    def to_json(self) -> dict:
        out = {"parts": list(self.parts), "ell": self.ell, "d_values": list(self.d_values)}
        if self.classes is not None:
            out["classes"] = [[i + 1 for i in cls] for cls in self.classes]
        return out


# ---------------------------------------------------------------- expressions

class ManifoldExpr:
    """Base class of the expression tree."""

    @property
    def dim(self) -> int:
        raise NotImplementedError

    @property
    def closed(self) -> bool:
        return True


@dataclass(frozen=True)
class Sphere(ManifoldExpr):
    q: int

    def __post_init__(self):
        if self.q < 0:
            raise SchemaError("sphere dimension must be nonnegative")

    @property
    def dim(self):
        return self.q


@dataclass(frozen=True)
class Disk(ManifoldExpr):
    q: int

    def __post_init__(self):
        if self.q < 0:
            raise SchemaError("disk dimension must be nonnegative")

    @property
    def dim(self):
        return self.q

    @property
    def closed(self):
        return self.q == 0


@dataclass(frozen=True)
class Torus(ManifoldExpr):
    k: int

    @property
    def dim(self):
        return self.k


@dataclass(frozen=True)
class Exterior(ManifoldExpr):
    """Complement of an open tubular neighbourhood of S^p x S^q embedded in S^m."""

    p: int
    q: int
    m: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.m <= self.p + self.q:
            raise SchemaError(f"exterior needs m > p + q, got p={self.p} q={self.q} m={self.m}")

    @property
    def dim(self):
        return self.m

    @property
    def closed(self):
        return False


@dataclass(frozen=True)
class EmptyManifold(ManifoldExpr):
    @property
    def dim(self):
        return -1


@dataclass(frozen=True)
class Product(ManifoldExpr):
    factors: Tuple[ManifoldExpr, ...]

    @property
    def dim(self):
        return sum(f.dim for f in self.factors)

    @property
    def closed(self):
        return all(f.closed for f in self.factors)


@dataclass(frozen=True)
class PuncturedProduct(ManifoldExpr):
    """S^p x S^q with an open disk of full dimension removed."""

    p: int
    q: int

    @property
    def dim(self):
        return self.p + self.q

    @property
    def closed(self):
        return False


@dataclass(frozen=True)
class ConnSum(ManifoldExpr):
    terms: Tuple[Tuple[int, ManifoldExpr], ...]

    @property
    def dim(self):
        return self.terms[0][1].dim


@dataclass(frozen=True)
class BoundaryConnSum(ManifoldExpr):
    terms: Tuple[Tuple[int, ManifoldExpr], ...]

    @property
    def dim(self):
        return self.terms[0][1].dim

    @property
    def closed(self):
        return False


def _sort_key(e: ManifoldExpr):
    dims = tuple(f.dim for f in e.factors) if isinstance(e, Product) else (e.dim,)
    return dims, expr_to_text(e)


def product(*factors: ManifoldExpr) -> ManifoldExpr:
    """Product with nested products flattened and points (D^0, T^0) dropped."""
    flat = []
    for f in factors:
        if isinstance(f, Product):
            flat.extend(f.factors)
        elif isinstance(f, EmptyManifold):
            return EmptyManifold()
        # points are the unit of the product
        elif (isinstance(f, Disk) and f.q == 0) or (isinstance(f, Torus) and f.k == 0):
            continue
        else:
            flat.append(f)
    if not flat:
        return Disk(0)
    if len(flat) == 1:
        return flat[0]
    return Product(tuple(flat))


def _merge_terms(terms: Iterable) -> Tuple[Tuple[int, ManifoldExpr], ...]:
    counts: Dict[ManifoldExpr, int] = {}
    for term in terms:
        count, e = term if isinstance(term, tuple) else (1, term)
        if count < 1:
            raise SchemaError("summand multiplicities must be positive")
        counts[e] = counts.get(e, 0) + count
    return tuple((counts[e], e) for e in sorted(counts, key=_sort_key))


def connected_sum(terms: Iterable) -> ManifoldExpr:
    """
    Connected sum of closed manifolds of one dimension.

    ``terms`` holds expressions or (multiplicity, expression) pairs; equal
    summands are merged and a single summand stands for itself.
    """
    merged = _merge_terms(terms)
    if not merged:
        raise SchemaError("empty connected sum")
    # summands must share one dimension and be closed
    dims = {e.dim for _, e in merged}
    if len(dims) != 1:
        raise SchemaError(f"connected sum of manifolds of different dimensions {sorted(dims)}")
    if not all(e.closed for _, e in merged):
        raise SchemaError("connected sum needs closed summands")
    if len(merged) == 1 and merged[0][0] == 1:
        return merged[0][1]
    return ConnSum(merged)


def boundary_sum(terms: Iterable) -> ManifoldExpr:
    ''' Boundary connected sum of manifolds with nonempty boundary of one dimension '''
    merged = _merge_terms(terms)
    if not merged:
        raise SchemaError("empty boundary connected sum")
    if len({e.dim for _, e in merged}) != 1:
        raise SchemaError("boundary connected sum of manifolds of different dimensions")
    if any(e.closed for _, e in merged):
        raise SchemaError("boundary connected sum needs summands with boundary")
    if len(merged) == 1 and merged[0][0] == 1:
        return merged[0][1]
    return BoundaryConnSum(merged)


def expr_dimension(e: ManifoldExpr) -> int:
    return e.dim


def expr_to_text(e: ManifoldExpr) -> str:
    if isinstance(e, Sphere):
        return f"S^{e.q}"
    if isinstance(e, Disk):
        return f"D^{e.q}"
    if isinstance(e, Torus):
        return f"T^{e.k}"
    if isinstance(e, Exterior):
        return f"E_{{{e.p},{e.q}}}^{e.m}"
    if isinstance(e, EmptyManifold):
        return "empty"
    if isinstance(e, Product):
        return " x ".join(expr_to_text(f) for f in e.factors)
    if isinstance(e, PuncturedProduct):
        return f"(S^{e.p} x S^{e.q} \\ D^{e.p + e.q})"
    if isinstance(e, (ConnSum, BoundaryConnSum)):
        symbol = "#" if isinstance(e, ConnSum) else "bd#"
        inner = ", ".join(f"{n}*({expr_to_text(t)})" if n > 1 else f"({expr_to_text(t)})" for n, t in e.terms)
        return f"{symbol}[{inner}]"
    raise SchemaError(f"unknown expression {e!r}")


def expr_to_json(e: ManifoldExpr) -> dict:
    if isinstance(e, Sphere):
        return {"op": "sphere", "dim": e.q}
    if isinstance(e, Disk):
        return {"op": "disk", "dim": e.q}
    if isinstance(e, Torus):
        return {"op": "torus", "dim": e.k}
    if isinstance(e, Exterior):
        return {"op": "exterior", "p": e.p, "q": e.q, "m": e.m}
    if isinstance(e, EmptyManifold):
        return {"op": "empty"}
    if isinstance(e, Product):
        return {"op": "product", "factors": [expr_to_json(f) for f in e.factors]}
    if isinstance(e, PuncturedProduct):
        return {"op": "punctured_product", "p": e.p, "q": e.q}
    if isinstance(e, (ConnSum, BoundaryConnSum)):
        op = "connected_sum" if isinstance(e, ConnSum) else "boundary_connected_sum"
        return {"op": op, "terms": [{"count": n, "expr": expr_to_json(t)} for n, t in e.terms]}
    raise SchemaError(f"unknown expression {e!r}")


def expr_from_json(data: dict) -> ManifoldExpr:
    try:
        op = data["op"]
        if op == "sphere":
            return Sphere(int(data["dim"]))
        if op == "disk":
            return Disk(int(data["dim"]))
        if op == "torus":
            return Torus(int(data["dim"]))
        if op == "exterior":
            return Exterior(int(data["p"]), int(data["q"]), int(data["m"]))
        if op == "empty":
            return EmptyManifold()
        if op == "product":
            return Product(tuple(expr_from_json(f) for f in data["factors"]))
        if op == "punctured_product":
            return PuncturedProduct(int(data["p"]), int(data["q"]))
        if op in ("connected_sum", "boundary_connected_sum"):
            terms = tuple((int(t["count"]), expr_from_json(t["expr"])) for t in data["terms"])
            return ConnSum(terms) if op == "connected_sum" else BoundaryConnSum(terms)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad expression document: {exc}") from exc
    raise SchemaError(f"unknown expression operator {data.get('op')!r}")


# ---------------------------------------------------------------- homology of expressions

def _free(ranks: Dict[int, int]) -> Dict[int, int]:
    return {deg: r for deg, r in ranks.items() if r}


def _ranks(e: ManifoldExpr) -> Dict[int, int]:
    if isinstance(e, Sphere):
        return {0: 2} if e.q == 0 else {0: 1, e.q: 1}
    if isinstance(e, Disk):
        return {0: 1}
    if isinstance(e, Torus):
        return {j: comb(e.k, j) for j in range(e.k + 1)}
    if isinstance(e, Exterior):
        out: Dict[int, int] = {0: 1}
        for deg in (e.m - e.p - e.q - 1, e.m - e.q - 1, e.m - e.p - 1):
            out[deg] = out.get(deg, 0) + 1
        return out
    if isinstance(e, EmptyManifold):
        return {}
    if isinstance(e, PuncturedProduct):
        # the punctured product retracts onto the wedge of its two spheres
        out = _ranks(Product((Sphere(e.p), Sphere(e.q))))
        out[e.p + e.q] -= 1
        return _free(out)
    if isinstance(e, Product):
        total = {0: 1}
        for f in e.factors:
            step: Dict[int, int] = {}
            for a, ra in total.items():
                for b, rb in _ranks(f).items():
                    step[a + b] = step.get(a + b, 0) + ra * rb
            total = step
        return _free(total)
    if isinstance(e, ConnSum):
        top = e.dim
        out = {0: 1, top: 1}
        for count, term in e.terms:
            if not term.closed:
                raise SchemaError("connected sum over a manifold with boundary")
            for deg, r in _ranks(term).items():
                if 0 < deg < top:
                    out[deg] = out.get(deg, 0) + count * r
        return _free(out)
    if isinstance(e, BoundaryConnSum):
        out = {0: 1}
        for count, term in e.terms:
            for deg, r in _ranks(term).items():
                if deg > 0:
                    out[deg] = out.get(deg, 0) + count * r
        return _free(out)
    raise SchemaError(f"unknown expression {e!r}")


def expr_homology(e: ManifoldExpr) -> GradedHomology:
    """
    Integral homology of an expression; every group it produces is free.

    Parameters:
    e (ManifoldExpr): a well-formed expression.

    Returns:
    GradedHomology. Raises SchemaError on ill-formed input.
    """
    if isinstance(e, ConnSum):
        connected_sum(e.terms)
    if isinstance(e, BoundaryConnSum):
        boundary_sum(e.terms)
    return GradedHomology.from_dict(_ranks(e))


# ---------------------------------------------------------------- closed forms

def classify_polygon(p: Partition, flavor: str = "complex") -> ManifoldExpr:
    """
    Diffeomorphism type of M_1 for the m = 1 normal form with partition p.

    Parameters:
    p (Partition): the cyclic partition (n_1, ..., n_{2l+1}).
    flavor (str): 'complex' for the moment-angle manifold in C^n, 'real' for its real part.

    Returns:
    A product of three spheres when l = 1, otherwise a connected sum of
    products of two spheres, one summand per d_i.
    """
    _check_flavor(flavor)
    n, ell = p.n, p.ell
    if ell == 0:
        return EmptyManifold()
    # three classes: a product of three spheres
    if ell == 1:
        if flavor == "complex":
            return product(*(Sphere(2 * part - 1) for part in p.parts))
        return product(*(Sphere(part - 1) for part in p.parts))
    # otherwise one summand per d_i
    if flavor == "complex":
        terms = [product(Sphere(2 * di - 1), Sphere(2 * n - 2 * di - 2)) for di in p.d_values]
    else:
        terms = [product(Sphere(di - 1), Sphere(n - di - 2)) for di in p.d_values]
    return connected_sum(terms)


def macgavran(p: int, k: int = 0) -> ManifoldExpr:
    """
    Moment-angle manifold of a p-gon: # over j of j*C(p-2, j+1) copies of
    S^{2+j} x S^{p-j}, times (S^1)^k. The triangle gives S^5.
    """
    if p < 3:
        raise PreconditionError("a polygon needs at least 3 sides")
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    if p == 3:
        base = Sphere(5)
    else:
        base = connected_sum([(j * comb(p - 2, j + 1), product(Sphere(2 + j), Sphere(p - j)))
                              for j in range(1, p - 2)])
    return product(base, Torus(k))


def half_and_page(p: Partition, flavor: str = "complex") -> ManifoldExpr:
    """
    The half-manifold cut out by x_1 >= 0 (real flavour) or the page of the open
    book at z_1 = 0 (complex flavour), for a partition whose first part holds
    the removed index.

    The complex page is the real half-manifold of (2n_1 - 1, 2n_2, ..., 2n_{2l+1}).
    """
    _check_flavor(flavor)
    # the complex page is a real half-manifold of the doubled partition
    if flavor == "complex":
        return half_and_page(p.doubled(), "real")
    n, ell, parts = p.n, p.ell, p.parts
    if ell == 0:
        raise PreconditionError("half-manifold of a configuration with a single class")
    size = len(parts)

    def dv(i):
        return p.d_values[(i - 1) % size]

    if ell == 1:
        return product(Sphere(parts[1] - 1), Sphere(parts[2] - 1), Disk(parts[0] - 1))

    def sphere_disk(i):
        return product(Sphere(dv(i) - 1), Disk(n - dv(i) - 2))

    def disk_sphere(i):
        return product(Disk(dv(i) - 1), Sphere(n - dv(i) - 2))

    # the first part decides whether the sum opens with sphere-disk products or a punctured product
    tail = [disk_sphere(i) for i in list(range(ell + 3, 2 * ell + 2)) + [1]]
    if parts[0] > 1:
        terms = [sphere_disk(i) for i in range(2, ell + 3)] + tail
    elif ell > 2:
        terms = ([sphere_disk(i) for i in range(3, ell + 2)] + tail
                 + [PuncturedProduct(dv(2) - 1, dv(ell + 2) - 1)])
    else:
        terms = [PuncturedProduct(dv(2) - 1, dv(4) - 1), Exterior(parts[1] - 1, parts[4] - 1, n - 3)]
    LOGGER.debug("half-manifold of %s has %d summands", parts, len(terms))
    return boundary_sum(terms)


@dataclass(frozen=True)
class OpenBookDescription:
    binding: object
    page: Union[ManifoldExpr, str]
    monodromy: str = "trivial"
    partition: Optional[Partition] = None

    def to_json(self) -> dict:
        page = self.page if isinstance(self.page, str) else {
            "expr": expr_to_json(self.page), "text": expr_to_text(self.page), "dim": self.page.dim}
        return {"binding": config.config_to_json(self.binding), "page": page, "monodromy": self.monodromy,
                "partition": None if self.partition is None else self.partition.to_json()}


def open_book(c, i: int) -> OpenBookDescription:
    """
    Open book decomposition of M_1 with binding at z_i = 0 (i is 0-based).

    The page is classified for m = 1 only, from the cyclic partition read
    from the class of i.
    """
    binding = config.binding_subconfig(c, i)
    if c.m != 1:
        return OpenBookDescription(binding, "unclassified")
    part = config.cyclic_partition(c)
    # read the partition from the class of i
    position = next(pos for pos, cls in enumerate(part.classes) if i in cls)
    rotated = part.rotate(position)
    return OpenBookDescription(binding, half_and_page(rotated, "complex"), partition=rotated)


if __name__ == "__main__":
    pentagon = Partition((1, 1, 1, 1, 1))
    print("pentagon:", expr_to_text(classify_polygon(pentagon)))
    print("hexagon (Mac Gavran):", expr_to_text(macgavran(6)))
    print("page:", expr_to_text(half_and_page(Partition((2, 2, 1)))))
