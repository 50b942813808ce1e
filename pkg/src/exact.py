"""
Exact scalar arithmetic over Q and Q(sqrt d), complex scalars over those fields,
small dense matrices, kernels and Smith normal form.

Nothing in here ever touches a float, except ``approx`` which exists only for
display.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

from sympy.ntheory.factor_ import core

from errors import InvariantError, PreconditionError, SchemaError

LOGGER = logging.getLogger(__name__)

Rat = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------- rationals

def to_rat(value) -> Fraction:
    """
    Converts an int, a Fraction or a "p/q" string into a Fraction.

    Parameters:
    value: the value to convert. Floats are refused, they are never exact enough.

    Returns:
    The reduced Fraction.
    """
    if isinstance(value, bool):
        raise SchemaError(f"not a rational number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"not a rational number: {value!r}") from exc
    raise SchemaError(f"not a rational number: {value!r}")


def rat_to_str(value: Fraction) -> str:
    ''' Serializes a rational as "p/q" with q > 0 '''
    value = to_rat(value)
    return f"{value.numerator}/{value.denominator}"


@lru_cache(maxsize=None)
def check_field(d: Optional[int]) -> Optional[int]:
    """Returns d unchanged when it describes a real quadratic field (or is None)."""
    if d is None:
        return None
    if isinstance(d, bool) or not isinstance(d, int) or d < 2 or core(d) != d:
        raise PreconditionError(f"d={d!r} is not a squarefree integer >= 2")
    return d


def join_fields(d1: Optional[int], d2: Optional[int]) -> Optional[int]:
    ''' The common field of two scalars; mixing two different extensions is refused '''
    if d1 is None:
        return d2
    if d2 is None or d1 == d2:
        return d1
    raise SchemaError(f"cannot mix Q(sqrt {d1}) with Q(sqrt {d2})")


# ---------------------------------------------------------------- Q(sqrt d)

@dataclass(frozen=True, eq=False)
class QuadScalar:
    """
    The real number a + b*sqrt(d).

    d is None in pure-rational mode, in which case b must be 0. Two scalars are
    equal when their components are equal; the field descriptor only matters
    for the irrational part.
    """

    a: Fraction = ZERO
    b: Fraction = ZERO
    d: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "a", to_rat(self.a))
        object.__setattr__(self, "b", to_rat(self.b))
        if self.d is None:
            if self.b != 0:
                raise SchemaError("an irrational part needs a field descriptor d")
        else:
            check_field(self.d)

    # comparison and hashing

    def __eq__(self, other):
        other = _as_quad(other)
        if other is None:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __lt__(self, other):
        return qsign(self - other) < 0

    def __le__(self, other):
        return qsign(self - other) <= 0

    def __gt__(self, other):
        return qsign(self - other) > 0

    def __ge__(self, other):
        return qsign(self - other) >= 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # field operations

    def __neg__(self):
        return QuadScalar(-self.a, -self.b, self.d)

    def __add__(self, other):
        other = _as_quad(other)
        if other is None:
            return NotImplemented
        return QuadScalar(self.a + other.a, self.b + other.b, join_fields(self.d, other.d))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_quad(other)
        if other is None:
            return NotImplemented
        return QuadScalar(self.a - other.a, self.b - other.b, join_fields(self.d, other.d))

    def __rsub__(self, other):
        other = _as_quad(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _as_quad(other)
        if other is None:
            return NotImplemented
        d = join_fields(self.d, other.d)
        a = self.a * other.a
        # (a + b r)(c + e r) = ac + bed + (ae + bc) r
        if self.b and other.b:
            a += d * self.b * other.b
        return QuadScalar(a, self.a * other.b + self.b * other.a, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_quad(other)
        if other is None:
            return NotImplemented
        if other.b == 0:
            if other.a == 0:
                raise ZeroDivisionError("division by zero in a quadratic field")
            return QuadScalar(self.a / other.a, self.b / other.a, join_fields(self.d, other.d))
        # multiply through by the conjugate, the norm is rational
        d = join_fields(self.d, other.d)
        norm = other.a * other.a - d * other.b * other.b
        num = self * other.conjugate()
        return QuadScalar(num.a / norm, num.b / norm, d)

    def __rtruediv__(self, other):
        other = _as_quad(other)
        if other is None:
            return NotImplemented
        return other / self

    def conjugate(self) -> "QuadScalar":
        ''' Galois conjugate a - b*sqrt(d) '''
        return QuadScalar(self.a, -self.b, self.d)

    def is_rational(self) -> bool:
        return self.b == 0

    def approx(self) -> float:
        ''' Floating-point value, for display only '''
        if self.b == 0:
            return float(self.a)
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        if self.b == 0:
            return f"QuadScalar({self.a})"
        return f"QuadScalar({self.a}, {self.b}, d={self.d})"

    __str__ = __repr__


def _as_quad(value) -> Optional[QuadScalar]:
    if isinstance(value, QuadScalar):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return QuadScalar(Fraction(value))
    return None


def quad(value) -> QuadScalar:
    ''' Coerces an int, Fraction, "p/q" or QuadScalar into a QuadScalar '''
    if isinstance(value, QuadScalar):
        return value
    return QuadScalar(to_rat(value))


def qsign(x) -> int:
    """
    Sign of the real number a + b*sqrt(d), decided with rational comparisons only.

    Parameters:
    x (QuadScalar | Fraction | int): the number.

    Returns:
    -1, 0 or +1.
    """
    x = quad(x)
    a, b = x.a, x.b
    # signs of the two parts alone settle most cases
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # a and b*sqrt(d) have opposite signs; the larger square wins
    return sa if a * a > x.d * b * b else sb


def rational_part(x) -> Fraction:
    if isinstance(x, QuadScalar):
        return x.a
    return to_rat(x)


def irrational_part(x) -> Fraction:
    if isinstance(x, QuadScalar):
        return x.b
    to_rat(x)
    return ZERO


def field_of(values: Iterable) -> Optional[int]:
    ''' The single quadratic field shared by a collection of scalars '''
    d = None
    for value in values:
        if isinstance(value, CScalar):
            d = join_fields(d, value.d)
        elif isinstance(value, QuadScalar) and value.b != 0:
            d = join_fields(d, value.d)
    return d


# ---------------------------------------------------------------- complex

@dataclass(frozen=True, eq=False)
class CScalar:
    """A complex number re + i*im whose parts live in Q(sqrt d)."""

    re: QuadScalar = QuadScalar()
    im: QuadScalar = QuadScalar()

    def __post_init__(self):
        object.__setattr__(self, "re", quad(self.re))
        object.__setattr__(self, "im", quad(self.im))
        join_fields(self.re.d, self.im.d)

    @property
    def d(self) -> Optional[int]:
        return field_of((self.re, self.im))

    def __eq__(self, other):
        other = _as_complex(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __neg__(self):
        return CScalar(-self.re, -self.im)

    def __add__(self, other):
        other = _as_complex(other)
        if other is None:
            return NotImplemented
        return CScalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_complex(other)
        if other is None:
            return NotImplemented
        return CScalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _as_complex(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _as_complex(other)
        if other is None:
            return NotImplemented
        return CScalar(self.re * other.re - self.im * other.im,
                       self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_complex(other)
        if other is None:
            return NotImplemented
        norm = other.re * other.re + other.im * other.im
        if not norm:
            raise ZeroDivisionError("complex division by zero")
        num = self * other.conjugate()
        return CScalar(num.re / norm, num.im / norm)

    def __rtruediv__(self, other):
        other = _as_complex(other)
        if other is None:
            return NotImplemented
        return other / self

    def conjugate(self) -> "CScalar":
        return CScalar(self.re, -self.im)

    def approx(self) -> complex:
        return complex(self.re.approx(), self.im.approx())

    def __repr__(self):
        return f"CScalar({self.re!r}, {self.im!r})"

    __str__ = __repr__


I = CScalar(ZERO, ONE)


def _as_complex(value) -> Optional[CScalar]:
    if isinstance(value, CScalar):
        return value
    q = _as_quad(value)
    if q is None:
        return None
    return CScalar(q, ZERO)


def cs(re=0, im=0, d: Optional[int] = None) -> CScalar:
    """
    Shorthand constructor used by fixtures: ``cs(1, 2)`` is 1+2i.

    Each part may be an int, a Fraction, a "p/q" string, a QuadScalar or a
    pair (a, b) meaning a + b*sqrt(d).
    """
    def part(value):
        if isinstance(value, tuple):
            return QuadScalar(to_rat(value[0]), to_rat(value[1]), d)
        return quad(value)
    return CScalar(part(re), part(im))


# ---------------------------------------------------------------- serialization

def quad_to_json(x) -> dict:
    x = quad(x)
    return {"a": rat_to_str(x.a), "b": rat_to_str(x.b)}


def scalar_to_json(x):
    ''' "p/q" for a rational value, {"a": .., "b": ..} otherwise '''
    x = quad(x)
    return rat_to_str(x.a) if x.b == 0 else quad_to_json(x)


def quad_from_json(data, d: Optional[int] = None) -> QuadScalar:
    ''' Accepts {"a": .., "b": ..} or a bare rational '''
    if isinstance(data, dict):
        unknown = set(data) - {"a", "b"}
        if unknown or "a" not in data:
            raise SchemaError(f"bad quadratic scalar: {data!r}")
        return QuadScalar(to_rat(data["a"]), to_rat(data.get("b", 0)), d)
    return QuadScalar(to_rat(data), ZERO, d)


def complex_to_json(z: CScalar) -> dict:
    return {"re": quad_to_json(z.re), "im": quad_to_json(z.im)}


def complex_from_json(data, d: Optional[int] = None) -> CScalar:
    ''' Accepts {"re": .., "im": ..}, a pair [re, im] or a bare real scalar '''
    # object form
    if isinstance(data, dict) and set(data) <= {"re", "im"}:
        return CScalar(quad_from_json(data.get("re", 0), d), quad_from_json(data.get("im", 0), d))
    # pair form
    if isinstance(data, list):
        if len(data) != 2:
            raise SchemaError(f"complex pair must have two entries: {data!r}")
        return CScalar(quad_from_json(data[0], d), quad_from_json(data[1], d))
    return CScalar(quad_from_json(data, d), ZERO)


# ---------------------------------------------------------------- matrices

@dataclass(frozen=True)
class Mat:
    """Row-major dense matrix of exact scalars (or plain ints for SNF input)."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise InvariantError(f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Mat":
        rows = [tuple(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise SchemaError("ragged matrix rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls.from_rows([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls(rows, cols, (ZERO,) * (rows * cols))

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Mat":
        return Mat.from_rows([self.column(j) for j in range(self.cols)], self.rows)

    def apply(self, vector: Sequence) -> tuple:
        ''' Returns M*v '''
        return tuple(dot(self.row(i), vector) for i in range(self.rows))

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise PreconditionError("matrix shapes do not compose")
        cols = [other.column(j) for j in range(other.cols)]
        return Mat.from_rows([[dot(self.row(i), c) for c in cols] for i in range(self.rows)], other.cols)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)


def dot(u: Sequence, v: Sequence):
    total = ZERO
    for x, y in zip(u, v):
        if x and y:
            total = total + x * y
    return total


def _lift(x):
    if isinstance(x, bool):
        raise SchemaError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    return x


def rref(rows: Sequence[Sequence], ncols: Optional[int] = None) -> Tuple[List[list], List[int]]:
    """
    Gauss-Jordan elimination over whatever exact field the entries live in.

    Parameters:
    rows: the matrix as a list of rows.
    ncols: number of columns (needed when there are no rows).

    Returns:
    A tuple (reduced rows, pivot columns). Pivots are the leftmost possible and
    scaled to 1, so the result is canonical for the row space.
    """
    work = [[_lift(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(work[0]) if work else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(work):
            break
        # first nonzero entry at or below row r
        p = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        lead = work[r][c]
        work[r] = [x / lead if x != 0 else x for x in work[r]]
        # clear the column above and below
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y if y != 0 else x for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return work, pivots


def rank(M) -> int:
    rows = M.to_rows() if isinstance(M, Mat) else M
    cols = M.cols if isinstance(M, Mat) else None
    return len(rref(rows, cols)[1])


def kernel_over_field(M: Mat) -> Mat:
    """
    Basis of {x : M x = 0} over the field of the entries, in reduced row-echelon form.

    Parameters:
    M (Mat): the matrix.

    Returns:
    A Mat whose rows form the canonical basis (possibly zero rows).
    """
    red, pivots = rref(M.to_rows(), M.cols)
    free = [c for c in range(M.cols) if c not in pivots]
    # one basis vector per free column
    basis = []
    for f in free:
        v = [ZERO] * M.cols
        v[f] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][f]
        basis.append(v)
    canon, _ = rref(basis, M.cols)
    return Mat.from_rows(canon, M.cols)


def kernel_over_Q(M: Mat) -> Mat:
    """
    Rational kernel of a matrix with entries in Q(sqrt d).

    Writing M = A + sqrt(d) B, a rational vector x has Mx = 0 exactly when
    Ax = 0 and Bx = 0, so this is the field kernel of the stacked [A; B].
    """
    a_rows = [[rational_part(x) for x in M.row(i)] for i in range(M.rows)]
    b_rows = [[irrational_part(x) for x in M.row(i)] for i in range(M.rows)]
    stacked = a_rows + [r for r in b_rows if any(r)]
    return kernel_over_field(Mat.from_rows(stacked, M.cols))


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> Optional[list]:
    ''' One solution of rows*x = rhs with free variables set to 0, or None when inconsistent '''
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    # a pivot in the last column means 0 = 1
    if ncols in pivots:
        return None
    x = [ZERO] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def inverse(rows: Sequence[Sequence]) -> List[list]:
    """Inverse of a square matrix; raises PreconditionError when it is singular."""
    n = len(rows)
    aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(rows)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise PreconditionError("singular matrix")
    return [r[n:] for r in red]


def primitive_integer_vector(row: Sequence) -> Tuple[int, ...]:
    ''' Clears denominators of a rational vector and divides by the content '''
    values = [to_rat(x) for x in row]
    # clear denominators, then divide out the content
    scale = math.lcm(*(v.denominator for v in values)) if values else 1
    ints = [int(v * scale) for v in values]
    content = math.gcd(*ints) if ints else 0
    if content == 0:
        return tuple(ints)
    return tuple(x // content for x in ints)


# ---------------------------------------------------------------- integer lattices

def _hermite_rows(A: List[List[int]], upto: int) -> int:
    ''' Integer row echelon on the first ``upto`` columns, in place; returns the rank '''
    t = 0
    for col in range(upto):
        if t == len(A):
            break
        while True:
            # smallest nonzero entry of the column becomes the pivot
            live = [i for i in range(t, len(A)) if A[i][col]]
            if not live:
                break
            p = min(live, key=lambda i: abs(A[i][col]))
            A[t], A[p] = A[p], A[t]
            if len(live) == 1:
                break
            for i in range(t + 1, len(A)):
                q = A[i][col] // A[t][col]
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
        if not A[t][col]:
            continue
        if A[t][col] < 0:
            A[t] = [-x for x in A[t]]
        for i in range(t):
            q = A[i][col] // A[t][col]
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[t])]
        t += 1
    return t


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> Tuple[Tuple[int, ...], ...]:
    """
    Z-basis of {x in Z^n : C x = 0} for an integer matrix C, in Hermite normal form.

    Row reduces [C^T | I] over the integers; the identity half records a
    unimodular transform, and its rows beside a zero left half span the kernel.
    """
    C = [[_as_int(x) for x in r] for r in rows]
    r = len(C)
    aug = [[C[i][j] for i in range(r)] + [int(j == k) for k in range(ncols)] for j in range(ncols)]
    rk = _hermite_rows(aug, r)
    kernel = [row[r:] for row in aug[rk:]]
    _hermite_rows(kernel, ncols)
    return tuple(tuple(v) for v in kernel if any(v))


def saturated_lattice(rows: Sequence[Sequence], ncols: int) -> Tuple[Tuple[int, ...], ...]:
    """
    Z-basis of span_Q(rows) intersected with Z^n.

    Parameters:
    rows: rational vectors spanning the subspace.
    ncols (int): ambient dimension n.

    Returns:
    The basis in Hermite normal form (empty for the zero subspace). Every
    integer vector of the span is an integer combination of it.
    """
    live = [list(r) for r in rows if any(to_rat(x) != 0 for x in r)]
    if not live:
        return ()
    # the span is the kernel of its orthogonal complement
    complement = kernel_over_field(Mat.from_rows([[to_rat(x) for x in r] for r in live], ncols))
    normals = [primitive_integer_vector(complement.row(i)) for i in range(complement.rows)]
    basis = integer_kernel(normals, ncols)
    LOGGER.debug("saturated a rank %d lattice in Z^%d", len(basis), ncols)
    return basis


# ---------------------------------------------------------------- Smith normal form

def _as_int(x) -> int:
    if isinstance(x, bool):
        raise PreconditionError("Smith normal form needs integer entries")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    if isinstance(x, QuadScalar) and x.b == 0 and x.a.denominator == 1:
        return x.a.numerator
    raise PreconditionError(f"Smith normal form needs integer entries, got {x!r}")


def _bring_smallest(A: List[List[int]], t: int, cells) -> bool:
    best = min(((abs(A[i][j]), i, j) for i, j in cells if A[i][j]), default=None)
    if best is None:
        return False
    _, i, j = best
    A[t], A[i] = A[i], A[t]
    if j != t:
        for row in A:
            row[t], row[j] = row[j], row[t]
    return True


def smith_normal_form(M) -> Tuple[Tuple[int, ...], int]:
    """
    Invariant factors of an integer matrix.

    The pivot is always the entry of smallest absolute value; rows and columns
    are reduced by Euclidean division against it, which keeps the entries
    bounded by the current pivot.

    Parameters:
    M (Mat | list of rows): integer matrix.

    Returns:
    (factors, rank) with factors d1 | d2 | ... | dr, all positive.
    """
    rows = M.to_rows() if isinstance(M, Mat) else M
    A = [[_as_int(x) for x in r] for r in rows]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    # diagonalize one pivot at a time
    factors = []
    t = 0
    while t < min(nrows, ncols):
        cells = [(i, j) for i in range(t, nrows) for j in range(t, ncols)]
        if not _bring_smallest(A, t, cells):
            break
        while True:
            pivot = A[t][t]
            dirty = False
            for i in range(t + 1, nrows):
                q = A[i][t] // pivot
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                if A[i][t]:
                    dirty = True
            for j in range(t + 1, ncols):
                q = A[t][j] // pivot
                if q:
                    for i in range(t, nrows):
                        A[i][j] -= q * A[i][t]
                if A[t][j]:
                    dirty = True
            # a remainder survived, make it the new pivot
            if dirty:
                line = [(i, t) for i in range(t, nrows)] + [(t, j) for j in range(t + 1, ncols)]
                _bring_smallest(A, t, line)
                continue
            bad = next((i for i in range(t + 1, nrows)
                        for j in range(t + 1, ncols) if A[i][j] % pivot), None)
            if bad is None:
                break
            # pull a non-multiple into the pivot row, the next pass shrinks the pivot
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
        factors.append(abs(A[t][t]))
        t += 1
    LOGGER.debug("SNF of %dx%d matrix: rank %d", nrows, ncols, len(factors))
    return tuple(factors), len(factors)


if __name__ == "__main__":
    r2 = QuadScalar(0, 1, 2)
    print("sign of 1 - sqrt2:", qsign(1 - r2))
    print("1 / (1 + sqrt2) =", 1 / (1 + r2))
    print("SNF:", smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]))
    print("saturation:", saturated_lattice([[5, 0, 9, -2, -12], [0, 5, -7, -4, 6]], 5))
