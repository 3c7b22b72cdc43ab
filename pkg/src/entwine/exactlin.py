"""Exact scalars and dense linear algebra over Q and F_p.

Everything else in this package reduces to the two primitives defined here:
`Field`, a handle whose elements support +, -, *, / exactly, and `LinMap`,
a dense matrix tagged with the tensor-factor shapes of its domain and
codomain.  Tensor legs are flattened row-major: the flat index of
(i_1, ..., i_k) with shape (d_1, ..., d_k) is ((i_1*d_2 + i_2)*d_3 + ...).

Solvers return exact answers and verify them by substitution before
returning; a failed substitution is an internal error, never a verdict.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

MAX_PRIME = 2**61


class ParseError(ValueError):
    """A scalar or structure literal that cannot be read exactly."""


class ShapeError(ValueError):
    """Operands whose shapes make the requested operation undefined."""


class InternalCheckError(AssertionError):
    """An exact self-check failed; indicates a bug, not a mathematical verdict."""


# ---------------------------------------------------------------------------
# scalars

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n below 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FpElement:
    """An element of F_p in canonical form.

    Invariant: `v` is reduced to [0, p).  Subclasses are generated per prime
    by `GF`; elements of different primes never mix.
    """

    __slots__ = ("v",)
    p = 0

    def __init__(self, v: int):
        self.v = v % self.p

    def _other(self, o):
        if isinstance(o, FpElement):
            if o.p != self.p:
                raise ShapeError("mixed prime fields %d and %d" % (self.p, o.p))
            return o.v
        if isinstance(o, int):
            return o
        return None

    def __add__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else self.__class__(self.v + w)

    __radd__ = __add__

    def __sub__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else self.__class__(self.v - w)

    def __rsub__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else self.__class__(w - self.v)

    def __mul__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else self.__class__(self.v * w)

    __rmul__ = __mul__

    def __truediv__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        return self.__class__(self.v * pow(w, -1, self.p))

    def __rtruediv__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        return self.__class__(w * pow(self.v, -1, self.p))

    def __neg__(self):
        return self.__class__(-self.v)

    def __pow__(self, n: int):
        return self.__class__(pow(self.v, n, self.p))

    def __eq__(self, o):
        if isinstance(o, FpElement):
            return self.p == o.p and self.v == o.v
        if isinstance(o, int):
            return self.v == o % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return "%d" % self.v


_GF_CACHE: dict[int, type] = {}


def GF(p: int) -> type:
    """Element class for F_p, cached per prime."""
    cls = _GF_CACHE.get(p)
    if cls is None:
        if not (isinstance(p, int) and 1 < p < MAX_PRIME and is_prime(p)):
            raise ParseError("not a supported prime: %r" % (p,))
        cls = type("F%d" % p, (FpElement,), {"__slots__": (), "p": p})
        _GF_CACHE[p] = cls
    return cls


_Q_RE = re.compile(r"^[+-]?\d+(/[+-]?\d+)?$")


@dataclass(frozen=True)
class Field:
    """Handle for Q (kind='Q') or F_p (kind='Fp', p prime < 2^61)."""

    kind: str
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None:
                raise ParseError("Q takes no modulus")
        elif self.kind == "Fp":
            GF(self.p)
        else:
            raise ParseError("unknown field kind %r" % (self.kind,))

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else GF(self.p)(0)

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else GF(self.p)(1)

    @property
    def char(self) -> int:
        return 0 if self.kind == "Q" else self.p

    def of(self, n: int):
        return Fraction(n) if self.kind == "Q" else GF(self.p)(n)

    def parse(self, s):
        """Read a scalar from a string (or a plain int).

        Accepts "a" and "a/b" (b nonzero).  Over F_p the result is reduced;
        "a/b" means a * b^{-1} mod p and requires p not dividing b.
        """
        if isinstance(s, int) and not isinstance(s, bool):
            return self.of(s)
        if not isinstance(s, str) or not _Q_RE.match(s.strip()):
            raise ParseError("malformed scalar %r" % (s,))
        s = s.strip()
        num, _, den = s.partition("/")
        a, b = int(num), int(den) if den else 1
        if b == 0:
            raise ParseError("zero denominator in %r" % (s,))
        if self.kind == "Q":
            return Fraction(a, b)
        if b % self.p == 0:
            raise ParseError("denominator of %r is 0 mod %d" % (s, self.p))
        return GF(self.p)(a * pow(b, -1, self.p))

    def to_str(self, x) -> str:
        return str(x)

    def elements(self) -> Iterator:
        """All field elements in canonical order; only finite fields iterate."""
        if self.kind == "Q":
            raise ShapeError("Q is not enumerable")
        cls = GF(self.p)
        return (cls(i) for i in range(self.p))

    @property
    def order(self) -> Optional[int]:
        return None if self.kind == "Q" else self.p

    def random(self, rng):
        """A scalar for seeded sampling: uniform in F_p, small integer in Q."""
        if self.kind == "Q":
            return Fraction(rng.randint(-9, 9))
        return GF(self.p)(rng.randrange(self.p))

    def describe(self) -> dict:
        return {"kind": self.kind} if self.kind == "Q" else {"kind": "Fp", "p": self.p}


QQ = Field("Q")


def field_from_dict(d) -> Field:
    if not isinstance(d, dict) or "kind" not in d:
        raise ParseError("field must be an object with a 'kind'")
    if d["kind"] == "Q":
        return QQ
    if d["kind"] == "Fp":
        if "p" not in d:
            raise ParseError("field of kind Fp needs a prime 'p'")
        return Field("Fp", d["p"])
    raise ParseError("unknown field kind %r" % (d["kind"],))


# ---------------------------------------------------------------------------
# index bookkeeping

def prod(shape: Sequence[int]) -> int:
    n = 1
    for d in shape:
        n *= d
    return n


def flatten_index(shape: Sequence[int], multi: Sequence[int]) -> int:
    if len(shape) != len(multi):
        raise ShapeError("index arity %d vs shape arity %d" % (len(multi), len(shape)))
    flat = 0
    for d, i in zip(shape, multi):
        if not 0 <= i < d:
            raise ShapeError("index %r out of range for shape %r" % (multi, shape))
        flat = flat * d + i
    return flat


def unflatten_index(shape: Sequence[int], flat: int) -> tuple[int, ...]:
    multi = []
    for d in reversed(shape):
        multi.append(flat % d)
        flat //= d
    if flat:
        raise ShapeError("flat index out of range")
    return tuple(reversed(multi))


def iter_multi(shape: Sequence[int]):
    return itertools.product(*(range(d) for d in shape))


# ---------------------------------------------------------------------------
# vectors (plain tuples of scalars)

def vec_zero(field: Field, n: int) -> tuple:
    return (field.zero,) * n


def basis_vec(field: Field, n: int, i: int) -> tuple:
    return tuple(field.one if j == i else field.zero for j in range(n))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_scale(s, v):
    return tuple(s * a for a in v)


def vec_is_zero(v) -> bool:
    return not any(v)


def kron_vec(u, v):
    """u (x) v flattened row-major."""
    return tuple(a * b for a in u for b in v)


def dot(u, v):
    s = None
    for a, b in zip(u, v, strict=True):
        s = a * b if s is None else s + a * b
    if s is None:
        raise ShapeError("empty dot product")
    return s


# ---------------------------------------------------------------------------
# linear maps

@dataclass(frozen=True)
class LinMap:
    """A linear map between tensor-shaped spaces, as a dense matrix.

    mat[r][c] is the coefficient of codomain basis vector r in the image of
    domain basis vector c (both flat, row-major).
    """

    field: Field
    dom: tuple[int, ...]
    cod: tuple[int, ...]
    mat: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.mat) != prod(self.cod):
            raise ShapeError("row count %d != codomain dim %d" % (len(self.mat), prod(self.cod)))
        for row in self.mat:
            if len(row) != prod(self.dom):
                raise ShapeError("row width %d != domain dim %d" % (len(row), prod(self.dom)))

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_images(field: Field, dom, cod, images: Sequence[Sequence]) -> "LinMap":
        """Build from the images of the domain basis vectors (the columns)."""
        dom, cod = tuple(dom), tuple(cod)
        nr, nc = prod(cod), prod(dom)
        if len(images) != nc:
            raise ShapeError("expected %d basis images, got %d" % (nc, len(images)))
        rows = [[field.zero] * nc for _ in range(nr)]
        for c, img in enumerate(images):
            if len(img) != nr:
                raise ShapeError("image %d has length %d, want %d" % (c, len(img), nr))
            for r, x in enumerate(img):
                rows[r][c] = x
        return LinMap(field, dom, cod, tuple(tuple(r) for r in rows))

    @staticmethod
    def from_rows(field: Field, dom, cod, rows) -> "LinMap":
        return LinMap(field, tuple(dom), tuple(cod), tuple(tuple(r) for r in rows))

    @staticmethod
    def identity(field: Field, shape) -> "LinMap":
        shape = tuple(shape)
        n = prod(shape)
        rows = [[field.zero] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = field.one
        return LinMap(field, shape, shape, tuple(tuple(r) for r in rows))

    @staticmethod
    def zero_map(field: Field, dom, cod) -> "LinMap":
        dom, cod = tuple(dom), tuple(cod)
        return LinMap(field, dom, cod, tuple((field.zero,) * prod(dom) for _ in range(prod(cod))))

    @staticmethod
    def const(field: Field, vec, shape) -> "LinMap":
        """The map k -> shape sending 1 to `vec`."""
        shape = tuple(shape)
        if len(vec) != prod(shape):
            raise ShapeError("vector length %d != shape %r" % (len(vec), shape))
        return LinMap(field, (1,), shape, tuple((x,) for x in vec))

    # -- basic data --------------------------------------------------------

    @property
    def dim_dom(self) -> int:
        return prod(self.dom)

    @property
    def dim_cod(self) -> int:
        return prod(self.cod)

    def column(self, c: int) -> tuple:
        return tuple(row[c] for row in self.mat)

    def is_zero(self) -> bool:
        return all(not x for row in self.mat for x in row)

    def with_shapes(self, dom, cod) -> "LinMap":
        dom, cod = tuple(dom), tuple(cod)
        if prod(dom) != self.dim_dom or prod(cod) != self.dim_cod:
            raise ShapeError("reshape must preserve flat dimensions")
        return LinMap(self.field, dom, cod, self.mat)

    # -- algebra -----------------------------------------------------------

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.dim_dom:
            raise ShapeError("vector length %d != domain dim %d" % (len(vec), self.dim_dom))
        out = [self.field.zero] * self.dim_cod
        for c, x in enumerate(vec):
            if not x:
                continue
            for r, row in enumerate(self.mat):
                m = row[c]
                if m:
                    out[r] = out[r] + m * x
        return tuple(out)

    def compose(self, other: "LinMap") -> "LinMap":
        """self after other.  Defined when flat dimensions agree."""
        if other.dim_cod != self.dim_dom:
            raise ShapeError("compose: %r after %r" % (self.cod, other.cod))
        nr, nc = self.dim_cod, other.dim_dom
        zero = self.field.zero
        out = [[zero] * nc for _ in range(nr)]
        for k, orow in enumerate(other.mat):
            for c, okc in enumerate(orow):
                if not okc:
                    continue
                for r in range(nr):
                    s = self.mat[r][k]
                    if s:
                        out[r][c] = out[r][c] + s * okc
        return LinMap(self.field, other.dom, self.cod, tuple(tuple(r) for r in out))

    def tensor(self, other: "LinMap") -> "LinMap":
        a, b = self, other
        nrb, ncb = b.dim_cod, b.dim_dom
        nr, nc = a.dim_cod * nrb, a.dim_dom * ncb
        zero = a.field.zero
        out = [[zero] * nc for _ in range(nr)]
        for r1, arow in enumerate(a.mat):
            for c1, av in enumerate(arow):
                if not av:
                    continue
                for r2, brow in enumerate(b.mat):
                    orow = out[r1 * nrb + r2]
                    base = c1 * ncb
                    for c2, bv in enumerate(brow):
                        if bv:
                            orow[base + c2] = av * bv
        return LinMap(a.field, a.dom + b.dom, a.cod + b.cod, tuple(tuple(r) for r in out))

    def add(self, other: "LinMap") -> "LinMap":
        if self.dom != other.dom or self.cod != other.cod:
            raise ShapeError("add: shape mismatch")
        return LinMap(self.field, self.dom, self.cod,
                      tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.mat, other.mat)))

    def sub(self, other: "LinMap") -> "LinMap":
        if self.dom != other.dom or self.cod != other.cod:
            raise ShapeError("sub: shape mismatch")
        return LinMap(self.field, self.dom, self.cod,
                      tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self.mat, other.mat)))

    def scale(self, s) -> "LinMap":
        return LinMap(self.field, self.dom, self.cod,
                      tuple(tuple(s * x for x in r) for r in self.mat))

    def transpose(self) -> "LinMap":
        return LinMap(self.field, self.cod, self.dom,
                      tuple(zip(*self.mat)) if self.mat and self.mat[0] else
                      tuple(() for _ in range(self.dim_dom)))

    def rank(self) -> int:
        _, pivots = rref(self.field, [list(r) for r in self.mat])
        return len(pivots)

    def inverse(self) -> Optional["LinMap"]:
        """Exact two-sided inverse, or None if not square/invertible."""
        n = self.dim_dom
        if n != self.dim_cod:
            return None
        one, zero = self.field.one, self.field.zero
        aug = [list(row) + [one if i == j else zero for j in range(n)]
               for i, row in enumerate(self.mat)]
        red, pivots = rref(self.field, aug)
        if pivots != list(range(n)):
            return None
        inv = tuple(tuple(red[i][n:]) for i in range(n))
        return LinMap(self.field, self.cod, self.dom, inv)


def swap_map(field: Field, d1: int, d2: int) -> LinMap:
    """X (x) Y -> Y (x) X on basis vectors."""
    imgs = []
    for i, j in iter_multi((d1, d2)):
        imgs.append(basis_vec(field, d1 * d2, j * d1 + i))
    return LinMap.from_images(field, (d1, d2), (d2, d1), imgs)


# ---------------------------------------------------------------------------
# solving

def rref(field: Field, rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form (first-nonzero pivoting).

    Returns (nonzero rows, pivot column indices).  Input rows are consumed.
    """
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][c]
        if lead != field.one:
            rows[r] = [x / lead for x in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b if b else a for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def solve_linear(field: Field, rows: Sequence[Sequence], rhs: Sequence):
    """Solve M x = b exactly.

    Returns (particular, kernel_basis): `particular` is None when infeasible,
    and `kernel_basis` spans the solution set of M x = 0 either way.  Both
    are verified by substitution before returning.
    """
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    for row in rows:
        if len(row) != ncols:
            raise ShapeError("ragged matrix")
    if len(rhs) != len(rows):
        raise ShapeError("rhs length %d != row count %d" % (len(rhs), len(rows)))
    aug = [row + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(field, aug) if rows else ([], [])
    feasible = ncols not in pivots
    free = [c for c in range(ncols) if c not in pivots]

    kernel = []
    pivot_at = {c: i for i, c in enumerate(pivots) if c < ncols}
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for c, i in pivot_at.items():
            v[c] = -red[i][f]
        kernel.append(tuple(v))

    particular = None
    if feasible:
        x = [field.zero] * ncols
        for c, i in pivot_at.items():
            x[c] = red[i][ncols]
        particular = tuple(x)

    # exact substitution check: solver output is never trusted blindly
    def residual_ok(x, want_rhs):
        for row, b in zip(rows, want_rhs):
            acc = field.zero
            for a, xi in zip(row, x):
                if a and xi:
                    acc = acc + a * xi
            if acc != b:
                return False
        return True

    zero_rhs = [field.zero] * len(rows)
    if particular is not None and not residual_ok(particular, rhs):
        raise InternalCheckError("particular solution failed substitution")
    for v in kernel:
        if not residual_ok(v, zero_rhs):
            raise InternalCheckError("kernel vector failed substitution")
    return particular, kernel


def nullspace(field: Field, rows: Sequence[Sequence]) -> list[tuple]:
    if not rows:
        raise ShapeError("nullspace of empty system is ambiguous; pass explicit zero rows")
    _, kernel = solve_linear(field, rows, [field.zero] * len(rows))
    return kernel


def row_space_basis(field: Field, rows: Sequence[Sequence]) -> list[tuple]:
    red, _ = rref(field, [list(r) for r in rows])
    return [tuple(r) for r in red]


def in_span(field: Field, basis: Sequence[Sequence], vec: Sequence) -> bool:
    """Whether vec lies in the span of `basis` (by exact solve)."""
    if not basis:
        return vec_is_zero(vec)
    cols = [list(b) for b in basis]
    rows = [[cols[j][i] for j in range(len(basis))] for i in range(len(vec))]
    part, _ = solve_linear(field, rows, list(vec))
    return part is not None


@dataclass
class SolutionSpace:
    """A computed linear solution space plus its defining residual check.

    `basis` holds decoded payloads; `residual` maps a payload to a list of
    violated-condition labels (empty list = exact member).  Every basis
    element is re-checked through `residual` at construction time.
    """

    basis: list
    residual: Callable[[object], list]

    def __post_init__(self):
        for i, b in enumerate(self.basis):
            bad = self.residual(b)
            if bad:
                raise InternalCheckError("solution basis element %d violates %r" % (i, bad))

    @property
    def dim(self) -> int:
        return len(self.basis)


def hom_probe_matrix(field: Field, dim_unknown: int, operators: Sequence[Callable[[int], Sequence]]):
    """Stack linear operators on an unknown vector into one constraint matrix.

    Each operator takes the index of an unknown-space basis vector and returns
    the operator's value on it (a vector); rows of the result are constraint
    coordinates, columns are unknowns.
    """
    cols = []
    for j in range(dim_unknown):
        parts = []
        for op in operators:
            parts.extend(op(j))
        cols.append(parts)
    nrows = len(cols[0]) if cols else 0
    if nrows == 0:
        # no constraints: one explicit zero row keeps the unknown count visible
        return [[field.zero] * dim_unknown]
    return [[cols[j][i] for j in range(dim_unknown)] for i in range(nrows)]
