"""Exact linear algebra over the Gaussian rationals Q(i).

Scalars are pairs of `fractions.Fraction`.  Matrices are immutable tuples of
row tuples.  Subspaces are stored via a reduced-row-echelon basis, which is
unique for a given row space, so subspace equality is plain tuple equality
and no tolerance ever enters.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


class GaussianRational:
    """A complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            if im:
                raise TypeError("imaginary part must come from the scalar itself")
            self.re, self.im = re.re, re.im
            return
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def _raw(cls, re, im):
        # hot-path constructor: arguments are already Fractions
        self = object.__new__(cls)
        self.re = re
        self.im = im
        return self

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.im and not other.im:
            return GaussianRational._raw(self.re * other.re, self.im)
        return GaussianRational._raw(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.im:
            if not other.re:
                raise ZeroDivisionError("division by zero scalar")
            return GaussianRational._raw(self.re / other.re, self.im / other.re)
        n2 = other.re * other.re + other.im * other.im
        return GaussianRational._raw(
            (self.re * other.re + self.im * other.im) / n2,
            (self.im * other.re - self.re * other.im) / n2,
        )

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    # -- structure ----------------------------------------------------------

    def conjugate(self):
        return GaussianRational._raw(self.re, -self.im) if self.im else self

    def norm2(self) -> Fraction:
        """Squared modulus, an exact nonnegative rational."""
        return self.re * self.re + self.im * self.im

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * float(self.im)

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i" if self.im != 1 else "i"
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        tail = "i" if mag == 1 else f"{mag}i"
        return f"{self.re}{sign}{tail}"


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    return NotImplemented


def qi(re=0, im=0) -> GaussianRational:
    """Shorthand constructor: qi(1, -2) is 1 - 2i."""
    return GaussianRational(re, im)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def fraction_sqrt(value: Fraction):
    """Exact square root of a nonnegative rational, or None if irrational."""
    value = Fraction(value)
    if value < 0:
        return None
    rn, rd = isqrt(value.numerator), isqrt(value.denominator)
    if rn * rn == value.numerator and rd * rd == value.denominator:
        return Fraction(rn, rd)
    return None


def gauss_sqrt(z: GaussianRational):
    """A square root of z inside Q(i), or None when none exists there.

    With z = a + bi and r = |z|, a root c + di needs c^2 = (a + r)/2 and
    d = b / 2c, so existence reduces to two rational square roots.
    """
    z = GaussianRational(z)
    if not z:
        return ZERO
    r = fraction_sqrt(z.norm2())  # |z|, since norm2 is |z|^2
    if r is None:
        return None
    c = fraction_sqrt((z.re + r) / 2)
    if c is None:
        return None
    if c == 0:
        d = fraction_sqrt(-z.re)
        if d is None:
            return None
        return GaussianRational(0, d)
    return GaussianRational(c, z.im / (2 * c))


# -- vectors ---------------------------------------------------------------


def vec(entries) -> tuple:
    """Normalize an iterable of scalar-likes into a vector tuple."""
    return tuple(GaussianRational(x) if not isinstance(x, GaussianRational) else x
                 for x in entries)


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_scale(c, v):
    c = GaussianRational(c) if not isinstance(c, GaussianRational) else c
    return tuple(c * x for x in v)


def vec_conj(v):
    return tuple(x.conjugate() for x in v)


def vec_is_zero(v):
    return not any(v)


def unit_vector(i, n):
    return tuple(ONE if j == i else ZERO for j in range(n))


def dot(u, v):
    """Plain bilinear dot product — no conjugation."""
    return sum((a * b for a, b in zip(u, v, strict=True)), start=ZERO)


def form_value(q: "Mat", u, v):
    """The bilinear pairing u^T q v given by the Gram matrix q."""
    return dot(u, q.apply(v))


# -- matrices --------------------------------------------------------------


class Mat:
    """Immutable matrix over Q(i)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = tuple(vec(r) for r in rows)
        if self.rows:
            width = len(self.rows[0])
            if any(len(r) != width for r in self.rows):
                raise ValueError("ragged rows")

    @classmethod
    def identity(cls, n):
        return cls([unit_vector(i, n) for i in range(n)])

    @classmethod
    def zeros(cls, m, n=None):
        n = m if n is None else n
        return cls([(ZERO,) * n] * m)

    @classmethod
    def from_cols(cls, cols):
        return cls(cols).transpose()

    @classmethod
    def diag(cls, entries):
        entries = vec(entries)
        n = len(entries)
        return cls([[entries[i] if i == j else ZERO for j in range(n)]
                    for i in range(n)])

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def cols(self):
        return tuple(self.col(j) for j in range(self.ncols))

    def __eq__(self, other):
        return isinstance(other, Mat) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, other):
        return Mat([vec_add(a, b) for a, b in zip(self.rows, other.rows, strict=True)])

    def __sub__(self, other):
        return Mat([vec_sub(a, b) for a, b in zip(self.rows, other.rows, strict=True)])

    def __neg__(self):
        return Mat([vec_scale(-ONE, r) for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Mat):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} * {other.shape}")
            cols = other.cols()
            return Mat([[sum((a * b for a, b in zip(r, c) if a and b), start=ZERO)
                         for c in cols] for r in self.rows])
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = GaussianRational(other)
            return Mat([vec_scale(c, r) for r in self.rows])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self * other
        return NotImplemented

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative powers: use inverse() first")
        out = Mat.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def apply(self, v):
        """Matrix times column vector."""
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), start=ZERO)
                     for r in self.rows)

    def transpose(self):
        return Mat(self.cols())

    def conj(self):
        return Mat([vec_conj(r) for r in self.rows])

    def conj_t(self):
        return self.transpose().conj()

    def trace(self):
        return sum((self.rows[i][i] for i in range(self.nrows)), start=ZERO)

    def is_zero(self):
        return all(vec_is_zero(r) for r in self.rows)

    def det(self):
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        work = [list(r) for r in self.rows]
        n = len(work)
        out = ONE
        for col in range(n):
            piv = next((r for r in range(col, n) if work[r][col]), None)
            if piv is None:
                return ZERO
            if piv != col:
                work[col], work[piv] = work[piv], work[col]
                out = -out
            out = out * work[col][col]
            inv = ONE / work[col][col]
            for r in range(col + 1, n):
                if work[r][col]:
                    f = work[r][col] * inv
                    work[r] = [a - f * b for a, b in zip(work[r], work[col])]
        return out

    def inverse(self):
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        aug = [list(r) + list(unit_vector(i, n)) for i, r in enumerate(self.rows)]
        red, pivots = rref(aug)
        if len(pivots) < n or any(p >= n for p in pivots[:n]):
            raise ValueError("matrix is singular")
        return Mat([r[n:] for r in red])

    def rank(self):
        return len(rref(self.rows)[1])

    def submatrix(self, row_idx, col_idx):
        return Mat([[self.rows[i][j] for j in col_idx] for i in row_idx])

    def to_complex_rows(self):
        """Rows as python complex, for handing off to float code."""
        return [[x.to_complex() for x in r] for r in self.rows]

    def __repr__(self):
        body = "; ".join(" ".join(repr(x) for x in r) for r in self.rows)
        return f"Mat[{body}]"


def commutator(a: Mat, b: Mat) -> Mat:
    return a * b - b * a


def nilpotent_exp(n: Mat) -> Mat:
    """exp of a nilpotent matrix: the Taylor series, which terminates."""
    out = Mat.identity(n.nrows)
    term = Mat.identity(n.nrows)
    k = 1
    while True:
        term = term * n
        if term.is_zero():
            return out
        out = out + term * Fraction(1, _factorial(k))
        k += 1
        if k > n.nrows:
            raise ValueError("matrix is not nilpotent")


def apply_nilpotent_exp(n: Mat, v, scale=1):
    """exp(scale * n) applied to a vector, without forming the matrix."""
    scale = GaussianRational(scale) if not isinstance(scale, GaussianRational) else scale
    out = list(v)
    term = tuple(v)
    k = 1
    while True:
        term = vec_scale(scale * Fraction(1, k), n.apply(term))
        if vec_is_zero(term):
            return tuple(out)
        out = [a + b for a, b in zip(out, term)]
        k += 1
        if k > n.nrows + 1:
            raise ValueError("matrix is not nilpotent")


def _factorial(k):
    out = 1
    for j in range(2, k + 1):
        out *= j
    return out


# -- elimination -----------------------------------------------------------


def rref(rows):
    """Reduced row echelon form.

    Returns (reduced_rows, pivot_columns) with zero rows dropped, pivots
    normalized to 1 and cleared above and below.  The result depends only on
    the row space.
    """
    work = [list(vec(r)) for r in rows]
    if not work:
        return (), ()
    ncols = len(work[0])
    pivots = []
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, len(work)) if work[r][col]), None)
        if piv is None:
            continue
        work[row], work[piv] = work[piv], work[row]
        lead = work[row][col]
        if lead != ONE:
            inv = ONE / lead
            work[row] = [x if not x else inv * x for x in work[row]]
        for r in range(len(work)):
            if r != row and work[r][col]:
                f = work[r][col]
                work[r] = [a if not b else a - f * b
                           for a, b in zip(work[r], work[row])]
        pivots.append(col)
        row += 1
        if row == len(work):
            break
    return tuple(tuple(r) for r in work[:row]), tuple(pivots)


def solve(mat: Mat, rhs):
    """One solution x of mat @ x = rhs, or None if the system is infeasible."""
    rhs = vec(rhs)
    aug = [list(r) + [b] for r, b in zip(mat.rows, rhs, strict=True)]
    red, pivots = rref(aug)
    n = mat.ncols
    if n in pivots:
        return None
    x = [ZERO] * n
    for r, p in zip(red, pivots):
        x[p] = r[n]
    return tuple(x)


def kernel(mat: Mat) -> "Subspace":
    """Kernel of the linear map given by mat (acting on column vectors)."""
    red, pivots = rref(mat.rows)
    n = mat.ncols
    pivset = set(pivots)
    basis = []
    for free in range(n):
        if free in pivset:
            continue
        v = [ZERO] * n
        v[free] = ONE
        for r, p in zip(red, pivots):
            v[p] = -r[free]
        basis.append(tuple(v))
    return Subspace(n, basis)


def image(mat: Mat) -> "Subspace":
    return Subspace(mat.nrows, mat.cols())


# -- subspaces -------------------------------------------------------------


class Subspace:
    """A linear subspace of Q(i)^n with a canonical echelon basis."""

    __slots__ = ("ambient", "rows")

    def __init__(self, ambient, vectors=()):
        self.ambient = int(ambient)
        rows, _ = rref(vectors)
        for r in rows:
            if len(r) != self.ambient:
                raise ValueError("vector length differs from ambient dimension")
        self.rows = rows

    @classmethod
    def zero(cls, ambient):
        return cls(ambient, ())

    @classmethod
    def full(cls, ambient):
        return cls(ambient, Mat.identity(ambient).rows)

    @property
    def dim(self):
        return len(self.rows)

    @property
    def basis(self):
        return self.rows

    def __eq__(self, other):
        return (isinstance(other, Subspace)
                and self.ambient == other.ambient
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.ambient, self.rows))

    def contains_vector(self, v):
        v = list(vec(v))
        if len(v) != self.ambient:
            raise ValueError("vector length differs from ambient dimension")
        for r in self.rows:
            p = next(j for j, x in enumerate(r) if x)
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, r)]
        return not any(v)

    def contains(self, other: "Subspace"):
        return all(self.contains_vector(r) for r in other.rows)

    def __le__(self, other):
        return other.contains(self)

    def __add__(self, other):
        if self.ambient != other.ambient:
            raise ValueError("ambient dimensions differ")
        return Subspace(self.ambient, self.rows + other.rows)

    def intersect(self, other: "Subspace"):
        """Zassenhaus: row-reduce [A|A; B|0]; zero-left rows carry A∩B."""
        if self.ambient != other.ambient:
            raise ValueError("ambient dimensions differ")
        n = self.ambient
        z = (ZERO,) * n
        block = [r + r for r in self.rows] + [r + z for r in other.rows]
        red, _ = rref(block)
        inter = [r[n:] for r in red if not any(r[:n])]
        return Subspace(n, inter)

    def __and__(self, other):
        return self.intersect(other)

    def conj(self):
        return Subspace(self.ambient, [vec_conj(r) for r in self.rows])

    def apply(self, mat: Mat):
        """Image of this subspace under mat."""
        return Subspace(mat.nrows, [mat.apply(r) for r in self.rows])

    def coords(self, v):
        """Coordinates of v in the echelon basis, or None if v lies outside."""
        x = solve(Mat.from_cols(self.rows), v) if self.rows else None
        if x is None and self.rows:
            return None
        if not self.rows:
            return () if vec_is_zero(vec(v)) else None
        return x

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient})"


def extend_basis(inner: Subspace, outer: Subspace):
    """Vectors from outer's basis extending a basis of inner inside outer."""
    if not outer.contains(inner):
        raise ValueError("inner is not contained in outer")
    chosen = []
    current = inner
    for r in outer.rows:
        if not current.contains_vector(r):
            chosen.append(r)
            current = current + Subspace(outer.ambient, [r])
    return tuple(chosen)


def hermitian_positive_definite(gram: Mat) -> bool:
    """Sylvester test for an exact Hermitian Gram matrix."""
    if gram != gram.conj_t():
        raise ValueError("matrix is not Hermitian")
    n = gram.nrows
    for k in range(1, n + 1):
        minor = gram.submatrix(range(k), range(k)).det()
        if minor.im:
            raise ArithmeticError("principal minor of a Hermitian matrix must be real")
        if minor.re <= 0:
            return False
    return True
