"""Exact rational linear algebra.

Everything here works over :class:`fractions.Fraction`.  Matrices are small
and dense, immutable after construction, and every routine is a pure
function of its inputs.  Row reduction is plain Gaussian elimination; no
pivoting heuristics are needed because arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Scalar = Fraction

__all__ = [
    "Scalar",
    "to_scalar",
    "Matrix",
    "Subspace",
    "QuotientChart",
    "AffineSolutionSet",
    "DimensionError",
    "rref",
    "rank",
    "kernel",
    "image",
    "solve_affine",
    "quotient_chart",
]


class DimensionError(ValueError):
    """Raised when operand shapes do not fit together."""


def to_scalar(value) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Accepts ints, Fractions and strings such as ``"3"`` or ``"-2/5"``.
    Floats are refused: there is no exact pathway from a float.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational")
        num, sep, den = text.partition("/")
        try:
            n = int(num)
            d = int(den) if sep else 1
        except ValueError:
            raise ValueError(f"malformed rational {value!r}") from None
        if d == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return Fraction(n, d)
    raise TypeError(f"cannot make an exact rational from {type(value).__name__}")


class Matrix:
    """Immutable dense matrix of Fractions.

    ``Matrix(rows)`` takes a nested sequence; a matrix with zero rows still
    remembers its column count via ``Matrix.zeros``.
    """

    __slots__ = ("_rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable] = (), ncols: int | None = None):
        data = tuple(tuple(to_scalar(x) for x in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise DimensionError("ragged rows")
            if ncols is not None and ncols != width:
                raise DimensionError("ncols disagrees with row width")
        else:
            width = ncols or 0
        _set = object.__setattr__
        _set(self, "_rows", data)
        _set(self, "nrows", len(data))
        _set(self, "ncols", width)
        _set(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # construction -----------------------------------------------------
    @classmethod
    def _raw(cls, rows: tuple, nrows: int, ncols: int) -> "Matrix":
        m = object.__new__(cls)
        _set = object.__setattr__
        _set(m, "_rows", rows)
        _set(m, "nrows", nrows)
        _set(m, "ncols", ncols)
        _set(m, "_hash", None)
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        z = Fraction(0)
        return cls._raw(tuple((z,) * ncols for _ in range(nrows)), nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        one, z = Fraction(1), Fraction(0)
        return cls._raw(
            tuple(tuple(one if i == j else z for j in range(n)) for i in range(n)), n, n
        )

    @classmethod
    def unit(cls, nrows: int, ncols: int, i: int, j: int) -> "Matrix":
        """Elementary matrix with a single 1 at ``(i, j)``."""
        rows = [[Fraction(0)] * ncols for _ in range(nrows)]
        rows[i][j] = Fraction(1)
        return cls._raw(tuple(tuple(r) for r in rows), nrows, ncols)

    @classmethod
    def column(cls, values: Sequence) -> "Matrix":
        return cls([[v] for v in values], ncols=1)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        cols = [tuple(to_scalar(x) for x in c) for c in columns]
        if not cols:
            return cls.zeros(nrows or 0, 0)
        height = len(cols[0])
        if any(len(c) != height for c in cols) or (nrows is not None and nrows != height):
            raise DimensionError("columns of unequal length")
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(height)), height, len(cols))

    @classmethod
    def from_flat(cls, values: Sequence, nrows: int, ncols: int) -> "Matrix":
        """Inverse of :meth:`flat` (row-major)."""
        if len(values) != nrows * ncols:
            raise DimensionError("flat data has the wrong length")
        vals = [to_scalar(v) for v in values]
        return cls._raw(
            tuple(tuple(vals[i * ncols:(i + 1) * ncols]) for i in range(nrows)), nrows, ncols
        )

    @classmethod
    def hstack(cls, *blocks: "Matrix") -> "Matrix":
        if not blocks:
            raise DimensionError("nothing to stack")
        h = blocks[0].nrows
        if any(b.nrows != h for b in blocks):
            raise DimensionError("hstack row mismatch")
        width = sum(b.ncols for b in blocks)
        rows = tuple(sum((b._rows[i] for b in blocks), ()) for i in range(h))
        return cls._raw(rows, h, width)

    @classmethod
    def vstack(cls, *blocks: "Matrix") -> "Matrix":
        if not blocks:
            raise DimensionError("nothing to stack")
        w = blocks[0].ncols
        if any(b.ncols != w for b in blocks):
            raise DimensionError("vstack column mismatch")
        rows = sum((b._rows for b in blocks), ())
        return cls._raw(rows, len(rows), w)

    @classmethod
    def block_diag(cls, *blocks: "Matrix") -> "Matrix":
        n = sum(b.nrows for b in blocks)
        m = sum(b.ncols for b in blocks)
        rows = [[Fraction(0)] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    rows[r0 + i][c0 + j] = b._rows[i][j]
            r0 += b.nrows
            c0 += b.ncols
        return cls._raw(tuple(tuple(r) for r in rows), n, m)

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.col(j) for j in range(self.ncols)]

    def flat(self) -> tuple[Fraction, ...]:
        return sum(self._rows, ())

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(
            tuple(tuple(self._rows[i][j] for j in cols) for i in rows), len(rows), len(cols)
        )

    def cols_slice(self, start: int, stop: int) -> "Matrix":
        return self.submatrix(range(self.nrows), range(start, stop))

    def rows_slice(self, start: int, stop: int) -> "Matrix":
        return self.submatrix(range(start, stop), range(self.ncols))

    # arithmetic ---------------------------------------------------------
    def _check_same(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.nrows, self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.nrows, self.ncols,
        )

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self._rows), self.nrows, self.ncols)

    def scale(self, c) -> "Matrix":
        c = to_scalar(c)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self._rows), self.nrows, self.ncols)

    def __mul__(self, c) -> "Matrix":
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        return Matrix._raw(
            tuple(tuple(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in cols)
                  for r in self._rows),
            self.nrows, other.ncols,
        )

    def apply(self, vec: Sequence) -> tuple[Fraction, ...]:
        """Matrix-vector product on a plain coordinate tuple."""
        if len(vec) != self.ncols:
            raise DimensionError(f"vector of length {len(vec)} for {self.shape} matrix")
        return tuple(sum((a * b for a, b in zip(r, vec) if a and b), Fraction(0)) for r in self._rows)

    def commutator(self, other: "Matrix") -> "Matrix":
        return self @ other - other @ self

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(tuple(zip(*self._rows)) if self.nrows else (), self.ncols, self.nrows) \
            if self.nrows else Matrix.zeros(self.ncols, 0)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._rows)

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise DimensionError("only square matrices are invertible")
        n = self.nrows
        red, piv = rref(Matrix.hstack(self, Matrix.identity(n)))
        if piv[:n] != list(range(n)) or len([p for p in piv if p < n]) != n:
            raise ValueError("matrix is singular")
        return red.submatrix(range(n), range(n, 2 * n))

    # comparison ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.shape, self._rows)))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self._rows]


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    rows = [list(r) for r in m.rows]
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        pr = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return Matrix._raw(tuple(tuple(x) for x in rows), nrows, ncols), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


@dataclass(frozen=True)
class Subspace:
    """Subspace of ``Q^ambient_dim`` spanned by the independent columns of ``basis``."""

    ambient_dim: int
    basis: Matrix

    def __post_init__(self):
        if self.basis.nrows != self.ambient_dim:
            raise DimensionError("basis height differs from ambient dimension")
        if rank(self.basis) != self.basis.ncols:
            raise ValueError("subspace basis is not linearly independent")

    @classmethod
    def span(cls, ambient_dim: int, vectors: Sequence[Sequence]) -> "Subspace":
        """Subspace spanned by arbitrary (possibly dependent) vectors."""
        if not vectors:
            return cls(ambient_dim, Matrix.zeros(ambient_dim, 0))
        return image(Matrix.from_columns(vectors, nrows=ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.ncols

    def vectors(self) -> list[tuple[Fraction, ...]]:
        return self.basis.columns()

    def contains(self, vec: Sequence) -> bool:
        v = Matrix.column(vec)
        return rank(Matrix.hstack(self.basis, v)) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        return rank(Matrix.hstack(self.basis, other.basis)) == self.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.dim == other.dim
                and self.contains_subspace(other))

    __hash__ = None


def kernel(m: Matrix) -> Subspace:
    """Basis of the null space, one vector per free column of the RREF."""
    red, piv = rref(m)
    n = m.ncols
    free = [c for c in range(n) if c not in piv]
    vecs = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, p in enumerate(piv):
            v[p] = -red[r, f]
        vecs.append(v)
    return Subspace(n, Matrix.from_columns(vecs, nrows=n))


def image(m: Matrix) -> Subspace:
    """Column space, using the pivot columns of ``m`` itself as basis."""
    _, piv = rref(m)
    return Subspace(m.nrows, m.submatrix(range(m.nrows), piv))


@dataclass(frozen=True)
class AffineSolutionSet:
    """``particular + span(homogeneous)``, or the empty set."""

    empty: bool
    particular: tuple[Fraction, ...] | None
    homogeneous: Subspace

    @property
    def dim(self) -> int | None:
        return None if self.empty else self.homogeneous.dim

    def contains(self, vec: Sequence) -> bool:
        if self.empty:
            return False
        diff = [to_scalar(a) - b for a, b in zip(vec, self.particular)]
        return len(vec) == len(self.particular) and self.homogeneous.contains(diff)

    def element(self, coefficients: Sequence) -> tuple[Fraction, ...]:
        """Particular solution shifted by a combination of homogeneous vectors."""
        if self.empty:
            raise ValueError("empty solution set has no elements")
        if len(coefficients) != self.homogeneous.dim:
            raise DimensionError("wrong number of coefficients")
        shift = self.homogeneous.basis.apply([to_scalar(c) for c in coefficients])
        return tuple(p + s for p, s in zip(self.particular, shift))


def solve_affine(a: Matrix, b: Sequence) -> AffineSolutionSet:
    """All solutions of ``a x = b``."""
    if len(b) != a.nrows:
        raise DimensionError(f"right-hand side has {len(b)} entries, matrix has {a.nrows} rows")
    aug = Matrix.hstack(a, Matrix.column(b)) if a.nrows else Matrix.zeros(0, a.ncols + 1)
    red, piv = rref(aug)
    hom = kernel(a)
    if a.ncols in piv:
        return AffineSolutionSet(True, None, hom)
    x = [Fraction(0)] * a.ncols
    for r, p in enumerate(piv):
        x[p] = red[r, a.ncols]
    return AffineSolutionSet(False, tuple(x), hom)


@dataclass(frozen=True)
class QuotientChart:
    """Coordinates on ``Q^ambient / sub`` with a chosen complement.

    ``projection @ section`` is the identity of the quotient and
    ``projection @ sub.basis`` vanishes.
    """

    ambient_dim: int
    subspace: Subspace
    projection: Matrix
    section: Matrix

    @property
    def quotient_dim(self) -> int:
        return self.ambient_dim - self.subspace.dim

    def check(self) -> list[str]:
        problems = []
        q = self.quotient_dim
        if self.projection.shape != (q, self.ambient_dim) or self.section.shape != (self.ambient_dim, q):
            return ["projection/section shapes are inconsistent"]
        if self.projection @ self.section != Matrix.identity(q):
            problems.append("projection o section is not the identity")
        if not (self.projection @ self.subspace.basis).is_zero():
            problems.append("projection does not kill the subspace")
        return problems


def quotient_chart(ambient_dim: int, sub: Subspace, section: Matrix | None = None) -> QuotientChart:
    """Chart for ``Q^ambient_dim / sub``.

    By default the complement is spanned by the standard basis vectors at
    the non-pivot columns of the RREF of ``sub``'s basis (as rows).  An
    explicit ``section`` may be supplied; it must span a complement.
    """
    if sub.ambient_dim != ambient_dim:
        raise DimensionError("subspace lives in a different ambient space")
    if section is None:
        if sub.dim:
            _, piv = rref(sub.basis.T)
        else:
            piv = []
        free = [c for c in range(ambient_dim) if c not in piv]
        section = Matrix.from_columns(
            [[1 if i == f else 0 for i in range(ambient_dim)] for f in free], nrows=ambient_dim
        )
    elif section.nrows != ambient_dim or section.ncols != ambient_dim - sub.dim:
        raise DimensionError("section has the wrong shape")
    full = Matrix.hstack(sub.basis, section)
    try:
        inv = full.inverse()
    except ValueError:
        raise ValueError("section does not span a complement of the subspace") from None
    projection = inv.rows_slice(sub.dim, ambient_dim)
    return QuotientChart(ambient_dim, sub, projection, section)
