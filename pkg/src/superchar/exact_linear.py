"""Exact rational scalars, dense matrices and subspaces.

Matrices wrap ``flint.fmpq_mat``; everything that leaves this module as a
single number is a :class:`fractions.Fraction`.  Row reduction always goes
through the reduced row echelon form, which is canonical, so kernels and
subspace bases are reproducible bit for bit.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from flint import fmpq, fmpq_mat

from .errors import NotInvariant, NotScalar

Scalar = Fraction


def to_fmpq(x) -> fmpq:
    if isinstance(x, fmpq):
        return x
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, int):
        return fmpq(x)
    raise TypeError(f"not an exact rational: {x!r}")


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def parse_scalar(text: str) -> Fraction:
    """Parse ``"3"``, ``"-1/2"`` or ``"3/2"``; floats are rejected."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    num, _, den = text.partition("/")
    try:
        n = int(num)
        d = int(den) if den else 1
    except ValueError:
        raise ValueError(f"bad rational {text!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(n, d)


def format_scalar(x) -> str:
    return str(to_fraction(x))


class Matrix:
    """Dense exact rational matrix (immutable by convention)."""

    __slots__ = ("_m",)

    def __init__(self, raw: fmpq_mat):
        self._m = raw

    # construction

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(fmpq_mat(rows, cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        m = fmpq_mat(n, n)
        for i in range(n):
            m[i, i] = 1
        return cls(m)

    @classmethod
    def scalar(cls, n: int, c) -> "Matrix":
        m = fmpq_mat(n, n)
        c = to_fmpq(c)
        for i in range(n):
            m[i, i] = c
        return cls(m)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = [to_fmpq(x) for row in rows for x in row]
        if len(flat) != r * c:
            raise ValueError("ragged rows")
        return cls(fmpq_mat(r, c, flat))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], rows: int | None = None) -> "Matrix":
        if not cols:
            return cls.zeros(rows or 0, 0)
        return cls.from_rows(cols).T

    @classmethod
    def from_sparse(cls, rows: int, cols: int, entries: dict) -> "Matrix":
        m = fmpq_mat(rows, cols)
        for (i, j), v in entries.items():
            if v:
                m[i, j] = to_fmpq(v)
        return cls(m)

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        m = fmpq_mat(n, n)
        for i, v in enumerate(values):
            m[i, i] = to_fmpq(v)
        return cls(m)

    # shape and access

    @property
    def rows(self) -> int:
        return self._m.nrows()

    @property
    def cols(self) -> int:
        return self._m.ncols()

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def raw(self) -> fmpq_mat:
        return self._m

    def __getitem__(self, ij) -> Fraction:
        return to_fraction(self._m[ij])

    def entries(self) -> list[Fraction]:
        return [to_fraction(x) for x in self._m.entries()]

    def tolist(self) -> list[list[Fraction]]:
        e = self.entries()
        c = self.cols
        return [e[i * c:(i + 1) * c] for i in range(self.rows)]

    def column(self, j: int) -> list[Fraction]:
        return [self[i, j] for i in range(self.rows)]

    def take_rows(self, idx: Sequence[int]) -> "Matrix":
        e = self._m.entries()
        c = self.cols
        flat = [e[i * c + j] for i in idx for j in range(c)]
        return Matrix(fmpq_mat(len(idx), c, flat))

    def take_cols(self, idx: Sequence[int]) -> "Matrix":
        e = self._m.entries()
        c = self.cols
        flat = [e[i * c + j] for i in range(self.rows) for j in idx]
        return Matrix(fmpq_mat(self.rows, len(idx), flat))

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        e = self._m.entries()
        c = self.cols
        flat = [e[i * c + j] for i in range(r0, r1) for j in range(c0, c1)]
        return Matrix(fmpq_mat(r1 - r0, c1 - c0, flat))

    # arithmetic

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(self._m + other._m)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(self._m - other._m)

    def __neg__(self) -> "Matrix":
        return Matrix(-self._m)

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            return NotImplemented
        return Matrix(self._m * to_fmpq(c))

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return Matrix(self._m * other._m)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._m == other._m

    def __hash__(self):
        return hash((self.shape, tuple(str(x) for x in self._m.entries())))

    def __repr__(self) -> str:
        return f"Matrix({self.tolist()!r})"

    @property
    def T(self) -> "Matrix":
        return Matrix(self._m.transpose())

    def is_zero(self) -> bool:
        return not bool(self._m)

    def trace(self) -> Fraction:
        return sum((self[i, i] for i in range(min(self.shape))), Fraction(0))

    def rank(self) -> int:
        return self._m.rref()[1]

    def inverse(self) -> "Matrix":
        return Matrix(self._m.inv())

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and its pivot columns."""
        r, rank = self._m.rref()
        c = self.cols
        e = r.entries()
        pivots = []
        col = 0
        for i in range(rank):
            while e[i * c + col] == 0:
                col += 1
            pivots.append(col)
        return Matrix(r), pivots

    def is_scalar_multiple_of_identity(self):
        """Return the scalar ``c`` if ``self == c*I``, else ``None``."""
        if self.rows != self.cols:
            return None
        if self.rows == 0:
            return None
        c = self._m[0, 0]
        if self._m == Matrix.scalar(self.rows, c)._m:
            return to_fraction(c)
        return None


def hstack(mats: Sequence[Matrix]) -> Matrix:
    mats = list(mats)
    rows = mats[0].rows
    cols = sum(m.cols for m in mats)
    out = fmpq_mat(rows, cols)
    off = 0
    for m in mats:
        e = m._m.entries()
        c = m.cols
        for i in range(rows):
            for j in range(c):
                x = e[i * c + j]
                if x:
                    out[i, off + j] = x
        off += c
    return Matrix(out)


def vstack(mats: Sequence[Matrix]) -> Matrix:
    return hstack([m.T for m in mats]).T


def block_matrix(blocks: Sequence[Sequence[Matrix]]) -> Matrix:
    return vstack([hstack(row) for row in blocks])


class Subspace:
    """Span of linearly independent columns, stored in reduced column echelon form."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: Matrix, pivots: list[int]):
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, vectors: Matrix) -> "Subspace":
        """Canonical subspace spanned by the columns of ``vectors``."""
        n = vectors.rows
        if vectors.cols == 0:
            return cls(n, Matrix.zeros(n, 0), [])
        r, pivots = vectors.T.rref()
        k = len(pivots)
        return cls(n, r.take_rows(range(k)).T, pivots)

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(n, Matrix.identity(n), list(range(n)))

    @classmethod
    def coordinate(cls, n: int, idx: Iterable[int]) -> "Subspace":
        idx = sorted(idx)
        cols = [[1 if i == j else 0 for i in range(n)] for j in idx]
        return cls(n, Matrix.from_columns(cols, n), idx)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def coordinates(self, vectors: Matrix) -> Matrix:
        """Coordinates ``C`` with ``basis @ C == vectors``; NotInvariant if outside."""
        coords = vectors.take_rows(self.pivots)
        if self.basis @ coords != vectors:
            raise NotInvariant("vectors leave the subspace")
        return coords

    def contains(self, vectors: Matrix) -> bool:
        try:
            self.coordinates(vectors)
        except NotInvariant:
            return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel_basis(m: Matrix) -> Subspace:
    """Basis of ``{v : m v = 0}``."""
    n = m.cols
    if m.rows == 0:
        return Subspace.whole(n)
    r, pivots = m.rref()
    free = [j for j in range(n) if j not in set(pivots)]
    e = r.raw
    vecs = []
    for f in free:
        v = [fmpq(0)] * n
        v[f] = fmpq(1)
        for i, p in enumerate(pivots):
            v[p] = -e[i, f]
        vecs.append(v)
    if not vecs:
        return Subspace(n, Matrix.zeros(n, 0), [])
    return Subspace.span(Matrix(fmpq_mat(len(vecs), n, [x for v in vecs for x in v])).T)


def restrict_operator(m: Matrix, s: Subspace) -> Matrix:
    """Matrix of ``m`` on ``span(s)`` in the basis of ``s``."""
    if m.rows != m.cols or m.cols != s.ambient_dim:
        raise ValueError("operator does not act on the ambient space of the subspace")
    try:
        return s.coordinates(m @ s.basis)
    except NotInvariant:
        raise NotInvariant("operator does not preserve the subspace") from None


def scalar_of_restricted(t: Matrix, s: Subspace) -> Fraction:
    """Scalar ``c`` with ``t == c * s.basis`` for a map ``t`` from span(s) into the ambient space."""
    c = s.coordinates(t).is_scalar_multiple_of_identity()
    if c is None:
        raise NotScalar("restriction is not a multiple of the identity")
    return c


def scalar_on_subspace(m: Matrix, s: Subspace) -> Fraction:
    """Scalar by which ``m`` acts on ``span(s)``."""
    if s.dim == 0:
        raise NotScalar("empty subspace carries no scalar")
    c = restrict_operator(m, s).is_scalar_multiple_of_identity()
    if c is None:
        raise NotScalar("restriction is not a multiple of the identity")
    return c
