"""Exact linear algebra over the rationals.

Matrices are immutable and dense; subspaces are stored by their reduced row
echelon basis so that equal subspaces compare equal structurally.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from fractions import Fraction

Rational = Fraction


class DimensionError(ValueError):
    pass


def Q(x) -> Fraction:
    """Coerce ints, strings like "3/4" and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use exact rationals")
    return Fraction(x)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    num, _, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if den else 1
    except ValueError:
        raise ValueError(f"not a rational: {text!r}") from None
    if q <= 0:
        raise ValueError(f"denominator must be positive: {text!r}")
    return Fraction(p, q)


def format_rational(x: Fraction) -> str:
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Matrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("_data", "_hash", "cols", "rows")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(Q(v) for v in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise DimensionError("ragged matrix")
        else:
            width = cols or 0
        if cols is not None and rows and width != cols:
            raise DimensionError("column count mismatch")
        self._data = rows
        self.rows = len(rows)
        self.cols = width
        self._hash = None

    # construction helpers
    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        z = Fraction(0)
        return cls(((z,) * cols for _ in range(rows)), cols=cols)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls(([Fraction(int(i == j)) for j in range(n)] for i in range(n)), cols=n)

    @classmethod
    def column(cls, vec: Sequence) -> Matrix:
        return cls(([v] for v in vec), cols=1)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> Matrix:
        if not columns:
            return cls.zeros(rows or 0, 0)
        return cls(zip(*columns), cols=len(columns))

    @classmethod
    def diag(cls, entries: Sequence) -> Matrix:
        n = len(entries)
        return cls(([entries[i] if i == j else 0 for j in range(n)] for i in range(n)), cols=n)

    @classmethod
    def block(cls, blocks: Sequence[Sequence[Matrix]]) -> Matrix:
        out = []
        for brow in blocks:
            height = brow[0].rows
            for i in range(height):
                line = []
                for b in brow:
                    if b.rows != height:
                        raise DimensionError("block heights differ")
                    line.extend(b._data[i])
                out.append(line)
        width = sum(b.cols for b in blocks[0]) if blocks else 0
        return cls(out, cols=width)

    # access
    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def __iter__(self):
        return iter(self._data)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> Matrix:
        return Matrix(zip(*self._data), cols=self.rows) if self.rows else Matrix.zeros(self.cols, 0)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix(([self._data[i][j] for j in cols] for i in rows), cols=len(cols))

    # arithmetic
    def _check_same(self, other: Matrix):
        if self.shape != other.shape:
            raise DimensionError(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix((tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), cols=self.cols)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix((tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), cols=self.cols)

    def __neg__(self) -> Matrix:
        return Matrix((tuple(-a for a in r) for r in self._data), cols=self.cols)

    def __mul__(self, scalar) -> Matrix:
        s = Q(scalar)
        return Matrix((tuple(s * a for a in r) for r in self._data), cols=self.cols)

    __rmul__ = __mul__

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.T._data
        return Matrix(
            (tuple(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in cols) for r in self._data),
            cols=other.cols,
        )

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.cols:
            raise DimensionError("vector length mismatch")
        return tuple(sum((a * b for a, b in zip(r, vec) if a and b), Fraction(0)) for r in self._data)

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, self._data))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(v) for v in r) for r in self._data)
        return f"Matrix[{self.rows}x{self.cols}]({body})"

    def is_zero(self) -> bool:
        return all(v == 0 for r in self._data for v in r)

    # derived quantities
    def rank(self) -> int:
        return rref(self)[1]

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise DimensionError("determinant of a non-square matrix")
        a = self.tolist()
        n = self.rows
        det = Fraction(1)
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                return Fraction(0)
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            det *= a[c][c]
            for r in range(c + 1, n):
                if a[r][c]:
                    f = a[r][c] / a[c][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return det

    def inverse(self) -> Matrix:
        if self.rows != self.cols:
            raise DimensionError("inverse of a non-square matrix")
        n = self.rows
        aug = Matrix.block([[self, Matrix.identity(n)]])
        red, rank = rref(aug)
        if rank < n or any(red[i, i] != 1 for i in range(n)):
            raise ZeroDivisionError("matrix is singular")
        return red.submatrix(range(n), range(n, 2 * n))

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows


def _rref_rows(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(a):
            break
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        lead = a[r][c]
        if lead != 1:
            a[r] = [x / lead for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: Matrix) -> tuple[Matrix, int]:
    """Reduced row echelon form and rank."""
    rows, pivots = _rref_rows(m.tolist(), m.cols)
    return Matrix(rows, cols=m.cols), len(pivots)


def pivot_columns(m: Matrix) -> list[int]:
    return _rref_rows(m.tolist(), m.cols)[1]


def kernel(m: Matrix) -> Subspace:
    """The subspace {x : m x = 0}."""
    n = m.cols
    rows, pivots = _rref_rows(m.tolist(), n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -rows[i][f]
        basis.append(v)
    return Subspace(basis, n)


def image(m: Matrix) -> Subspace:
    """Column space of m."""
    return Subspace(m.T.tolist(), m.rows)


def solve_all(a: Matrix, b: Matrix) -> tuple[Matrix, list[Subspace]] | None:
    """All solutions of a x = b.

    Returns a particular solution and, for convenience, the kernel of a (the
    same for every column of b), or None when inconsistent.
    """
    if a.rows != b.rows:
        raise DimensionError("a.rows must equal b.rows")
    n = a.cols
    aug = Matrix.block([[a, b]]) if a.rows else Matrix.zeros(0, n + b.cols)
    rows, pivots = _rref_rows(aug.tolist(), aug.cols)
    if any(p >= n for p in pivots):
        return None
    x = [[Fraction(0)] * b.cols for _ in range(n)]
    for i, p in enumerate(pivots):
        for j in range(b.cols):
            x[p][j] = rows[i][n + j]
    return Matrix(x, cols=b.cols), kernel(a)


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    res = solve_all(a, b)
    return None if res is None else res[0]


class Subspace:
    """A subspace of Q^n held as a canonical RREF basis (rows)."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, vectors: Iterable[Sequence], ambient_dim: int):
        vecs = [[Q(x) for x in v] for v in vectors]
        if any(len(v) != ambient_dim for v in vecs):
            raise DimensionError("vector length differs from ambient dimension")
        rows, pivots = _rref_rows(vecs, ambient_dim)
        self.ambient_dim = ambient_dim
        self.basis = Matrix(rows[: len(pivots)], cols=ambient_dim)
        self.pivots = tuple(pivots)

    @classmethod
    def zero(cls, n: int) -> Subspace:
        return cls([], n)

    @classmethod
    def full(cls, n: int) -> Subspace:
        return cls(Matrix.identity(n).tolist(), n)

    @classmethod
    def coordinates(cls, indices: Iterable[int], n: int) -> Subspace:
        return cls([[int(i == k) for i in range(n)] for k in indices], n)

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> list[tuple]:
        return [self.basis.row(i) for i in range(self.dim)]

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis={self.basis!r})"

    def __add__(self, other: Subspace) -> Subspace:
        return subspace_sum(self, other)

    def __and__(self, other: Subspace) -> Subspace:
        return intersect(self, other)

    def __le__(self, other: Subspace) -> bool:
        return other.contains_space(self)

    def contains(self, vec: Sequence) -> bool:
        if len(vec) != self.ambient_dim:
            raise DimensionError("vector length differs from ambient dimension")
        return Subspace(self.vectors() + [vec], self.ambient_dim).dim == self.dim

    def contains_space(self, other: Subspace) -> bool:
        _check_ambient(self, other)
        return subspace_sum(self, other).dim == self.dim

    def coordinates_of(self, vec: Sequence) -> tuple:
        """Coefficients of vec in the RREF basis; raises if vec is outside."""
        coeffs = tuple(Q(vec[p]) for p in self.pivots)
        recon = [sum((c * b[j] for c, b in zip(coeffs, self.vectors())), Fraction(0)) for j in range(self.ambient_dim)]
        if any(x != Q(y) for x, y in zip(recon, vec)):
            raise ValueError("vector is not in the subspace")
        return coeffs

    def annihilator(self) -> Matrix:
        """Rows spanning the linear functionals vanishing on this subspace."""
        k = kernel(self.basis) if self.dim else Subspace.full(self.ambient_dim)
        return k.basis

    def complement_coordinates(self) -> list[int]:
        """Standard coordinates not among the pivot columns."""
        return [c for c in range(self.ambient_dim) if c not in self.pivots]


def _check_ambient(u: Subspace, v: Subspace):
    if u.ambient_dim != v.ambient_dim:
        raise DimensionError(f"ambient dimensions {u.ambient_dim} and {v.ambient_dim} differ")


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    return Subspace(u.vectors() + v.vectors(), u.ambient_dim)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    n = u.ambient_dim
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(n)
    # x = sum a_i u_i = sum b_j v_j  <=>  [U^T | -V^T] (a, b) = 0
    ut = u.basis.T
    vt = (-v.basis).T
    ker = kernel(Matrix.block([[ut, vt]]))
    vecs = [u.basis.T.apply(k[: u.dim]) for k in ker.vectors()]
    return Subspace(vecs, n)


def preimage(f: Matrix, v: Subspace) -> Subspace:
    """{x : f x in v}."""
    if f.rows != v.ambient_dim:
        raise DimensionError("map codomain differs from subspace ambient dimension")
    ann = v.annihilator()
    if ann.rows == 0:
        return Subspace.full(f.cols)
    return kernel(ann @ f)


def span_of_columns(vectors: Iterable[Sequence], n: int) -> Subspace:
    return Subspace(list(vectors), n)


def complement_within(outer: Subspace, inner: Subspace) -> Subspace:
    """A complement of inner inside outer, chosen greedily from outer's basis."""
    _check_ambient(outer, inner)
    chosen = []
    current = inner
    for vec in outer.vectors():
        trial = subspace_sum(current, Subspace([vec], outer.ambient_dim))
        if trial.dim > current.dim:
            chosen.append(vec)
            current = trial
    return Subspace(chosen, outer.ambient_dim)


def vec_add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(s, u: Sequence) -> tuple:
    s = Q(s)
    return tuple(s * a for a in u)


def unit(n: int, i: int) -> tuple:
    return tuple(Fraction(int(k == i)) for k in range(n))


def zero_vec(n: int) -> tuple:
    return (Fraction(0),) * n
