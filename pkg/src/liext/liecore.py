"""Lie algebras given by structure constants, their central series and the
canonical abelian ideals built from them."""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .exactlin import (
    DimensionError,
    Matrix,
    Q,
    Subspace,
    intersect,
    kernel,
    subspace_sum,
    unit,
)


class InvalidAlgebra(ValueError):
    def __init__(self, message, defects=()):
        super().__init__(message)
        self.defects = list(defects)


class LieAlgebra:
    """[x_i, x_j] = sum_k structure[i][j][k] x_k."""

    __slots__ = ("_ad", "basis_names", "dim", "structure")

    def __init__(self, structure, basis_names: Sequence[str] | None = None, *, check: bool = True):
        n = len(structure)
        c = tuple(tuple(tuple(Q(v) for v in structure[i][j]) for j in range(n)) for i in range(n))
        for i in range(n):
            if len(structure[i]) != n or any(len(structure[i][j]) != n for j in range(n)):
                raise DimensionError("structure tensor must be n x n x n")
        self.dim = n
        self.structure = c
        self.basis_names = tuple(basis_names) if basis_names is not None else tuple(f"e{i + 1}" for i in range(n))
        if len(self.basis_names) != n:
            raise DimensionError("wrong number of basis names")
        self._ad = None
        if check:
            for i in range(n):
                for j in range(n):
                    if any(c[i][j][k] != -c[j][i][k] for k in range(n)):
                        raise InvalidAlgebra(
                            f"bracket not antisymmetric at ({self.basis_names[i]}, {self.basis_names[j]})"
                        )
            defects = jacobi_defect(self)
            if defects:
                raise InvalidAlgebra("Jacobi identity fails", defects)

    @classmethod
    def unchecked(cls, structure, basis_names=None) -> LieAlgebra:
        return cls(structure, basis_names, check=False)

    @classmethod
    def from_brackets(cls, n: int, brackets: dict, basis_names=None, *, check: bool = True) -> LieAlgebra:
        """Build from {(i, j): vector} for i < j; the rest follows by antisymmetry."""
        c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for (i, j), vec in brackets.items():
            if i == j:
                raise InvalidAlgebra("bracket of a basis vector with itself must vanish")
            c[i][j] = [Q(v) for v in vec]
            c[j][i] = [-Q(v) for v in vec]
        return cls(c, basis_names, check=check)

    def bracket_basis(self, i: int, j: int) -> tuple:
        return self.structure[i][j]

    def bracket(self, u: Sequence, v: Sequence) -> tuple:
        n = self.dim
        out = [Fraction(0)] * n
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                row = self.structure[i][j]
                for k in range(n):
                    if row[k]:
                        out[k] += ab * row[k]
        return tuple(out)

    def ad(self, i: int) -> Matrix:
        """Matrix of ad(x_i) acting on column coordinate vectors."""
        if self._ad is None:
            n = self.dim
            self._ad = tuple(
                Matrix.from_columns([self.structure[i][j] for j in range(n)]) if n else Matrix.zeros(0, 0)
                for i in range(n)
            )
        return self._ad[i]

    def ad_vector(self, u: Sequence) -> Matrix:
        n = self.dim
        return Matrix.from_columns([self.bracket(u, unit(n, j)) for j in range(n)]) if n else Matrix.zeros(0, 0)

    def is_abelian(self) -> bool:
        return all(v == 0 for plane in self.structure for row in plane for v in row)

    def full(self) -> Subspace:
        return Subspace.full(self.dim)

    def zero(self) -> Subspace:
        return Subspace.zero(self.dim)

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebra) and self.structure == other.structure

    def __hash__(self) -> int:
        return hash(self.structure)

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, basis={list(self.basis_names)})"

    def nonzero_brackets(self) -> list[tuple[int, int, tuple]]:
        return [
            (i, j, self.structure[i][j])
            for i in range(self.dim)
            for j in range(i + 1, self.dim)
            if any(self.structure[i][j])
        ]


def jacobi_defect(g: LieAlgebra) -> list[tuple[tuple[int, int, int], tuple]]:
    """Basis triples i<j<k whose cyclic Jacobi sum is nonzero."""
    n = g.dim
    e = [unit(n, i) for i in range(n)]
    bad = []
    for i, j, k in itertools.combinations(range(n), 3):
        s1 = g.bracket(e[i], g.structure[j][k])
        s2 = g.bracket(e[j], g.structure[k][i])
        s3 = g.bracket(e[k], g.structure[i][j])
        total = tuple(a + b + c for a, b, c in zip(s1, s2, s3))
        if any(total):
            bad.append(((i, j, k), total))
    return bad


def _check(g: LieAlgebra, *spaces: Subspace):
    for s in spaces:
        if s.ambient_dim != g.dim:
            raise DimensionError("subspace does not live in the algebra")


def bracket_subspaces(g: LieAlgebra, u: Subspace, v: Subspace) -> Subspace:
    _check(g, u, v)
    vecs = [g.bracket(a, b) for a in u.vectors() for b in v.vectors()]
    return Subspace(vecs, g.dim)


def centralizer_of(g: LieAlgebra, s: Subspace) -> Subspace:
    """{x : [x, s] = 0}."""
    _check(g, s)
    if s.dim == 0:
        return g.full()
    rows = []
    for b in s.vectors():
        rows.extend(g.ad_vector(b).tolist())
    return kernel(Matrix(rows, cols=g.dim))


def center(g: LieAlgebra) -> Subspace:
    return centralizer_of(g, g.full())


def normalizes_into(g: LieAlgebra, s: Subspace, target: Subspace) -> Subspace:
    """{x : [x, s] subset target}."""
    _check(g, s, target)
    if s.dim == 0:
        return g.full()
    ann = target.annihilator()
    if ann.rows == 0:
        return g.full()
    rows = []
    for b in s.vectors():
        rows.extend((ann @ g.ad_vector(b)).tolist())
    return kernel(Matrix(rows, cols=g.dim))


def is_ideal(g: LieAlgebra, s: Subspace) -> bool:
    return s.contains_space(bracket_subspaces(g, g.full(), s))


def is_subalgebra(g: LieAlgebra, s: Subspace) -> bool:
    return s.contains_space(bracket_subspaces(g, s, s))


def is_abelian_subspace(g: LieAlgebra, s: Subspace) -> bool:
    return bracket_subspaces(g, s, s).dim == 0


@dataclass(frozen=True)
class SeriesReport:
    descending: tuple  # g^0, g^1, ..., g^m1
    derived: tuple  # g^(0), g^(1), ... up to stabilization
    derived_central: tuple  # C_1, ..., C_m2
    m1: int
    m2: int

    @property
    def m(self) -> int:
        return max(self.m1, self.m2)

    def lower(self, k: int) -> Subspace:
        """g^k, extended past stabilization."""
        return self.descending[min(k, len(self.descending) - 1)]

    def central(self, k: int) -> Subspace:
        """C_k for k >= 1 (C_0 = 0), extended past stabilization."""
        if k <= 0:
            return Subspace.zero(self.descending[0].ambient_dim)
        return self.derived_central[min(k, len(self.derived_central)) - 1]


def series(g: LieAlgebra) -> SeriesReport:
    full = g.full()
    desc = [full]
    while True:
        nxt = bracket_subspaces(g, full, desc[-1])
        if nxt == desc[-1]:
            break
        desc.append(nxt)
    m1 = len(desc) - 1

    der = [full]
    while True:
        nxt = bracket_subspaces(g, der[-1], der[-1])
        if nxt == der[-1]:
            break
        der.append(nxt)

    cent = [center(g)]
    while True:
        nxt = normalizes_into(g, full, cent[-1])
        if nxt == cent[-1]:
            break
        cent.append(nxt)
    m2 = len(cent)
    return SeriesReport(tuple(desc), tuple(der), tuple(cent), max(m1, 1), m2)


class InternalInvariantError(AssertionError):
    pass


def canonical_ideals(g: LieAlgebra, rep: SeriesReport | None = None) -> tuple[Subspace, Subspace]:
    rep = rep or series(g)
    m = rep.m
    n = g.dim
    i_ideal = Subspace.zero(n)
    for k in range(1, m + 1):
        i_ideal = subspace_sum(i_ideal, intersect(rep.central(k), rep.lower(k)))

    closed = subspace_sum(rep.central(1), rep.lower(m))
    for k in range(1, m):
        closed = subspace_sum(closed, intersect(rep.central(k + 1), rep.lower(k)))

    meet = g.full()
    for k in range(1, m + 1):
        meet = intersect(meet, subspace_sum(rep.central(k), rep.lower(k)))

    if closed != meet:
        raise InternalInvariantError("closed form and intersection form of j(g) disagree")
    return i_ideal, closed


def has_abelian_descending_ideal(g: LieAlgebra, rep: SeriesReport | None = None) -> int | None:
    """Smallest l >= 1 with [g^l, g^l] = 0, if any."""
    rep = rep or series(g)
    for ell in range(1, max(len(rep.descending), 2)):
        if is_abelian_subspace(g, rep.lower(ell)):
            return ell
    return None


def is_solvable(g: LieAlgebra, rep: SeriesReport | None = None) -> bool:
    rep = rep or series(g)
    return rep.derived[-1].dim == 0


def is_nilpotent(g: LieAlgebra, rep: SeriesReport | None = None) -> bool:
    rep = rep or series(g)
    return rep.descending[-1].dim == 0


def quotient(g: LieAlgebra, ideal: Subspace) -> tuple[LieAlgebra, Matrix, Matrix]:
    """Quotient algebra on the standard coordinates complementary to the ideal.

    Returns (algebra, projection, section) with projection @ section = Id.
    """
    _check(g, ideal)
    if not is_ideal(g, ideal):
        raise ValueError("subspace is not an ideal")
    n = g.dim
    comp = ideal.complement_coordinates()
    q = len(comp)
    proj_rows = []
    for c in comp:
        row = [Fraction(0)] * n
        row[c] = Fraction(1)
        for r, p in zip(ideal.vectors(), ideal.pivots):
            row[p] = -r[c]
        proj_rows.append(row)
    proj = Matrix(proj_rows, cols=n)
    section = Matrix.from_columns([unit(n, c) for c in comp], rows=n) if q else Matrix.zeros(n, 0)
    struct = [[proj.apply(g.structure[a][b]) for b in comp] for a in comp]
    names = [g.basis_names[c] for c in comp]
    return LieAlgebra(struct, names), proj, section


def is_automorphism(g: LieAlgebra, m: Matrix) -> bool:
    n = g.dim
    if m.shape != (n, n) or not m.is_invertible():
        return False
    cols = [m.col(j) for j in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if m.apply(g.structure[i][j]) != g.bracket(cols[i], cols[j]):
                return False
    return True


def transform(g: LieAlgebra, p: Matrix) -> LieAlgebra:
    """The same algebra written in the basis given by the columns of p."""
    n = g.dim
    pinv = p.inverse()
    cols = [p.col(j) for j in range(n)]
    struct = [[pinv.apply(g.bracket(cols[i], cols[j])) for j in range(n)] for i in range(n)]
    return LieAlgebra(struct, g.basis_names)


def direct_sum(a: LieAlgebra, b: LieAlgebra) -> LieAlgebra:
    n = a.dim + b.dim
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(a.dim):
        for j in range(a.dim):
            c[i][j][: a.dim] = a.structure[i][j]
    for i in range(b.dim):
        for j in range(b.dim):
            c[a.dim + i][a.dim + j][a.dim :] = b.structure[i][j]
    names = a.basis_names + b.basis_names
    if len(set(names)) != n:
        names = None
    return LieAlgebra(c, names)


def abelian(n: int, names=None) -> LieAlgebra:
    z = Fraction(0)
    return LieAlgebra([[[z] * n for _ in range(n)] for _ in range(n)], names)


def heisenberg() -> LieAlgebra:
    """Three-dimensional Heisenberg algebra, [x1, x2] = x3."""
    return LieAlgebra.from_brackets(3, {(0, 1): (0, 0, 1)}, ("x1", "x2", "x3"))
