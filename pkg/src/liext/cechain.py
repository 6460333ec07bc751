"""Chevalley-Eilenberg cochains with values in a representation.

A degree-n cochain is stored by its values on strictly increasing index
tuples; any other tuple is evaluated through the alternation sign.  Cochains
valued in Hom(a, i) use module_dim = dim_i * dim_a and store each value as the
row-major flattening of a dim_i x dim_a matrix.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .exactlin import DimensionError, Matrix, Q, unit, zero_vec
from .liecore import LieAlgebra, is_automorphism

MAX_DEGREE = 4


def _perm_sign(idx: Sequence[int]) -> tuple[int, tuple]:
    """Sign that sorts idx, and the sorted tuple; sign 0 for repeats."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class Representation:
    """One module_dim x module_dim matrix per basis vector of h."""

    __slots__ = ("h", "matrices", "module_dim")

    def __init__(self, h: LieAlgebra, module_dim: int, matrices: Sequence[Matrix]):
        if len(matrices) != h.dim:
            raise DimensionError("need one matrix per basis vector")
        for m in matrices:
            if m.shape != (module_dim, module_dim):
                raise DimensionError("representation matrix has the wrong shape")
        self.h = h
        self.module_dim = module_dim
        self.matrices = tuple(matrices)

    def of(self, vec: Sequence) -> Matrix:
        out = Matrix.zeros(self.module_dim, self.module_dim)
        for a, m in zip(vec, self.matrices):
            if a:
                out = out + m * a
        return out

    def homomorphism_defects(self) -> list[tuple[int, int]]:
        bad = []
        for i in range(self.h.dim):
            for j in range(i + 1, self.h.dim):
                lhs = self.of(self.h.structure[i][j])
                a, b = self.matrices[i], self.matrices[j]
                if lhs != a @ b - b @ a:
                    bad.append((i, j))
        return bad

    def is_homomorphism(self) -> bool:
        return not self.homomorphism_defects()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Representation)
            and self.module_dim == other.module_dim
            and self.h == other.h
            and self.matrices == other.matrices
        )

    def __repr__(self) -> str:
        return f"Representation(dim_h={self.h.dim}, module_dim={self.module_dim})"


def trivial(h: LieAlgebra, module_dim: int) -> Representation:
    z = Matrix.zeros(module_dim, module_dim)
    return Representation(h, module_dim, [z] * h.dim)


def adjoint(h: LieAlgebra) -> Representation:
    return Representation(h, h.dim, [h.ad(i) for i in range(h.dim)])


def coadjoint(h: LieAlgebra) -> Representation:
    """ad*(x)(alpha) = -alpha o ad(x), in the basis dual to h's basis.

    (ad*(x_i) theta^l)(x_j) = -c[i][j][l], so entry [j][l] is -c[i][j][l].
    """
    n = h.dim
    mats = [Matrix([[-h.structure[i][j][l] for l in range(n)] for j in range(n)], cols=n) for i in range(n)]
    return Representation(h, n, mats)


def hom_representation(rho: Representation, dim_a: int) -> Representation:
    """x . T = rho(x) o T on Hom(a, i), flattened row-major."""
    di = rho.module_dim
    mats = []
    for m in rho.matrices:
        big = [[Fraction(0)] * (di * dim_a) for _ in range(di * dim_a)]
        for r in range(di):
            for s in range(di):
                if m[r, s]:
                    for a in range(dim_a):
                        big[r * dim_a + a][s * dim_a + a] = m[r, s]
        mats.append(Matrix(big, cols=di * dim_a))
    return Representation(rho.h, di * dim_a, mats)


class Cochain:
    __slots__ = ("coeffs", "degree", "h_dim", "module_dim")

    def __init__(self, degree: int, h_dim: int, module_dim: int, coeffs: dict | None = None):
        if not 0 <= degree <= MAX_DEGREE:
            raise ValueError(f"degree must be between 0 and {MAX_DEGREE}")
        self.degree = degree
        self.h_dim = h_dim
        self.module_dim = module_dim
        clean = {}
        for key, vec in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise DimensionError("index tuple length differs from degree")
            if len(vec) != module_dim:
                raise DimensionError("value length differs from module dimension")
            if any(k < 0 or k >= h_dim for k in key):
                raise DimensionError(f"index tuple {key} out of range")
            sign, skey = _perm_sign(key)
            if sign == 0:
                if any(vec):
                    raise ValueError("nonzero value on a repeated index tuple")
                continue
            vec = tuple(Q(v) * sign for v in vec)
            if any(vec):
                if skey in clean:
                    raise ValueError(f"index tuple {skey} given twice")
                clean[skey] = vec
        self.coeffs = clean

    @classmethod
    def zero(cls, degree: int, h_dim: int, module_dim: int) -> Cochain:
        return cls(degree, h_dim, module_dim)

    @classmethod
    def from_function(cls, degree: int, h_dim: int, module_dim: int, f: Callable[[tuple], Sequence]) -> Cochain:
        return cls(degree, h_dim, module_dim, {idx: f(idx) for idx in itertools.combinations(range(h_dim), degree)})

    @classmethod
    def linear(cls, h_dim: int, module_dim: int, matrix: Matrix) -> Cochain:
        """Degree-one cochain whose value on x_j is column j of matrix."""
        if matrix.shape != (module_dim, h_dim):
            raise DimensionError("matrix must be module_dim x h_dim")
        return cls(1, h_dim, module_dim, {(j,): matrix.col(j) for j in range(h_dim)})

    @classmethod
    def constant(cls, h_dim: int, vec: Sequence) -> Cochain:
        return cls(0, h_dim, len(vec), {(): vec})

    def keys(self) -> Iterable[tuple]:
        return itertools.combinations(range(self.h_dim), self.degree)

    def value(self, idx: Sequence[int]) -> tuple:
        sign, key = _perm_sign(idx)
        if sign == 0:
            return zero_vec(self.module_dim)
        vec = self.coeffs.get(key)
        if vec is None:
            return zero_vec(self.module_dim)
        return vec if sign > 0 else tuple(-v for v in vec)

    def evaluate(self, vectors: Sequence[Sequence]) -> tuple:
        """Multilinear evaluation on arbitrary vectors of h."""
        if len(vectors) != self.degree:
            raise DimensionError("wrong number of arguments")
        out = [Fraction(0)] * self.module_dim
        for key, val in self.coeffs.items():
            coef = (
                Matrix([[vectors[p][k] for k in key] for p in range(self.degree)]).det() if self.degree else Fraction(1)
            )
            if coef:
                for t in range(self.module_dim):
                    out[t] += coef * val[t]
        return tuple(out)

    def matrix(self) -> Matrix:
        """For degree one: module_dim x h_dim matrix of values."""
        if self.degree != 1:
            raise ValueError("only degree-one cochains have a matrix")
        return Matrix.from_columns([self.value((j,)) for j in range(self.h_dim)], rows=self.module_dim)

    def value_matrix(self, idx: Sequence[int], rows: int, cols: int) -> Matrix:
        """Value of a Hom-valued cochain as a rows x cols matrix."""
        if rows * cols != self.module_dim:
            raise DimensionError("shape does not match module dimension")
        v = self.value(idx)
        return Matrix([v[r * cols : (r + 1) * cols] for r in range(rows)], cols=cols)

    def to_vector(self) -> tuple:
        out = []
        for key in self.keys():
            out.extend(self.value(key))
        return tuple(out)

    @classmethod
    def from_vector(cls, degree: int, h_dim: int, module_dim: int, vec: Sequence) -> Cochain:
        keys = list(itertools.combinations(range(h_dim), degree))
        if len(vec) != len(keys) * module_dim:
            raise DimensionError("vector length does not match cochain space")
        return cls(
            degree, h_dim, module_dim, {k: vec[i * module_dim : (i + 1) * module_dim] for i, k in enumerate(keys)}
        )

    def space_dim(self) -> int:
        return len(list(self.keys())) * self.module_dim

    def _same(self, other: Cochain):
        if (self.degree, self.h_dim, self.module_dim) != (other.degree, other.h_dim, other.module_dim):
            raise DimensionError("cochains live in different spaces")

    def __add__(self, other: Cochain) -> Cochain:
        self._same(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return Cochain(
            self.degree,
            self.h_dim,
            self.module_dim,
            {k: tuple(a + b for a, b in zip(self.value(k), other.value(k))) for k in keys},
        )

    def __neg__(self) -> Cochain:
        return Cochain(
            self.degree, self.h_dim, self.module_dim, {k: tuple(-a for a in v) for k, v in self.coeffs.items()}
        )

    def __sub__(self, other: Cochain) -> Cochain:
        return self + (-other)

    def __mul__(self, scalar) -> Cochain:
        s = Q(scalar)
        return Cochain(
            self.degree, self.h_dim, self.module_dim, {k: tuple(s * a for a in v) for k, v in self.coeffs.items()}
        )

    __rmul__ = __mul__

    def map_values(self, m: Matrix) -> Cochain:
        """Compose with a linear map on the module."""
        if m.cols != self.module_dim:
            raise DimensionError("map domain differs from module dimension")
        return Cochain(self.degree, self.h_dim, m.rows, {k: m.apply(v) for k, v in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cochain)
            and (self.degree, self.h_dim, self.module_dim) == (other.degree, other.h_dim, other.module_dim)
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.degree, self.h_dim, self.module_dim, tuple(sorted(self.coeffs.items()))))

    def __repr__(self) -> str:
        return f"Cochain(degree={self.degree}, h_dim={self.h_dim}, module_dim={self.module_dim}, nonzero={len(self.coeffs)})"


def basis_cochains(degree: int, h_dim: int, module_dim: int) -> list[Cochain]:
    total = len(list(itertools.combinations(range(h_dim), degree))) * module_dim
    return [Cochain.from_vector(degree, h_dim, module_dim, unit(total, t)) for t in range(total)]


def operator_matrix(op: Callable[[Cochain], Cochain], degree: int, h_dim: int, module_dim: int) -> Matrix:
    """Matrix of a linear operator on cochains, in the to_vector coordinates."""
    cols = [op(b).to_vector() for b in basis_cochains(degree, h_dim, module_dim)]
    if not cols:
        out = op(Cochain.zero(degree, h_dim, module_dim))
        return Matrix.zeros(len(out.to_vector()), 0)
    return Matrix.from_columns(cols)


def differential(rep: Representation, c: Cochain) -> Cochain:
    """(d c)(x_1..x_{n+1}) = sum_i (-1)^(i+1) R(x_i) c(..^x_i..)
    + sum_{i<j} (-1)^(i+j) c([x_i, x_j], ..^x_i..^x_j..)."""
    h = rep.h
    if c.h_dim != h.dim or c.module_dim != rep.module_dim:
        raise DimensionError("cochain does not match the representation")
    n = c.degree
    if n + 1 > MAX_DEGREE:
        raise ValueError("differential would exceed the supported degree")
    out = {}
    for idx in itertools.combinations(range(h.dim), n + 1):
        acc = [Fraction(0)] * c.module_dim
        for p in range(n + 1):
            rest = idx[:p] + idx[p + 1 :]
            val = c.value(rest)
            if any(val):
                rv = rep.matrices[idx[p]].apply(val)
                s = 1 if p % 2 == 0 else -1
                for t in range(c.module_dim):
                    acc[t] += s * rv[t]
        for p in range(n + 1):
            for q in range(p + 1, n + 1):
                br = h.structure[idx[p]][idx[q]]
                if not any(br):
                    continue
                rest = tuple(idx[r] for r in range(n + 1) if r not in (p, q))
                s = 1 if (p + q) % 2 == 0 else -1
                for k, coef in enumerate(br):
                    if coef:
                        val = c.value((k,) + rest)
                        for t in range(c.module_dim):
                            acc[t] += s * coef * val[t]
        out[idx] = acc
    return Cochain(n + 1, h.dim, c.module_dim, out)


def e_phi(phi: Cochain, lam: Cochain, dim_i: int, dim_a: int) -> Cochain:
    """e_phi(lam)(x_1..x_{n+1}) = sum_i (-1)^(i+1) phi(x_i)(lam(..^x_i..))."""
    if phi.degree != 1 or phi.module_dim != dim_i * dim_a:
        raise DimensionError("phi must be a degree-one Hom(a, i)-valued cochain")
    if lam.module_dim != dim_a or lam.h_dim != phi.h_dim:
        raise DimensionError("lam must be valued in a")
    n = lam.degree
    mats = [phi.value_matrix((j,), dim_i, dim_a) for j in range(phi.h_dim)]
    out = {}
    for idx in itertools.combinations(range(phi.h_dim), n + 1):
        acc = [Fraction(0)] * dim_i
        for p in range(n + 1):
            val = lam.value(idx[:p] + idx[p + 1 :])
            if any(val):
                rv = mats[idx[p]].apply(val)
                s = 1 if p % 2 == 0 else -1
                for t in range(dim_i):
                    acc[t] += s * rv[t]
        out[idx] = acc
    return Cochain(n + 1, phi.h_dim, dim_i, out)


def big_d(phi: Cochain, rho: Representation, lam: Cochain, mu: Cochain) -> tuple[Cochain, Cochain]:
    """Block operator (lam, mu) -> (d lam, e_phi(lam) + d mu), with a trivial on a."""
    dim_i = rho.module_dim
    dim_a = lam.module_dim
    if mu.module_dim != dim_i or mu.degree != lam.degree:
        raise DimensionError("mu must have the degree of lam and values in i")
    first = differential(trivial(rho.h, dim_a), lam)
    second = e_phi(phi, lam, dim_i, dim_a) + differential(rho, mu)
    return first, second


@dataclass(frozen=True)
class GroupElement:
    """(g, sigma) acting on cochains and representations."""

    g: Matrix
    sigma: Matrix

    def __post_init__(self):
        if not self.g.is_invertible():
            raise ValueError("g is singular")
        if not self.sigma.is_invertible():
            raise ValueError("sigma is singular")

    @classmethod
    def identity(cls, h_dim: int, module_dim: int) -> GroupElement:
        return cls(Matrix.identity(h_dim), Matrix.identity(module_dim))

    @classmethod
    def split(cls, g: Matrix, h_a: Matrix, k: Matrix, t: Matrix) -> GroupElement:
        """sigma = (h 0; T k) on a + i."""
        return cls(g, sigma_block(h_a, k, t))

    def compose(self, other: GroupElement) -> GroupElement:
        return GroupElement(self.g @ other.g, self.sigma @ other.sigma)

    def inverse(self) -> GroupElement:
        return GroupElement(self.g.inverse(), self.sigma.inverse())

    def is_automorphism_of(self, h: LieAlgebra) -> bool:
        return is_automorphism(h, self.g)


def sigma_block(h_a: Matrix, k: Matrix, t: Matrix) -> Matrix:
    if t.shape != (k.rows, h_a.cols):
        raise DimensionError("T must map a into i")
    return Matrix.block([[h_a, Matrix.zeros(h_a.rows, k.cols)], [t, k]])


def act_on_cochain(gamma: GroupElement, c: Cochain) -> Cochain:
    """(g, sigma).c = sigma o c(g^-1 ., ..., g^-1 .)."""
    if gamma.g.rows != c.h_dim or gamma.sigma.cols != c.module_dim:
        raise DimensionError("group element does not match the cochain")
    ginv = gamma.g.inverse()
    cols = [ginv.col(j) for j in range(c.h_dim)]
    return Cochain.from_function(
        c.degree,
        c.h_dim,
        gamma.sigma.rows,
        lambda idx: gamma.sigma.apply(c.evaluate([cols[j] for j in idx])),
    )


def act_on_representation(gamma: GroupElement, rep: Representation) -> Representation:
    """(g, sigma).R = sigma o R(g^-1 .) o sigma^-1."""
    if gamma.g.rows != rep.h.dim or gamma.sigma.rows != rep.module_dim:
        raise DimensionError("group element does not match the representation")
    ginv = gamma.g.inverse()
    sinv = gamma.sigma.inverse()
    mats = [gamma.sigma @ rep.of(ginv.col(j)) @ sinv for j in range(rep.h.dim)]
    return Representation(rep.h, rep.module_dim, mats)


def phi_cochain(h_dim: int, matrices: Sequence[Matrix]) -> Cochain:
    """Hom(a, i)-valued degree-one cochain from one dim_i x dim_a matrix per basis vector."""
    if len(matrices) != h_dim:
        raise DimensionError("need one matrix per basis vector")
    rows, cols = matrices[0].shape
    return Cochain(1, h_dim, rows * cols, {(j,): tuple(v for r in m for v in r) for j, m in enumerate(matrices)})


def phi_matrices(phi: Cochain, dim_i: int, dim_a: int) -> list[Matrix]:
    return [phi.value_matrix((j,), dim_i, dim_a) for j in range(phi.h_dim)]


def act_on_phi(g: Matrix, h_a: Matrix, k: Matrix, phi: Cochain, dim_i: int, dim_a: int) -> Cochain:
    """x -> k phi(g^-1 x) h^-1."""
    ginv = g.inverse()
    hinv = h_a.inverse()
    mats = phi_matrices(phi, dim_i, dim_a)
    out = []
    for j in range(phi.h_dim):
        m = Matrix.zeros(dim_i, dim_a)
        for l, coef in enumerate(ginv.col(j)):
            if coef:
                m = m + mats[l] * coef
        out.append(k @ m @ hinv)
    return phi_cochain(phi.h_dim, out)
