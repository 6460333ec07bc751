"""Shared generators for the test suite."""

import random
from fractions import Fraction

from liext import heis
from liext.cechain import (
    Cochain,
    adjoint,
    coadjoint,
    differential,
    hom_representation,
    operator_matrix,
    trivial,
)
from liext.exactlin import Matrix, kernel
from liext.extension import ExtensionData, build, cocycle_space
from liext.liecore import LieAlgebra, abelian, direct_sum, heisenberg, transform
from liext.quadratic import BilinearForm, DoubleExtensionData, double_extension


def rand_matrix(rng: random.Random, rows: int, cols: int, lo: int = -3, hi: int = 3) -> Matrix:
    return Matrix([[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)], cols=cols)


def rand_invertible(rng: random.Random, n: int, lo: int = -2, hi: int = 2) -> Matrix:
    while True:
        m = rand_matrix(rng, n, n, lo, hi)
        if m.det():
            return m


def base_solvable() -> list[LieAlgebra]:
    aff = LieAlgebra.from_brackets(2, {(0, 1): (0, 1)})
    r3 = LieAlgebra.from_brackets(3, {(0, 1): (0, 1, 0), (0, 2): (0, 0, 2)})
    r3b = LieAlgebra.from_brackets(3, {(0, 1): (0, 1, 0), (0, 2): (0, 1, 1)})
    fil4 = LieAlgebra.from_brackets(4, {(0, 1): (0, 0, 1, 0), (0, 2): (0, 0, 0, 1)})
    return [
        abelian(1),
        abelian(3),
        aff,
        heisenberg(),
        r3,
        r3b,
        fil4,
        direct_sum(aff, aff),
        direct_sum(heisenberg(), abelian(1)),
    ]


def rand_solvable(rng: random.Random) -> LieAlgebra:
    g = rng.choice(base_solvable())
    return transform(g, rand_invertible(rng, g.dim))


def rand_representation(rng: random.Random, h: LieAlgebra):
    kind = rng.choice(["trivial", "adjoint", "coadjoint"])
    if kind == "trivial":
        return trivial(h, rng.randint(1, 2))
    return adjoint(h) if kind == "adjoint" else coadjoint(h)


def rand_cochain(rng: random.Random, degree: int, h_dim: int, module_dim: int, lo: int = -3, hi: int = 3) -> Cochain:
    size = len(Cochain.zero(degree, h_dim, module_dim).to_vector())
    return Cochain.from_vector(degree, h_dim, module_dim, [rng.randint(lo, hi) for _ in range(size)])


def rand_cocycle(rng: random.Random, rep, degree: int = 1) -> Cochain:
    """Random integer combination of a kernel basis of d."""
    h_dim, m = rep.h.dim, rep.module_dim
    z = kernel(operator_matrix(lambda c: differential(rep, c), degree, h_dim, m))
    vec = [Fraction(0)] * len(Cochain.zero(degree, h_dim, m).to_vector())
    for b in z.vectors():
        c = rng.randint(-2, 2)
        vec = [x + c * y for x, y in zip(vec, b)]
    return Cochain.from_vector(degree, h_dim, m, vec)


def rand_phi(rng: random.Random, rho, dim_a: int) -> Cochain:
    return rand_cocycle(rng, hom_representation(rho, dim_a), 1)


def rand_skew_pair(rng: random.Random, n: int) -> tuple[Matrix, Matrix]:
    """A symmetric nondegenerate B and a nonzero D with B(Du, v) = -B(u, Dv)."""
    b = rng.choice([Matrix.identity(n), Matrix.diag([1] * (n - 1) + [-1]), Matrix.diag(list(range(1, n + 1)))])
    while True:
        s = rand_matrix(rng, n, n, -2, 2)
        s = s - s.T
        if not s.is_zero():
            return b, b.inverse() @ s


def double_extension_corpus(count: int, seed: int = 7):
    rng = random.Random(seed)
    out = []
    for t in range(count):
        n = 2 + t % 3
        b, d = rand_skew_pair(rng, n)
        out.append(double_extension(DoubleExtensionData(n, BilinearForm(b), d)))
    return out


def rand_extension(rng: random.Random):
    """Valid extension data over a random solvable h, with (lam, mu) drawn from the cocycle space."""
    h = rand_solvable(rng)
    rho = rand_representation(rng, h)
    dim_a = rng.randint(1, 2)
    base = ExtensionData.trivial(h, dim_a, rho.module_dim, rho).replace(phi=rand_phi(rng, rho, dim_a))
    z = cocycle_space(base)
    size_lam = len(base.lam.to_vector())
    vec = [Fraction(0)] * (size_lam + len(base.mu.to_vector()))
    for b in z.vectors():
        c = rng.randint(-2, 2)
        vec = [x + c * y for x, y in zip(vec, b)]
    n = h.dim
    return base.replace(
        lam=Cochain.from_vector(2, n, dim_a, vec[:size_lam]),
        mu=Cochain.from_vector(2, n, rho.module_dim, vec[size_lam:]),
    )


def hyperbolic(m: int) -> Matrix:
    z = Matrix.zeros(m, m)
    return Matrix.block([[z, Matrix.identity(m)], [Matrix.identity(m), z]])


NILPOTENT_BLOCKS = [
    Matrix([[0, 1], [0, 0]]),
    Matrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]]),
    Matrix([[0, 1, 2], [0, 0, 3], [0, 0, 0]]),
    Matrix([[0, 0, 1], [0, 0, 0], [0, 0, 0]]),
]


def nilpotent_double_extensions():
    """Double extensions of hyperbolic V by D = diag(N, -N^T) with N nilpotent."""
    out = []
    for n in NILPOTENT_BLOCKS:
        m = n.rows
        z = Matrix.zeros(m, m)
        d = Matrix.block([[n, z], [z, -n.T]])
        out.append(double_extension(DoubleExtensionData(2 * m, BilinearForm(hyperbolic(m)), d)))
    return out


def quadratic_corpus():
    """(name, algebra, form) for random and nilpotent double extensions and the metric Heisenberg families."""
    out = [(f"double-extension-{k}", g, b) for k, (g, b) in enumerate(double_extension_corpus(16))]
    out += [(f"nilpotent-double-extension-{k}", g, b) for k, (g, b) in enumerate(nilpotent_double_extensions())]
    for r in (3, 4):
        for entry in heis.metric_catalog(r):
            g = build(heis.to_extension_data(entry.extension))
            out.append((f"heis-{entry.tag}-r{r}", g, entry.certificate.pullback_metric))
    return out


def brute_invariant(g: LieAlgebra, b: BilinearForm) -> bool:
    n = g.dim
    e = [tuple(int(k == t) for k in range(n)) for t in range(n)]
    return all(
        b(g.bracket(e[x], e[y]), e[z]) == b(e[x], g.bracket(e[y], e[z]))
        for x in range(n)
        for y in range(n)
        for z in range(n)
    )
