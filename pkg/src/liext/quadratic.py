"""Invariant symmetric bilinear forms and metric constructions."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .cechain import Cochain, Representation, coadjoint, differential, e_phi, phi_cochain, trivial
from .exactlin import (
    DimensionError,
    Matrix,
    Subspace,
    complement_within,
    intersect,
    kernel,
    solve,
    subspace_sum,
)
from .extension import ExtensionData, IsomorphismWitness, build, verify_witness
from .liecore import (
    LieAlgebra,
    bracket_subspaces,
    canonical_ideals,
    center,
    centralizer_of,
    is_abelian_subspace,
    is_subalgebra,
    series,
)


class HypothesisError(ValueError):
    """A named hypothesis of a construction does not hold."""

    def __init__(self, name: str, detail: str = ""):
        self.name = name
        super().__init__(f"{name}{': ' + detail if detail else ''}")


class BilinearForm:
    __slots__ = ("dim", "gram")

    def __init__(self, gram: Matrix | Sequence[Sequence]):
        gram = gram if isinstance(gram, Matrix) else Matrix(gram)
        if gram.rows != gram.cols:
            raise DimensionError("Gram matrix must be square")
        if gram != gram.T:
            raise ValueError("Gram matrix must be symmetric")
        self.dim = gram.rows
        self.gram = gram

    @classmethod
    def identity(cls, n: int) -> BilinearForm:
        return cls(Matrix.identity(n))

    def __call__(self, u: Sequence, v: Sequence) -> Fraction:
        gv = self.gram.apply(v)
        return sum((a * b for a, b in zip(u, gv) if a and b), Fraction(0))

    @property
    def nondegenerate(self) -> bool:
        return self.gram.det() != 0

    def restrict(self, s: Subspace) -> Matrix:
        b = s.basis
        return b @ self.gram @ b.T

    def pullback(self, m: Matrix) -> BilinearForm:
        return BilinearForm(m.T @ self.gram @ m)

    def __eq__(self, other) -> bool:
        return isinstance(other, BilinearForm) and self.gram == other.gram

    def __repr__(self) -> str:
        return f"BilinearForm({self.gram!r})"


@dataclass(frozen=True)
class InvarianceVerdict:
    ok: bool
    violation: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_invariant(g: LieAlgebra, b: BilinearForm) -> InvarianceVerdict:
    """B([x,y],z) = B(x,[y,z]) on all basis triples."""
    n = g.dim
    if b.dim != n:
        raise DimensionError("form and algebra dimensions differ")
    rows = [b.gram.row(i) for i in range(n)]
    for x in range(n):
        for y in range(n):
            bxy = g.structure[x][y]
            for z in range(n):
                lhs = sum((c * rows[k][z] for k, c in enumerate(bxy) if c), Fraction(0))
                rhs = sum((c * rows[x][k] for k, c in enumerate(g.structure[y][z]) if c), Fraction(0))
                if lhs != rhs:
                    return InvarianceVerdict(False, (x, y, z))
    return InvarianceVerdict(True)


def perp(b: BilinearForm, s: Subspace) -> Subspace:
    if not b.nondegenerate:
        raise HypothesisError("form is degenerate")
    if s.ambient_dim != b.dim:
        raise DimensionError("subspace does not match the form")
    if s.dim == 0:
        return Subspace.full(b.dim)
    return kernel(s.basis @ b.gram)


def radical(b: BilinearForm, s: Subspace) -> Subspace:
    """s intersected with its orthogonal (no nondegeneracy needed)."""
    if s.dim == 0:
        return s
    return intersect(s, kernel(s.basis @ b.gram))


def witt_complement(g: LieAlgebra, b: BilinearForm) -> tuple[Subspace, Subspace]:
    """An isotropic h and a nondegenerate a with g = h + a + i(g), a^perp = h + i(g)."""
    if not b.nondegenerate:
        raise HypothesisError("form is degenerate")
    verdict = is_invariant(g, b)
    if not verdict:
        raise HypothesisError("form is not invariant", f"first failing triple {verdict.violation}")
    i_id, j_id = canonical_ideals(g)
    if i_id == j_id:
        raise HypothesisError("i(g) equals j(g)")
    if perp(b, i_id) != j_id:
        raise HypothesisError("j(g) is not the orthogonal of i(g)")
    n = g.dim
    a = complement_within(j_id, i_id)
    if b.restrict(a).det() == 0 and a.dim:
        raise HypothesisError("form restricted to the complement of i(g) in j(g) is degenerate")
    w = perp(b, a) if a.dim else Subspace.full(n)
    h0 = complement_within(w, i_id)
    ivecs = i_id.vectors()
    p = len(ivecs)
    # dual vectors: combinations of h0 pairing with i as the identity
    pair = Matrix([[b(hv, iv) for iv in ivecs] for hv in h0.vectors()], cols=p) if p else Matrix.zeros(0, 0)
    if pair.rows != p or pair.det() == 0:
        raise HypothesisError("form does not pair the complement with i(g)")
    coeffs = pair.inverse()  # row a: combination of h0 vectors dual to ivecs[a]
    hvecs = []
    for a_idx in range(p):
        vec = [Fraction(0)] * n
        for c, hv in zip(coeffs.row(a_idx), h0.vectors()):
            for t in range(n):
                vec[t] += c * hv[t]
        hvecs.append(vec)
    iso = []
    for a_idx in range(p):
        vec = list(hvecs[a_idx])
        for c_idx in range(p):
            s = b(hvecs[a_idx], hvecs[c_idx]) / 2
            if s:
                for t in range(n):
                    vec[t] -= s * ivecs[c_idx][t]
        iso.append(vec)
    h_sub = Subspace(iso, n)
    _check_witt(b, h_sub, a, i_id)
    return h_sub, a


def _check_witt(b: BilinearForm, h: Subspace, a: Subspace, i_id: Subspace):
    n = b.dim
    if h.dim and not b.restrict(h).is_zero():
        raise AssertionError("h is not isotropic")
    if subspace_sum(subspace_sum(h, a), i_id).dim != n or h.dim + a.dim + i_id.dim != n:
        raise AssertionError("h + a + i is not a direct decomposition")
    if a.dim and perp(b, a) != subspace_sum(h, i_id):
        raise AssertionError("orthogonal of a differs from h + i")


@dataclass(frozen=True)
class MetricCertificate:
    modified_data: ExtensionData
    tau: Cochain
    metric: BilinearForm
    pullback_metric: BilinearForm
    psi: Matrix


@dataclass(frozen=True)
class MetricResult:
    certificate: MetricCertificate | None
    condition: str | None = None  # "precondition", "b1" or "b2"
    detail: str = ""

    def __bool__(self) -> bool:
        return self.certificate is not None


def split_metric(dim_h: int, b_a: BilinearForm) -> BilinearForm:
    """B(x+u+alpha, y+v+beta) = alpha(y) + beta(x) + B_a(u, v) on h + a + h*."""
    n, da = dim_h, b_a.dim
    z = Matrix.zeros
    gram = Matrix.block(
        [
            [z(n, n), z(n, da), Matrix.identity(n)],
            [z(da, n), b_a.gram, z(da, n)],
            [Matrix.identity(n), z(n, da), z(n, n)],
        ]
    )
    return BilinearForm(gram)


def lambda_phi(data: ExtensionData, b_a: BilinearForm) -> dict:
    """Values lambda_phi(x_p, x_q) from (phi(x_p) v)(x_q) = -B_a(lambda_phi(x_p, x_q), v)."""
    n = data.h.dim
    binv = b_a.gram.inverse()
    mats = data.phi_matrices()
    return {(p, q): tuple(-x for x in binv.apply(mats[p].row(q))) for p in range(n) for q in range(n)}


def mu_cyclic_defects(data: ExtensionData) -> list:
    """Triples with mu(x,y)(z) != mu(y,z)(x); i is read as h* in the dual basis."""
    n = data.h.dim
    bad = []
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if data.mu.value((x, y))[z] != data.mu.value((y, z))[x]:
                    bad.append((x, y, z))
    return bad


def metric_check(data: ExtensionData, b_a: BilinearForm) -> MetricResult:
    h = data.h
    n = h.dim
    if data.dim_i != n:
        return MetricResult(None, "precondition", "dim i differs from dim h")
    if b_a.dim != data.dim_a:
        return MetricResult(None, "precondition", "B_a has the wrong size")
    if not b_a.nondegenerate:
        return MetricResult(None, "precondition", "B_a is degenerate")
    if data.rho.matrices != coadjoint(h).matrices:
        return MetricResult(None, "precondition", "rho is not the coadjoint representation")
    if not data.is_valid():
        return MetricResult(None, "precondition", "extension data are not a cocycle")
    bad = mu_cyclic_defects(data)
    if bad:
        return MetricResult(None, "b1", f"mu is not cyclic at basis triple {bad[0]}")
    lphi = lambda_phi(data, b_a)
    for p in range(n):
        for q in range(p, n):
            if lphi[(p, q)] != tuple(-x for x in lphi[(q, p)]):
                return MetricResult(None, "b2", f"lambda_phi is not skew at ({p}, {q})")
    da = data.dim_a
    target = Cochain(2, n, da, {(p, q): lphi[(p, q)] for p in range(n) for q in range(p + 1, n)}) - data.lam
    # unknown tau: d tau = target, e_phi(tau) = 0
    cols = []
    for t in range(n * da):
        vec = [0] * (n * da)
        vec[t] = 1
        tau = Cochain.from_vector(1, n, da, vec)
        cols.append(differential(trivial(h, da), tau).to_vector() + e_phi(data.phi, tau, data.dim_i, da).to_vector())
    a_mat = Matrix.from_columns(cols)
    rhs = target.to_vector() + Cochain.zero(2, n, data.dim_i).to_vector()
    x = solve(a_mat, Matrix.column(rhs))
    if x is None:
        return MetricResult(None, "b2", "no tau in ker e_phi with lambda_phi = lambda + d tau")
    tau = Cochain.from_vector(1, n, da, x.col(0))
    modified = data.replace(lam=data.lam + differential(trivial(h, da), tau))
    metric = split_metric(n, b_a)
    built_mod = build(modified)
    if not is_invariant(built_mod, metric):
        raise AssertionError("metric on the modified data is not invariant")
    w0 = IsomorphismWitness.identity(data)
    witness = IsomorphismWitness(w0.g, w0.h_a, w0.k, w0.T, -tau, w0.nu)
    if not verify_witness(data, modified, witness):
        raise AssertionError("transport map to the modified data is not an isomorphism")
    psi = witness.psi()
    pull = metric.pullback(psi)
    original = build(data)
    if not is_invariant(original, pull) or not pull.nondegenerate:
        raise AssertionError("pulled-back metric fails on the original algebra")
    return MetricResult(MetricCertificate(modified, tau, metric, pull, psi))


def metric_exists(data: ExtensionData, b_a: BilinearForm) -> MetricCertificate | None:
    return metric_check(data, b_a).certificate


@dataclass(frozen=True)
class DoubleExtensionData:
    dim_v: int
    b_v: BilinearForm
    d_map: Matrix

    def __post_init__(self):
        if self.b_v.dim != self.dim_v or self.d_map.shape != (self.dim_v, self.dim_v):
            raise DimensionError("B_V and D must act on V")
        if not self.b_v.nondegenerate:
            raise HypothesisError("B_V is degenerate")
        skew = self.d_map.T @ self.b_v.gram + self.b_v.gram @ self.d_map
        if not skew.is_zero():
            raise HypothesisError("D is not skew with respect to B_V")


def double_extension(dd: DoubleExtensionData) -> tuple[LieAlgebra, BilinearForm]:
    """Basis (D, v_1..v_n, c): [D, w] = D(w), [v, w] = B_V(D v, w) c."""
    nv = dd.dim_v
    N = nv + 2
    br = {}
    for j in range(nv):
        col = dd.d_map.col(j)
        br[(0, 1 + j)] = (0,) + tuple(col) + (0,)
    omega = dd.d_map.T @ dd.b_v.gram
    for i in range(nv):
        for j in range(i + 1, nv):
            if omega[i, j]:
                br[(1 + i, 1 + j)] = (0,) * (N - 1) + (omega[i, j],)
    names = ["D"] + [f"v{k + 1}" for k in range(nv)] + ["c"]
    g = LieAlgebra.from_brackets(N, br, names)
    z = Matrix.zeros
    one = Matrix([[1]])
    gram = Matrix.block([[z(1, 1), z(1, nv), one], [z(nv, 1), dd.b_v.gram, z(nv, 1)], [one, z(1, nv), z(1, 1)]])
    b = BilinearForm(gram)
    if not is_invariant(g, b):
        raise AssertionError("double extension metric is not invariant")
    return g, b


def orthogonal_split_central(g: LieAlgebra, b: BilinearForm) -> tuple[Subspace, Subspace] | None:
    """A maximal central ideal on which b is nondegenerate, with its orthogonal."""
    if not b.nondegenerate or not is_invariant(g, b):
        raise HypothesisError("form is not an invariant metric")
    z = center(g)
    rad = radical(b, z)
    piece = complement_within(z, rad)
    if piece.dim == 0:
        return None
    rest = perp(b, piece)
    if not (is_subalgebra(g, rest) and bracket_subspaces(g, piece, rest).dim == 0):
        raise AssertionError("orthogonal split is not a Lie splitting")
    return piece, rest


@dataclass(frozen=True)
class ExtractedExtension:
    data: ExtensionData
    b_a: BilinearForm
    basis: Matrix  # columns: new basis (h, a, i) in old coordinates


def extract_extension(g: LieAlgebra, b: BilinearForm) -> ExtractedExtension:
    """Read (lam, mu, phi, rho) off a quadratic algebra with i(g) != j(g).

    The i-block basis is chosen dual to the h-block basis, so that rho becomes
    the coadjoint representation.
    """
    h_sub, a_sub = witt_complement(g, b)
    i_id, j_id = canonical_ideals(g)
    if not is_abelian_subspace(g, j_id):
        raise HypothesisError("j(g) is not abelian")
    if not i_id.contains_space(bracket_subspaces(g, g.full(), j_id)):
        raise HypothesisError("[g, j(g)] is not contained in i(g)")
    n_h = h_sub.dim
    hvecs = h_sub.vectors()
    ivecs = i_id.vectors()
    pair = Matrix([[b(hv, iv) for iv in ivecs] for hv in hvecs], cols=len(ivecs))
    coeffs = pair.inverse().T
    dual = []
    for row in coeffs:
        vec = [Fraction(0)] * g.dim
        for c, iv in zip(row, ivecs):
            for t in range(g.dim):
                vec[t] += c * iv[t]
        dual.append(vec)
    cols = list(hvecs) + list(a_sub.vectors()) + dual
    p = Matrix.from_columns(cols)
    pinv = p.inverse()
    da = a_sub.dim

    def coords(u, v):
        return pinv.apply(g.bracket(u, v))

    hstruct = [[coords(hvecs[i], hvecs[j])[:n_h] for j in range(n_h)] for i in range(n_h)]
    h_alg = LieAlgebra(hstruct, [f"x{k + 1}" for k in range(n_h)])
    lam = {}
    mu = {}
    for i in range(n_h):
        for j in range(i + 1, n_h):
            c = coords(hvecs[i], hvecs[j])
            lam[(i, j)] = c[n_h : n_h + da]
            mu[(i, j)] = c[n_h + da :]
    phis = []
    rhos = []
    avecs = a_sub.vectors()
    for i in range(n_h):
        phis.append(
            Matrix.from_columns([coords(hvecs[i], av)[n_h + da :] for av in avecs], rows=n_h)
            if da
            else Matrix.zeros(n_h, 0)
        )
        rhos.append(Matrix.from_columns([coords(hvecs[i], dv)[n_h + da :] for dv in dual]))
    rho = Representation(h_alg, n_h, rhos)
    phi = phi_cochain(n_h, phis) if n_h else Cochain.zero(1, 0, 0)
    data = ExtensionData(h_alg, da, n_h, rho, phi, Cochain(2, n_h, da, lam), Cochain(2, n_h, n_h, mu))
    b_a = BilinearForm(b.restrict(a_sub)) if da else BilinearForm(Matrix.zeros(0, 0))
    return ExtractedExtension(data, b_a, p)


def lambda_phi_duality_defects(data: ExtensionData, b_a: BilinearForm) -> list:
    """Triples (x, y, v) with -B_a(lam(x,y), v) != (phi(x)(v))(y)."""
    n = data.h.dim
    mats = data.phi_matrices()
    bad = []
    for x in range(n):
        for y in range(n):
            lv = data.lam.value((x, y))
            for v in range(data.dim_a):
                unit_v = [Fraction(int(t == v)) for t in range(data.dim_a)]
                if -b_a(lv, unit_v) != mats[x][y, v]:
                    bad.append((x, y, v))
    return bad


def series_perp_defects(g: LieAlgebra, b: BilinearForm) -> list[str]:
    """Failures of perp(g^l) = C_l = centralizer(g^(l-1)) for every l."""
    rep = series(g)
    out = []
    top = max(rep.m, 1) + 1
    for ell in range(1, top + 1):
        lhs = perp(b, rep.lower(ell))
        c = rep.central(ell)
        cz = centralizer_of(g, rep.lower(ell - 1))
        if lhs != c:
            out.append(f"perp(g^{ell}) != C_{ell}")
        if c != cz:
            out.append(f"C_{ell} != centralizer(g^{ell - 1})")
    return out
