"""Abelian extensions g = h + a + i built from cocycle data (lam, mu, phi, rho),
isomorphism witnesses between them, and the fixed-representation
cohomology test."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cechain import (
    Cochain,
    GroupElement,
    Representation,
    act_on_cochain,
    act_on_phi,
    act_on_representation,
    big_d,
    differential,
    hom_representation,
    phi_matrices,
    sigma_block,
    trivial,
)
from .exactlin import DimensionError, Matrix, kernel, solve
from .liecore import LieAlgebra, is_automorphism, jacobi_defect

COND_DLAM = "dλ = 0"
COND_DMU = "dμ + e_φ(λ) = 0"
COND_DPHI = "dφ = 0"


class InvalidExtension(ValueError):
    def __init__(self, failures: dict):
        self.failures = failures
        super().__init__("invalid extension data: " + ", ".join(f"{k} fails" for k in failures))


@dataclass(frozen=True)
class ExtensionData:
    h: LieAlgebra
    dim_a: int
    dim_i: int
    rho: Representation
    phi: Cochain
    lam: Cochain
    mu: Cochain

    def __post_init__(self):
        n = self.h.dim
        if self.rho.h != self.h or self.rho.module_dim != self.dim_i:
            raise DimensionError("rho must represent h on i")
        if (self.phi.degree, self.phi.h_dim, self.phi.module_dim) != (1, n, self.dim_i * self.dim_a):
            raise DimensionError("phi must be a degree-one Hom(a, i)-valued cochain")
        if (self.lam.degree, self.lam.h_dim, self.lam.module_dim) != (2, n, self.dim_a):
            raise DimensionError("lam must be a degree-two a-valued cochain")
        if (self.mu.degree, self.mu.h_dim, self.mu.module_dim) != (2, n, self.dim_i):
            raise DimensionError("mu must be a degree-two i-valued cochain")

    @classmethod
    def trivial(cls, h: LieAlgebra, dim_a: int, dim_i: int, rho: Representation | None = None) -> ExtensionData:
        n = h.dim
        return cls(
            h,
            dim_a,
            dim_i,
            rho or trivial(h, dim_i),
            Cochain.zero(1, n, dim_i * dim_a),
            Cochain.zero(2, n, dim_a),
            Cochain.zero(2, n, dim_i),
        )

    def replace(self, **changes) -> ExtensionData:
        fields = {
            "h": self.h,
            "dim_a": self.dim_a,
            "dim_i": self.dim_i,
            "rho": self.rho,
            "phi": self.phi,
            "lam": self.lam,
            "mu": self.mu,
        }
        fields.update(changes)
        return ExtensionData(**fields)

    @property
    def dim(self) -> int:
        return self.h.dim + self.dim_a + self.dim_i

    def phi_matrices(self) -> list[Matrix]:
        return phi_matrices(self.phi, self.dim_i, self.dim_a)

    def hom_rep(self) -> Representation:
        return hom_representation(self.rho, self.dim_a)

    def residuals(self) -> dict:
        """Nonzero components among d lam, d mu + e_phi(lam), d phi."""
        first, second = big_d(self.phi, self.rho, self.lam, self.mu)
        dphi = differential(self.hom_rep(), self.phi)
        out = {}
        if not first.is_zero():
            out[COND_DLAM] = first
        if not second.is_zero():
            out[COND_DMU] = second
        if not dphi.is_zero():
            out[COND_DPHI] = dphi
        return out

    def is_valid(self) -> bool:
        return not self.residuals() and self.rho.is_homomorphism()

    def block_names(self) -> list[str]:
        a = [f"v{k + 1}" for k in range(self.dim_a)]
        i = [f"t{k + 1}" for k in range(self.dim_i)]
        return list(self.h.basis_names) + a + i


def structure_tensor(data: ExtensionData) -> list:
    """[x,y] = [x,y]_h + lam + mu, [x,v] = phi(x)v, [x,t] = rho(x)t; basis (h, a, i)."""
    n, da, di = data.h.dim, data.dim_a, data.dim_i
    N = n + da + di
    c = [[[Fraction(0)] * N for _ in range(N)] for _ in range(N)]

    def put(i, j, vec, offset):
        for k, v in enumerate(vec):
            if v:
                c[i][j][offset + k] += v
                c[j][i][offset + k] -= v

    for i in range(n):
        for j in range(i + 1, n):
            put(i, j, data.h.structure[i][j], 0)
            put(i, j, data.lam.value((i, j)), n)
            put(i, j, data.mu.value((i, j)), n + da)
    phis = data.phi_matrices()
    for i in range(n):
        for a in range(da):
            put(i, n + a, phis[i].col(a), n + da)
        for t in range(di):
            put(i, n + da + t, data.rho.matrices[i].col(t), n + da)
    return c


def build(data: ExtensionData, *, check: bool = True) -> LieAlgebra:
    if check:
        failures = data.residuals()
        if failures:
            raise InvalidExtension(failures)
        if not data.rho.is_homomorphism():
            raise InvalidExtension({"ρ is a representation": data.rho.homomorphism_defects()})
    alg = LieAlgebra.unchecked(structure_tensor(data), data.block_names())
    if check:
        defects = jacobi_defect(alg)
        if defects:
            raise AssertionError("valid cocycle data produced a non-Lie bracket")
    return alg


def build_unchecked(data: ExtensionData) -> LieAlgebra:
    return build(data, check=False)


@dataclass(frozen=True)
class IsomorphismWitness:
    g: Matrix
    h_a: Matrix
    k: Matrix
    T: Matrix
    tau: Cochain
    nu: Cochain

    def sigma(self) -> Matrix:
        return sigma_block(self.h_a, self.k, self.T)

    def gamma(self) -> GroupElement:
        return GroupElement(self.g, self.sigma())

    @classmethod
    def identity(cls, data: ExtensionData) -> IsomorphismWitness:
        n = data.h.dim
        return cls(
            Matrix.identity(n),
            Matrix.identity(data.dim_a),
            Matrix.identity(data.dim_i),
            Matrix.zeros(data.dim_i, data.dim_a),
            Cochain.zero(1, n, data.dim_a),
            Cochain.zero(1, n, data.dim_i),
        )

    def psi(self) -> Matrix:
        """Psi(x) = g x + tau(x) + nu(x), Psi(v) = sigma(v), on the basis (h, a, i)."""
        n, da, di = self.g.rows, self.h_a.rows, self.k.rows
        theta = Matrix.block([[self.tau.matrix()], [self.nu.matrix()]]) if n else Matrix.zeros(da + di, 0)
        top = Matrix.block([[self.g, Matrix.zeros(n, da + di)]])
        bottom = Matrix.block([[theta, self.sigma()]])
        return Matrix.block([[top], [bottom]])

    @classmethod
    def from_psi(cls, psi: Matrix, n: int, da: int, di: int) -> IsomorphismWitness:
        N = n + da + di
        if psi.shape != (N, N):
            raise DimensionError("map has the wrong size")
        if not psi.submatrix(range(n), range(n, N)).is_zero():
            raise ValueError("map does not preserve a + i")
        if not psi.submatrix(range(n, n + da), range(n + da, N)).is_zero():
            raise ValueError("map does not preserve i")
        g = psi.submatrix(range(n), range(n))
        h_a = psi.submatrix(range(n, n + da), range(n, n + da))
        t = psi.submatrix(range(n + da, N), range(n, n + da))
        k = psi.submatrix(range(n + da, N), range(n + da, N))
        tau = Cochain.linear(n, da, psi.submatrix(range(n, n + da), range(n)))
        nu = Cochain.linear(n, di, psi.submatrix(range(n + da, N), range(n)))
        return cls(g, h_a, k, t, tau, nu)

    def compose(self, other: IsomorphismWitness) -> IsomorphismWitness:
        """Witness for self o other."""
        n, da, di = self.g.rows, self.h_a.rows, self.k.rows
        return IsomorphismWitness.from_psi(self.psi() @ other.psi(), n, da, di)

    def inverse(self) -> IsomorphismWitness:
        n, da, di = self.g.rows, self.h_a.rows, self.k.rows
        return IsomorphismWitness.from_psi(self.psi().inverse(), n, da, di)


@dataclass
class WitnessVerdict:
    residual_ok: bool
    bracket_ok: bool
    residuals: dict = field(default_factory=dict)
    bracket_failures: list = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return self.residual_ok == self.bracket_ok

    def __bool__(self) -> bool:
        return self.residual_ok and self.bracket_ok


def _check_witness_shapes(d1: ExtensionData, d2: ExtensionData, w: IsomorphismWitness):
    if (d1.h.dim, d1.dim_a, d1.dim_i) != (d2.h.dim, d2.dim_a, d2.dim_i):
        raise DimensionError("extensions have different block dimensions")
    n, da, di = d1.h.dim, d1.dim_a, d1.dim_i
    if w.g.shape != (n, n) or w.h_a.shape != (da, da) or w.k.shape != (di, di) or w.T.shape != (di, da):
        raise DimensionError("witness blocks have the wrong shapes")
    for m, name in ((w.g, "g"), (w.h_a, "h"), (w.k, "k")):
        if not m.is_invertible():
            raise ValueError(f"witness component {name} is singular")


def witness_residuals(d1: ExtensionData, d2: ExtensionData, w: IsomorphismWitness) -> dict:
    """Residuals of
        Phi(gamma)(lam, mu) = (lam', mu') + D'_phi'(tau o g^-1, nu o g^-1)
        Phi(gamma) phi      = phi' + d'(T o h^-1)
        Phi(gamma) rho      = rho'
    together with the requirement that g be an automorphism of h."""
    _check_witness_shapes(d1, d2, w)
    n, da, di = d1.h.dim, d1.dim_a, d1.dim_i
    out = {}
    if d1.h != d2.h:
        out["same h"] = "base algebras differ"
        return out
    if not is_automorphism(d1.h, w.g):
        out["g ∈ Aut(h)"] = w.g
    g_ga = GroupElement(w.g, w.h_a)
    g_k = GroupElement(w.g, w.k)
    g_t = act_on_cochain(GroupElement(w.g, Matrix.identity(da)), d1.lam)

    lam_t = act_on_cochain(g_ga, d1.lam)
    mu_t = act_on_cochain(g_k, d1.mu) + g_t.map_values(w.T)
    tau_g = act_on_cochain(GroupElement(w.g, Matrix.identity(da)), w.tau)
    nu_g = act_on_cochain(GroupElement(w.g, Matrix.identity(di)), w.nu)
    cob_lam, cob_mu = big_d(d2.phi, d2.rho, tau_g, nu_g)
    r_lam = lam_t - d2.lam - cob_lam
    r_mu = mu_t - d2.mu - cob_mu
    if not r_lam.is_zero():
        out["λ"] = r_lam
    if not r_mu.is_zero():
        out["μ"] = r_mu

    phi_t = act_on_phi(w.g, w.h_a, w.k, d1.phi, di, da)
    th = w.T @ w.h_a.inverse()
    zero_cochain = Cochain(0, n, di * da, {(): tuple(v for r in th for v in r)})
    r_phi = phi_t - d2.phi - differential(d2.hom_rep(), zero_cochain)
    if not r_phi.is_zero():
        out["φ"] = r_phi

    rho_t = act_on_representation(GroupElement(w.g, w.k), d1.rho)
    if rho_t.matrices != d2.rho.matrices:
        out["ρ"] = rho_t
    return out


def bracket_check(d1: ExtensionData, d2: ExtensionData, w: IsomorphismWitness) -> list:
    """Basis pairs (a, b) with Psi[a, b] != [Psi a, Psi b]'."""
    _check_witness_shapes(d1, d2, w)
    g1 = build_unchecked(d1)
    g2 = build_unchecked(d2)
    psi = w.psi()
    N = g1.dim
    cols = [psi.col(j) for j in range(N)]
    bad = []
    for a in range(N):
        for b in range(a + 1, N):
            if psi.apply(g1.structure[a][b]) != g2.bracket(cols[a], cols[b]):
                bad.append((a, b))
    if not psi.is_invertible():
        bad.append(("Ψ", "singular"))
    return bad


def verify_witness(d1: ExtensionData, d2: ExtensionData, w: IsomorphismWitness) -> WitnessVerdict:
    res = witness_residuals(d1, d2, w)
    br = bracket_check(d1, d2, w)
    return WitnessVerdict(not res, not br, res, br)


def apply_witness(d1: ExtensionData, w: IsomorphismWitness) -> ExtensionData:
    """The unique data d2 for which w is a witness d1 -> d2."""
    n, da, di = d1.h.dim, d1.dim_a, d1.dim_i
    if not is_automorphism(d1.h, w.g):
        raise ValueError("g is not an automorphism of h")
    rho2 = act_on_representation(GroupElement(w.g, w.k), d1.rho)
    th = w.T @ w.h_a.inverse()
    zero_cochain = Cochain(0, n, di * da, {(): tuple(v for r in th for v in r)})
    phi2 = act_on_phi(w.g, w.h_a, w.k, d1.phi, di, da) - differential(hom_representation(rho2, da), zero_cochain)
    lam_t = act_on_cochain(GroupElement(w.g, w.h_a), d1.lam)
    mu_t = act_on_cochain(GroupElement(w.g, w.k), d1.mu) + act_on_cochain(
        GroupElement(w.g, Matrix.identity(da)), d1.lam
    ).map_values(w.T)
    tau_g = act_on_cochain(GroupElement(w.g, Matrix.identity(da)), w.tau)
    nu_g = act_on_cochain(GroupElement(w.g, Matrix.identity(di)), w.nu)
    cob_lam, cob_mu = big_d(phi2, rho2, tau_g, nu_g)
    return d1.replace(rho=rho2, phi=phi2, lam=lam_t - cob_lam, mu=mu_t - cob_mu)


def coboundary_matrix(data: ExtensionData) -> Matrix:
    """Matrix of (tau, nu) -> D_phi(tau, nu) in to_vector coordinates."""
    n, da, di = data.h.dim, data.dim_a, data.dim_i
    cols = []
    for t in range(n * (da + di)):
        vec = [0] * (n * (da + di))
        vec[t] = 1
        tau = Cochain.from_vector(1, n, da, vec[: n * da])
        nu = Cochain.from_vector(1, n, di, vec[n * da :])
        first, second = big_d(data.phi, data.rho, tau, nu)
        cols.append(first.to_vector() + second.to_vector())
    if not cols:
        return Matrix.zeros(0, 0)
    return Matrix.from_columns(cols)


def same_class_fixed_R(d1: ExtensionData, d2: ExtensionData) -> IsomorphismWitness | None:
    """Witness with identity (g, h, k, T) when (lam, mu) - (lam', mu') = D_phi(tau, nu)."""
    if d1.h != d2.h or (d1.dim_a, d1.dim_i) != (d2.dim_a, d2.dim_i):
        raise DimensionError("extensions live over different spaces")
    if d1.phi != d2.phi or d1.rho != d2.rho:
        raise ValueError("the fixed-representation test needs identical phi and rho")
    n, da, di = d1.h.dim, d1.dim_a, d1.dim_i
    w0 = IsomorphismWitness.identity(d1)
    if n == 0:
        return w0 if (d1.lam == d2.lam and d1.mu == d2.mu) else None
    a = coboundary_matrix(d1)
    rhs = (d1.lam - d2.lam).to_vector() + (d1.mu - d2.mu).to_vector()
    x = solve(a, Matrix.column(rhs))
    if x is None:
        return None
    vec = x.col(0)
    tau = Cochain.from_vector(1, n, da, vec[: n * da])
    nu = Cochain.from_vector(1, n, di, vec[n * da :])
    return IsomorphismWitness(w0.g, w0.h_a, w0.k, w0.T, tau, nu)


def cocycle_space(data: ExtensionData):
    """Kernel of D_phi on degree-two (lam, mu), as a Subspace of coordinate vectors."""
    n, da, di = data.h.dim, data.dim_a, data.dim_i
    cols = []
    size_lam = len(list(Cochain.zero(2, n, da).keys())) * da
    total = size_lam + len(list(Cochain.zero(2, n, di).keys())) * di
    for t in range(total):
        vec = [0] * total
        vec[t] = 1
        lam = Cochain.from_vector(2, n, da, vec[:size_lam])
        mu = Cochain.from_vector(2, n, di, vec[size_lam:])
        first, second = big_d(data.phi, data.rho, lam, mu)
        cols.append(first.to_vector() + second.to_vector())
    return kernel(Matrix.from_columns(cols))


@dataclass
class GroupCheck:
    composite: IsomorphismWitness
    composite_verdict: WitnessVerdict
    factorizations_ok: bool

    def __bool__(self) -> bool:
        return bool(self.composite_verdict) and self.factorizations_ok


def factorization_ok(w: IsomorphismWitness) -> bool:
    """Psi = (Id 0; Theta o g^-1 Id) (g 0; 0 sigma)."""
    n = w.g.rows
    m = w.psi().rows - n
    theta = w.psi().submatrix(range(n, n + m), range(n))
    shear = Matrix.block([[Matrix.identity(n), Matrix.zeros(n, m)], [theta @ w.g.inverse(), Matrix.identity(m)]])
    diag = Matrix.block([[w.g, Matrix.zeros(n, m)], [Matrix.zeros(m, n), w.sigma()]])
    return shear @ diag == w.psi()


def iso_group_check(d: ExtensionData, w1: IsomorphismWitness, w2: IsomorphismWitness) -> GroupCheck:
    for w in (w1, w2):
        if not verify_witness(d, d, w):
            raise ValueError("input is not a self-witness of the extension")
    comp = w1.compose(w2)
    verdict = verify_witness(d, d, comp)
    fact = all(factorization_ok(w) for w in (w1, w2, comp))
    return GroupCheck(comp, verdict, fact)
