"""Extensions of the three-dimensional Heisenberg algebra by F^r + h*.

Matrix conventions: lam is r x 3 and mu is 3 x 3, with columns holding the
values on the pairs (x2, x3), (x3, x1), (x1, x2).  phi(x_j) is the 3 x r
matrix phi^j with phi(x_j) v_l = sum_i phi^j[i, l] theta^i.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .cechain import Cochain, coadjoint, differential, phi_cochain, trivial
from .exactlin import Matrix, Q, Subspace, kernel, solve
from .extension import ExtensionData, IsomorphismWitness, apply_witness, build, verify_witness
from .liecore import bracket_subspaces, center, heisenberg, is_automorphism, is_subalgebra
from .quadratic import (
    BilinearForm,
    MetricCertificate,
    MetricResult,
    metric_check,
    orthogonal_split_central,
    perp,
)

H = heisenberg()
COADJOINT = coadjoint(H)

# column j of the lam / mu matrices is the value on PAIRS[j]
PAIRS = ((1, 2), (2, 0), (0, 1))

COMPONENT_NAMES = ("theta1-component", "theta2-component", "theta3-component")
PHI3_NAME = "phi3 determined by phi1, phi2"

TAGS = ("1.1", "2.1", "2.2", "2.3", "2.4", "3.1", "3.2", "3.3", "3.4")
QUADRATIC_TAGS = ("1.1", "2.1", "3.3", "3.4")


def pair_cochain(m: Matrix) -> Cochain:
    rows = m.rows
    return Cochain(2, 3, rows, {PAIRS[j]: m.col(j) for j in range(3)})


def pair_matrix(c: Cochain) -> Matrix:
    return Matrix.from_columns([c.value(p) for p in PAIRS], rows=c.module_dim)


def phi3_from(phi1: Matrix, phi2: Matrix) -> Matrix:
    r = phi1.cols
    return Matrix([[-phi1[2, l] for l in range(r)], [-phi2[2, l] for l in range(r)], [0] * r], cols=r)


def component_residuals(phi1: Matrix, phi2: Matrix, lam: Matrix, mu: Matrix) -> tuple:
    """The three scalar equations equivalent to d mu + e_phi(lam) = 0."""
    p1 = phi1 @ lam
    p2 = phi2 @ lam
    return (
        p1[0, 0] + p2[0, 1] - p1[2, 2] + mu[2, 1],
        p1[1, 0] + p2[1, 1] - p2[2, 2] - mu[2, 0],
        p1[2, 0] + p2[2, 1],
    )


class InvalidHeisExtension(ValueError):
    def __init__(self, failures: list[str]):
        self.failures = failures
        super().__init__("; ".join(failures))


def _as_matrix(m, rows=None, cols=None) -> Matrix:
    m = m if isinstance(m, Matrix) else Matrix(m)
    if rows is not None and m.rows != rows or cols is not None and m.cols != cols:
        raise ValueError(f"expected a {rows} x {cols} matrix, got {m.rows} x {m.cols}")
    return m


@dataclass(frozen=True)
class HeisExtension:
    r: int
    phi1: Matrix
    phi2: Matrix
    phi3: Matrix
    lam: Matrix
    mu: Matrix

    def __post_init__(self):
        if self.r < 3:
            raise ValueError("r must be at least 3")
        for name in ("phi1", "phi2", "phi3"):
            _as_matrix(getattr(self, name), 3, self.r)
        _as_matrix(self.lam, self.r, 3)
        _as_matrix(self.mu, 3, 3)

    @classmethod
    def make(cls, lam, mu, phi1=None, phi2=None, phi3=None) -> HeisExtension:
        lam = _as_matrix(lam)
        r = lam.rows
        phi1 = Matrix.zeros(3, r) if phi1 is None else _as_matrix(phi1, 3, r)
        phi2 = Matrix.zeros(3, r) if phi2 is None else _as_matrix(phi2, 3, r)
        phi3 = phi3_from(phi1, phi2) if phi3 is None else _as_matrix(phi3, 3, r)
        return cls(r, phi1, phi2, phi3, lam, _as_matrix(mu, 3, 3))

    @classmethod
    def zero(cls, r: int) -> HeisExtension:
        return cls.make(Matrix.zeros(r, 3), Matrix.zeros(3, 3))

    @property
    def phis(self) -> tuple[Matrix, Matrix, Matrix]:
        return self.phi1, self.phi2, self.phi3

    def failures(self) -> list[str]:
        out = []
        if self.phi3 != phi3_from(self.phi1, self.phi2):
            out.append(PHI3_NAME)
        res = component_residuals(self.phi1, self.phi2, self.lam, self.mu)
        out.extend(name for name, v in zip(COMPONENT_NAMES, res) if v)
        return out

    def is_valid(self) -> bool:
        return not self.failures()

    def truncate(self, r: int) -> HeisExtension:
        cols = range(r)
        return HeisExtension(
            r,
            *(p.submatrix(range(3), cols) for p in self.phis),
            self.lam.submatrix(cols, range(3)),
            self.mu,
        )


def to_extension_data(he: HeisExtension, *, check: bool = True) -> ExtensionData:
    if check:
        bad = he.failures()
        if bad:
            raise InvalidHeisExtension(bad)
    return ExtensionData(
        H,
        he.r,
        3,
        COADJOINT,
        phi_cochain(3, list(he.phis)),
        pair_cochain(he.lam),
        pair_cochain(he.mu),
    )


def from_extension_data(data: ExtensionData) -> HeisExtension:
    if data.h.structure != H.structure or data.dim_i != 3 or data.rho != COADJOINT:
        raise ValueError("data are not an extension of the Heisenberg algebra by its coadjoint module")
    mats = data.phi_matrices()
    return HeisExtension(data.dim_a, mats[0], mats[1], mats[2], pair_matrix(data.lam), pair_matrix(data.mu))


def build_heis(he: HeisExtension):
    return build(to_extension_data(he))


# automorphisms and admissible k


def heis_automorphism(a: Matrix, g31=0, g32=0) -> Matrix:
    """g with top-left block a, bottom row (g31, g32, det a)."""
    d = a.det()
    if d == 0:
        raise ValueError("top-left block must be invertible")
    return Matrix([[a[0, 0], a[0, 1], 0], [a[1, 0], a[1, 1], 0], [g31, g32, d]])


def admissible_k(g: Matrix, k33=1, k13=0, k23=0) -> Matrix:
    """The k with k ad*(g^-1 x) k^-1 = ad*(x): top-left block k33 g33 A^-T."""
    a = g.submatrix(range(2), range(2))
    top = a.inverse().T * (Q(k33) * g[2, 2])
    k = Matrix([[top[0, 0], top[0, 1], k13], [top[1, 0], top[1, 1], k23], [0, 0, k33]])
    return k


def witness(
    he: HeisExtension,
    g: Matrix | None = None,
    h_a: Matrix | None = None,
    k: Matrix | None = None,
    T: Matrix | None = None,
    tau: Matrix | None = None,
    nu: Matrix | None = None,
) -> IsomorphismWitness:
    """Witness from matrix pieces; missing pieces default to identity or zero.

    tau is r x 3 and nu is 3 x 3 (column j is the value on x_j).
    """
    r = he.r
    g = Matrix.identity(3) if g is None else g
    k = admissible_k(g) if k is None else k
    return IsomorphismWitness(
        g,
        Matrix.identity(r) if h_a is None else h_a,
        k,
        Matrix.zeros(3, r) if T is None else T,
        Cochain.linear(3, r, Matrix.zeros(r, 3) if tau is None else tau),
        Cochain.linear(3, 3, Matrix.zeros(3, 3) if nu is None else nu),
    )


def act(he: HeisExtension, w: IsomorphismWitness) -> HeisExtension:
    return from_extension_data(apply_witness(to_extension_data(he, check=False), w))


# canonical forms of lam


LAM_FORMS = ("identity", "e11", "zero")


def canonical_lambda(form: str, r: int) -> Matrix:
    rows = [[0, 0, 0] for _ in range(r)]
    if form == "identity":
        for i in range(3):
            rows[i][i] = 1
    elif form == "e11":
        rows[0][0] = 1
    elif form != "zero":
        raise ValueError(f"unknown form {form!r}")
    return Matrix(rows, cols=3)


def lambda_rank(lam: Matrix) -> int:
    """Rank of [w1 | w2], invariant under the group action and coboundaries."""
    return lam.submatrix(range(lam.rows), range(2)).rank()


def _completion(vectors: list[tuple], r: int) -> Matrix:
    """Invertible r x r matrix whose first columns are the given vectors."""
    cols = list(vectors)
    span = Subspace(cols, r) if cols else Subspace.zero(r)
    for i in range(r):
        e = tuple(Fraction(int(t == i)) for t in range(r))
        if not span.contains(e):
            cols.append(e)
            span = Subspace(cols, r)
    return Matrix.from_columns(cols, rows=r)


@dataclass(frozen=True)
class LambdaReduction:
    form: str
    canonical: Matrix
    h_a: Matrix
    g: Matrix
    tau: Matrix  # r x 3, column j is tau(x_j)


def coboundary_matrix_lam(tau: Matrix) -> Matrix:
    """Matrix of d tau for trivial coefficients: only the (x1, x2) column, equal to -tau(x3)."""
    c = Cochain.linear(3, tau.rows, tau)
    return pair_matrix(differential(trivial(H, tau.rows), c))


def group_action_lam(lam: Matrix, g: Matrix, h_a: Matrix) -> Matrix:
    return h_a @ lam @ g.T * (Fraction(1) / g.det())


def reduce_lambda(lam) -> LambdaReduction:
    lam = _as_matrix(lam)
    r = lam.rows
    if r < 3:
        raise ValueError("r must be at least 3")
    w1, w2 = lam.col(0), lam.col(1)
    rank = lambda_rank(lam)
    g = Matrix.identity(3)
    if rank == 2:
        form = "identity"
        hinv = _completion([w1, w2], r)
    elif rank == 1:
        form = "e11"
        if any(w1):
            alpha = next(b / a for a, b in zip(w1, w2) if a)
            g = Matrix([[1, 0, 0], [-alpha, 1, 0], [0, 0, 1]])
            hinv = _completion([w1], r)
        else:
            g = Matrix([[0, 1, 0], [-1, 0, 0], [0, 0, 1]])
            hinv = _completion([w2], r)
    else:
        form = "zero"
        hinv = Matrix.identity(r)
    h_a = hinv.inverse()
    moved = group_action_lam(lam, g, h_a)
    target = canonical_lambda(form, r)
    # d tau only moves column 3, by -tau(x3)
    tau3 = tuple(a - b for a, b in zip(moved.col(2), target.col(2)))
    tau = Matrix.from_columns([(0,) * r, (0,) * r, tau3], rows=r)
    red = LambdaReduction(form, target, h_a, g, tau)
    if group_action_lam(lam, g, h_a) + coboundary_matrix_lam(tau) != target:
        raise AssertionError("lambda reduction witness does not reproduce the canonical form")
    if not is_automorphism(H, g):
        raise AssertionError("reduction used a non-automorphism")
    return red


# classification


@dataclass(frozen=True)
class Classification:
    tag: str | None
    canonical: HeisExtension | None
    witness: IsomorphismWitness | None
    note: str = ""
    tag_is_invariant: bool = True


def phi_third_rows(he: HeisExtension) -> Matrix:
    """Third rows of phi1 and phi2; they govern how coboundaries can move mu."""
    return Matrix([he.phi1.row(2), he.phi2.row(2)])


NON_INVARIANT_NOTE = (
    "phi1, phi2 have nonzero third rows, so e_phi(tau) can move mu between families; "
    "the tag names a reachable representative, not an isomorphism invariant"
)


def _compose(w_later: IsomorphismWitness, w_first: IsomorphismWitness) -> IsomorphismWitness:
    return w_later.compose(w_first)


def _step(he: HeisExtension, w: IsomorphismWitness, acc: IsomorphismWitness):
    return act(he, w), _compose(w, acc)


def _solve_affine(
    he: HeisExtension,
    make: Callable[[Sequence], IsomorphismWitness],
    nparams: int,
    target: Callable[[HeisExtension], tuple],
):
    """Parameters p with target(act(he, make(p))) = 0, for target affine in p."""
    base = target(act(he, make([0] * nparams)))
    cols = []
    for t in range(nparams):
        p = [0] * nparams
        p[t] = 1
        v = target(act(he, make(p)))
        cols.append(tuple(a - b for a, b in zip(v, base)))
    a = Matrix.from_columns(cols, rows=len(base))
    x = solve(a, Matrix.column([-b for b in base]))
    if x is None:
        raise AssertionError("normalizing step has no solution")
    return list(x.col(0))


def _clear_mu_columns(he: HeisExtension, acc: IsomorphismWitness, columns: Sequence[int], use_t: bool):
    """Zero the listed mu columns using nu(x3) and, if allowed, T(v1)."""
    r = he.r

    def make(p):
        nu = Matrix.from_columns([(0, 0, 0), (0, 0, 0), p[:3]])
        t = None
        if use_t:
            t = Matrix.from_columns([p[3:6]] + [(0, 0, 0)] * (r - 1), rows=3)
        return witness(he, T=t, nu=nu)

    def target(x: HeisExtension):
        return tuple(x.mu[i, j] for j in columns for i in range(3))

    p = _solve_affine(he, make, 6 if use_t else 3, target)
    return _step(he, make(p), acc)


def _jordan_basis(m: Matrix):
    """Rational B with B^-1 M B diagonal or lower Jordan, or None for irrational eigenvalues."""
    tr = m[0, 0] + m[1, 1]
    det = m.det()
    disc = tr * tr - 4 * det
    if m[0, 1] == 0 and m[1, 0] == 0:
        return Matrix.identity(2), "diagonal"
    if disc == 0:
        e = tr / 2
        n = m - Matrix.identity(2) * e
        # v1 outside ker n, v2 = n v1
        v1 = (1, 0) if any(n.col(0)) else (0, 1)
        v2 = n.apply(v1)
        return Matrix.from_columns([v1, v2]), "jordan"
    root = _rational_sqrt(disc)
    if root is None:
        return None, "irrational"
    vecs = []
    for e in sorted(((tr + root) / 2, (tr - root) / 2), reverse=True):
        ker = kernel(m - Matrix.identity(2) * e)
        vecs.append(ker.vectors()[0])
    return Matrix.from_columns(vecs), "diagonal"


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    a, b = isqrt(n), isqrt(d)
    if a * a == n and b * b == d:
        return Fraction(a, b)
    return None


def classify(he: HeisExtension) -> Classification:
    """Reduce to one of the nine canonical families, with a verified witness."""
    if not he.is_valid():
        raise InvalidHeisExtension(he.failures())
    r = he.r
    acc = witness(he)
    red = reduce_lambda(he.lam)
    g = red.g
    # psi tau = -tau o g gives lam' = (g, h).lam + d(tau) on the target side
    tau_w = (red.tau @ g) * -1
    cur, acc = _step(he, witness(he, g=g, h_a=red.h_a, tau=tau_w), acc)
    if cur.lam != red.canonical:
        raise AssertionError("lambda reduction was not reproduced by the group action")
    mu = cur.mu
    if red.form == "identity":
        t = Matrix.from_columns([tuple(-x for x in mu.col(j)) for j in range(3)] + [(0, 0, 0)] * (r - 3), rows=3)
        cur, acc = _step(cur, witness(cur, T=t), acc)
        tag = "1.1"
    elif red.form == "e11":
        cur, acc = _clear_mu_columns(cur, acc, (0, 2), use_t=True)
        m12, m22, m32 = cur.mu.col(1)
        if m32:
            k = admissible_k(Matrix.identity(3), k33=1 / m32, k13=-m12 / (m32 * m32), k23=-m22 / (m32 * m32))
            cur, acc = _step(cur, witness(cur, k=k), acc)
            tag = "2.4"
        elif m12:
            # g with g(x2) = s x1 + x2 moves mu22 by -s mu12
            g2 = Matrix([[1, m22 / m12, 0], [0, 1, 0], [0, 0, 1]])
            cur, acc = _step(cur, witness(cur, g=g2), acc)
            cur, acc = _clear_mu_columns(cur, acc, (0, 2), use_t=True)
            m12 = cur.mu[0, 1]
            cur, acc = _step(cur, witness(cur, k=admissible_k(Matrix.identity(3), k33=1 / m12)), acc)
            tag = "2.2"
        elif m22:
            cur, acc = _step(cur, witness(cur, k=admissible_k(Matrix.identity(3), k33=1 / m22)), acc)
            tag = "2.3"
        else:
            tag = "2.1"
    else:
        cur, acc = _clear_mu_columns(cur, acc, (2,), use_t=False)
        m = cur.mu.submatrix(range(2), range(2))
        if m.is_zero():
            tag = "3.4"
        else:
            b, kind = _jordan_basis(m)
            if b is None:
                return Classification(
                    "3.1", None, None, "eigenvalues are irrational; no rational witness", phi_third_rows(he).is_zero()
                )
            if kind == "jordan" and m[0, 0] + m[1, 1] == 0:
                return Classification(
                    None,
                    None,
                    None,
                    "nonzero nilpotent 2 x 2 block lies outside the nine families",
                    phi_third_rows(he).is_zero(),
                )
            # mu block transforms as A^-T M A^T, so take A^T = B
            g2 = heis_automorphism(b.T)
            cur, acc = _step(cur, witness(cur, g=g2), acc)
            e1 = cur.mu[0, 0]
            if e1 == 0:
                # put the nonzero eigenvalue first
                swap = heis_automorphism(Matrix([[0, 1], [-1, 0]]))
                cur, acc = _step(cur, witness(cur, g=swap), acc)
                e1 = cur.mu[0, 0]
            # move half of mu11 into the corner, then scale mu11 to 1
            cur, acc = _solve_corner(cur, acc)
            scale = cur.mu[0, 0]
            cur, acc = _step(cur, witness(cur, k=admissible_k(Matrix.identity(3), k33=1 / scale)), acc)
            m = cur.mu
            if m[0, 1] == 0 and m[1, 0] == 0 and m[1, 1] == 1:
                tag = "3.3"
            elif m[1, 0] != 0:
                tag = "3.2"
            else:
                tag = "3.1"
    verdict = verify_witness(to_extension_data(he), to_extension_data(cur), acc)
    if not verdict.agree or not verdict:
        raise AssertionError("classification witness failed verification")
    if not matches_family(cur, tag):
        raise AssertionError(f"reduced data do not have the shape of family {tag}")
    invariant = red.form == "identity" or phi_third_rows(he).is_zero()
    return Classification(tag, cur, acc, "" if invariant else NON_INVARIANT_NOTE, invariant)


def _solve_corner(he: HeisExtension, acc: IsomorphismWitness):
    """Choose nu(x3) with mu33 = mu11 and the third column otherwise zero."""

    def make(p):
        return witness(he, nu=Matrix.from_columns([(0, 0, 0), (0, 0, 0), p[:3]]))

    def target(x: HeisExtension):
        return (x.mu[0, 2], x.mu[1, 2], x.mu[2, 2] - x.mu[0, 0])

    p = _solve_affine(he, make, 3, target)
    return _step(he, make(p), acc)


# the nine families


@dataclass(frozen=True)
class CanonicalFamily:
    tag: str
    lam_form: str
    parameters: tuple[str, ...]
    parameter_conditions: tuple[str, ...]
    mu: Callable[[dict], Matrix] = field(compare=False, repr=False)
    valid_parameters: Callable[[dict], bool] = field(compare=False, repr=False)
    default_parameters: dict = field(compare=False, default_factory=dict)

    def lam(self, r: int) -> Matrix:
        return canonical_lambda(self.lam_form, r)

    def phi_constraints(self, r: int) -> list[tuple[dict, Fraction]]:
        """Linear equations on (phi1, phi2) entries, as ({(j, i, l): coef}, constant)."""
        return _phi_constraints(self.lam(r), self.mu(self.default_parameters))

    def describe_constraints(self, r: int) -> list[str]:
        out = []
        for coefs, const in self.phi_constraints(r):
            if not coefs and not const:
                continue
            terms = [f"{_fmt_coef(c)}phi{j + 1}[{i + 1},{l + 1}]" for (j, i, l), c in sorted(coefs.items())]
            text = " + ".join(terms) if terms else "0"
            if const:
                text += f" + {const}"
            out.append(text.replace("+ -", "- ") + " = 0")
        return out

    def instantiate(self, r: int, params: dict | None = None, phi1=None, phi2=None) -> HeisExtension:
        params = dict(self.default_parameters, **(params or {}))
        if not self.valid_parameters(params):
            raise ValueError(f"family {self.tag} requires {', '.join(self.parameter_conditions)}")
        he = HeisExtension.make(self.lam(r), self.mu(params), phi1, phi2)
        bad = he.failures()
        if bad:
            raise InvalidHeisExtension([f"family {self.tag} phi constraints fail"] + bad)
        return he

    def template(self, r: int) -> HeisExtension:
        """The member with every free phi entry zero."""
        return self.sample(r, random.Random(0), lo=0, hi=0)

    def sample(
        self,
        r: int,
        rng: random.Random,
        params: dict | None = None,
        lo: int = -2,
        hi: int = 2,
        third_rows_zero: bool = False,
    ) -> HeisExtension:
        """Random valid member; constrained phi entries are solved for."""
        params = dict(self.default_parameters, **(params or {}))
        lam, mu = self.lam(r), self.mu(params)
        vals = {
            (j, i, l): Fraction(0 if third_rows_zero and i == 2 else rng.randint(lo, hi))
            for j in range(2)
            for i in range(3)
            for l in range(r)
        }
        for coefs, const in _phi_constraints(lam, mu):
            if not coefs:
                if const:
                    raise AssertionError("inconsistent family constraints")
                continue
            pivot = min(coefs)
            rest = sum((c * vals[key] for key, c in coefs.items() if key != pivot), Fraction(0))
            vals[pivot] = -(rest + const) / coefs[pivot]
        phi1 = Matrix([[vals[(0, i, l)] for l in range(r)] for i in range(3)])
        phi2 = Matrix([[vals[(1, i, l)] for l in range(r)] for i in range(3)])
        return self.instantiate(r, params, phi1, phi2)


def _fmt_coef(c: Fraction) -> str:
    if c == 1:
        return ""
    if c == -1:
        return "-"
    return f"{c}*"


def _phi_constraints(lam: Matrix, mu: Matrix) -> list[tuple[dict, Fraction]]:
    """The component equations, read as affine equations in the phi1, phi2 entries."""
    r = lam.rows
    zero = Matrix.zeros(3, r)
    base = component_residuals(zero, zero, lam, mu)
    rows = [{} for _ in range(3)]
    for j in range(2):
        for i in range(3):
            for l in range(r):
                e = Matrix([[int(a == i and b == l) for b in range(r)] for a in range(3)])
                p1, p2 = (e, zero) if j == 0 else (zero, e)
                val = component_residuals(p1, p2, lam, mu)
                for t in range(3):
                    d = val[t] - base[t]
                    if d:
                        rows[t][(j, i, l)] = d
    return [(rows[t], base[t]) for t in range(3)]


def _mu_const(m) -> Callable[[dict], Matrix]:
    mat = Matrix(m)
    return lambda p: mat


def _always(p: dict) -> bool:
    return True


def catalog() -> list[CanonicalFamily]:
    z = [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
    return [
        CanonicalFamily("1.1", "identity", (), (), _mu_const(z), _always),
        CanonicalFamily("2.1", "e11", (), (), _mu_const(z), _always),
        CanonicalFamily("2.2", "e11", (), (), _mu_const([[0, 1, 0], [0, 0, 0], [0, 0, 0]]), _always),
        CanonicalFamily("2.3", "e11", (), (), _mu_const([[0, 0, 0], [0, 1, 0], [0, 0, 0]]), _always),
        CanonicalFamily("2.4", "e11", (), (), _mu_const([[0, 0, 0], [0, 0, 0], [0, 1, 0]]), _always),
        CanonicalFamily(
            "3.1",
            "zero",
            ("mu22",),
            ("mu22 != 1",),
            lambda p: Matrix([[1, 0, 0], [0, p["mu22"], 0], [0, 0, 1]]),
            lambda p: Q(p["mu22"]) != 1,
            {"mu22": Fraction(2)},
        ),
        CanonicalFamily(
            "3.2",
            "zero",
            ("mu21",),
            ("mu21 != 0",),
            lambda p: Matrix([[1, 0, 0], [p["mu21"], 1, 0], [0, 0, 1]]),
            lambda p: Q(p["mu21"]) != 0,
            {"mu21": Fraction(1)},
        ),
        CanonicalFamily("3.3", "zero", (), (), _mu_const([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), _always),
        CanonicalFamily("3.4", "zero", (), (), _mu_const(z), _always),
    ]


def family(tag: str) -> CanonicalFamily:
    for f in catalog():
        if f.tag == tag:
            return f
    raise KeyError(tag)


def matches_family(he: HeisExtension, tag: str) -> bool:
    """Whether (lam, mu) have exactly the canonical shape of the family."""
    fam = family(tag)
    if he.lam != fam.lam(he.r):
        return False
    mu = he.mu
    if tag == "3.1":
        return mu == fam.mu({"mu22": mu[1, 1]}) and mu[1, 1] != 1
    if tag == "3.2":
        return mu == fam.mu({"mu21": mu[1, 0]}) and mu[1, 0] != 0
    return mu == fam.mu({})


def block_invariant_type(he: HeisExtension) -> str | None:
    """Jordan type of M' = (top-left block of mu) + mu33 I when lam = 0."""
    if not he.lam.is_zero():
        return None
    m = he.mu.submatrix(range(2), range(2)) + Matrix.identity(2) * he.mu[2, 2]
    if m.is_zero():
        return "zero"
    if m[0, 1] == 0 and m[1, 0] == 0 and m[0, 0] == m[1, 1]:
        return "scalar"
    tr = m[0, 0] + m[1, 1]
    disc = tr * tr - 4 * m.det()
    if disc != 0:
        return "distinct"
    return "nilpotent" if tr == 0 else "repeated"


# metric families


def metric_phis(tag: str, r: int) -> tuple[Matrix, Matrix]:
    """phi1, phi2 of the quadratic members, dual to lam for B_a = identity."""
    z = [[0] * r for _ in range(3)]
    p1 = [row[:] for row in z]
    p2 = [row[:] for row in z]
    if tag == "1.1":
        p1[1][2], p1[2][1] = -1, 1
        p2[0][2], p2[2][0] = 1, -1
    elif tag == "2.1":
        p2[2][0] = -1
    elif tag not in ("3.3", "3.4"):
        raise KeyError(tag)
    return Matrix(p1), Matrix(p2)


def metric_member(tag: str, r: int) -> HeisExtension:
    p1, p2 = metric_phis(tag, r)
    return family(tag).instantiate(r, phi1=p1, phi2=p2)


@dataclass(frozen=True)
class MetricEntry:
    tag: str
    extension: HeisExtension
    certificate: MetricCertificate


def metric_catalog(r: int) -> list[MetricEntry]:
    out = []
    for tag in QUADRATIC_TAGS:
        he = metric_member(tag, r)
        res = metric_check(to_extension_data(he), BilinearForm.identity(r))
        if not res:
            raise AssertionError(f"family {tag} has no metric: {res.detail}")
        out.append(MetricEntry(tag, he, res.certificate))
    return out


def excluded_diagnostics(r: int) -> dict[str, MetricResult]:
    """metric_check on a representative of each family without a metric."""
    out = {}
    for fam in catalog():
        if fam.tag in QUADRATIC_TAGS:
            continue
        he = fam.template(r)
        out[fam.tag] = metric_check(to_extension_data(he), BilinearForm.identity(r))
    return out


# orthogonal splitting


@dataclass(frozen=True)
class SplitReport:
    r: int
    tag: str
    trailing_ideal: Subspace
    trailing_central: bool
    trailing_nondegenerate: bool
    remainder: Subspace
    remainder_is_ideal: bool
    remainder_tag: str | None
    maximal_split_dim: int

    @property
    def ok(self) -> bool:
        return (
            self.trailing_ideal.dim == self.r - 3
            and self.trailing_central
            and self.trailing_nondegenerate
            and self.remainder_is_ideal
            and self.remainder_tag is not None
        )


def split_check(he: HeisExtension) -> SplitReport:
    """Split off span{v4..vr} and re-classify the r = 3 block."""
    r = he.r
    data = to_extension_data(he)
    res = metric_check(data, BilinearForm.identity(r))
    if not res:
        raise ValueError(f"input is not quadratic: {res.condition}: {res.detail}")
    g = build(data)
    b = res.certificate.pullback_metric
    tag = classify(he).tag
    n = g.dim
    trailing = Subspace.coordinates(range(6, 3 + r), n) if r > 3 else Subspace.zero(n)
    z = center(g)
    central = z.contains_space(trailing)
    nondeg = trailing.dim == 0 or b.restrict(trailing).det() != 0
    rest = perp(b, trailing)
    rest_ok = is_subalgebra(g, rest) and bracket_subspaces(g, trailing, rest).dim == 0
    coords = Subspace.coordinates(list(range(6)) + list(range(3 + r, 6 + r)), n)
    remainder_tag = None
    if rest == coords and rest_ok:
        sub = he.truncate(3)
        if sub.is_valid():
            remainder_tag = classify(sub).tag
    split = orthogonal_split_central(g, b)
    return SplitReport(r, tag, trailing, central, nondeg, rest, rest_ok, remainder_tag, split[0].dim if split else 0)


def random_admissible_witness(he: HeisExtension, rng: random.Random, lo: int = -2, hi: int = 2) -> IsomorphismWitness:
    """Random (g, h, k, T, tau, nu) with g in Aut(h) and k fixing the coadjoint action."""
    r = he.r

    def rnd():
        return Fraction(rng.randint(lo, hi))

    while True:
        a = Matrix([[rnd(), rnd()], [rnd(), rnd()]])
        if a.det():
            break
    g = heis_automorphism(a, rnd(), rnd())
    while True:
        h_a = Matrix([[rnd() for _ in range(r)] for _ in range(r)])
        if h_a.det():
            break
    k33 = rnd() or Fraction(1)
    k = admissible_k(g, k33, rnd(), rnd())
    t = Matrix([[rnd() for _ in range(r)] for _ in range(3)])
    tau = Matrix([[rnd() for _ in range(3)] for _ in range(r)])
    nu = Matrix([[rnd() for _ in range(3)] for _ in range(3)])
    return witness(he, g, h_a, k, t, tau, nu)
