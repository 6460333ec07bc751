"""Acceptance criteria; tests/conftest.py prints one status line per criterion."""

import random
import time
from fractions import Fraction

import pytest
from support import quadratic_corpus, rand_cochain, rand_phi, rand_representation, rand_solvable

from liext import heis
from liext.cechain import MAX_DEGREE, differential, e_phi, trivial
from liext.cli import load_json, parse_algebra
from liext.exactlin import Matrix, Subspace, subspace_sum
from liext.extension import IsomorphismWitness, build_unchecked, same_class_fixed_R, verify_witness
from liext.heis import (
    QUADRATIC_TAGS,
    TAGS,
    HeisExtension,
    catalog,
    family,
    random_admissible_witness,
    reduce_lambda,
    split_check,
    to_extension_data,
)
from liext.liecore import (
    LieAlgebra,
    bracket_subspaces,
    canonical_ideals,
    center,
    centralizer_of,
    has_abelian_descending_ideal,
    is_nilpotent,
    jacobi_defect,
    series,
)
from liext.quadratic import (
    BilinearForm,
    DoubleExtensionData,
    HypothesisError,
    extract_extension,
    is_invariant,
    lambda_phi_duality_defects,
    metric_exists,
    mu_cyclic_defects,
    perp,
    split_metric,
    witt_complement,
)


def span(g: LieAlgebra, *combos: dict) -> Subspace:
    names = list(g.basis_names)
    vecs = []
    for combo in combos:
        v = [Fraction(0)] * g.dim
        for name, c in combo.items():
            v[names.index(name)] = Fraction(c)
        vecs.append(v)
    return Subspace(vecs, g.dim)


def basis_span(g: LieAlgebra, *names: str) -> Subspace:
    return span(g, *({n: 1} for n in names))


# worked double extension


def worked_example():
    doc = parse_algebra(load_json("example-3-2"))
    return doc.algebra, doc.form


@pytest.mark.criterion(1)
def test_worked_example_series_and_ideals():
    start = time.perf_counter()
    g, b = worked_example()
    rep = series(g)
    i, j = canonical_ideals(g, rep)
    assert center(g) == basis_span(g, "v1", "c")
    assert rep.lower(1) == basis_span(g, "v2", "v3", "c")
    assert j == basis_span(g, "v1", "v2", "v3", "c")
    assert i == basis_span(g, "c")
    assert not is_nilpotent(g, rep)
    assert is_invariant(g, b) and b.nondegenerate
    assert time.perf_counter() - start < 1


@pytest.mark.criterion(1)
@pytest.mark.xfail(strict=True, reason="i(g) = span{c}: no v in V lies in both Ker D^k and Im D^k")
def test_worked_example_literal_i():
    g, _ = worked_example()
    i, _ = canonical_ideals(g)
    assert i == basis_span(g, "v1", "c")


@pytest.mark.criterion(1)
def test_worked_example_literal_derivation_is_not_skew():
    # hyperbolic pair v2, v3 with D(v2) = v3, D(v3) = -v2
    b_v = BilinearForm(Matrix([[1, 0, 0], [0, 0, 1], [0, 1, 0]]))
    d = Matrix([[0, 0, 0], [0, 0, -1], [0, 1, 0]])
    with pytest.raises(HypothesisError):
        DoubleExtensionData(3, b_v, d)


@pytest.mark.criterion(1)
def test_worked_example_structure_notes():
    g, _ = worked_example()
    rep = series(g)
    assert has_abelian_descending_ideal(g, rep) is None
    assert (rep.m1, rep.m2) == (1, 1)


# bracket table of the rank-two family

LITERAL_TABLE = {
    ("x1", "x2"): {"x3": 1, "v3": 1},
    ("x2", "x3"): {"v1": 1},
    ("x3", "x1"): {"v2": 1},
    ("x1", "v2"): {"t3": -1},
    ("x1", "v3"): {"t2": 1},
    ("x2", "v1"): {"t3": -1},
    ("x2", "v3"): {"t1": 1},
    ("x3", "v1"): {"t2": 1},
    ("x3", "v2"): {"t1": -1},
    ("x1", "t3"): {"t2": -1},
    ("x2", "t3"): {"t1": -1},
}
CORRECTED = {("x1", "v2"): {"t3": 1}, ("x1", "v3"): {"t2": -1}, ("x2", "t3"): {"t1": 1}}


def bracket_table(g: LieAlgebra) -> dict:
    names = list(g.basis_names)
    out = {}
    for i, j, vec in g.nonzero_brackets():
        out[(names[i], names[j])] = {names[k]: c for k, c in enumerate(vec) if c}
    return out


def normalized(table: dict, names) -> dict:
    order = {n: k for k, n in enumerate(names)}
    out = {}
    for (a, b), val in table.items():
        if order[a] > order[b]:
            a, b, val = b, a, {k: -v for k, v in val.items()}
        out[(a, b)] = {k: Fraction(v) for k, v in val.items()}
    return out


def table_algebra(table: dict, r: int) -> LieAlgebra:
    names = ["x1", "x2", "x3"] + [f"v{k + 1}" for k in range(r)] + ["t1", "t2", "t3"]
    n = len(names)
    br = {}
    for (a, b), val in normalized(table, names).items():
        vec = [0] * n
        for k, c in val.items():
            vec[names.index(k)] = c
        br[(names.index(a), names.index(b))] = tuple(vec)
    return LieAlgebra.from_brackets(n, br, names, check=False)


@pytest.mark.criterion(2)
@pytest.mark.parametrize("r", [3, 4, 5])
def test_rank_two_family_brackets(r):
    g = heis.build_heis(heis.metric_member("1.1", r))
    expected = normalized({**LITERAL_TABLE, **CORRECTED}, g.basis_names)
    assert bracket_table(g) == expected
    # [x, v_j] = 0 for j >= 4
    assert center(g).contains_space(basis_span(g, *(f"v{k}" for k in range(4, r + 1))))


@pytest.mark.criterion(2)
@pytest.mark.xfail(strict=True, reason="three printed signs contradict ad* and invariance")
def test_rank_two_family_literal_signs():
    g = heis.build_heis(heis.metric_member("1.1", 3))
    assert bracket_table(g) == normalized(LITERAL_TABLE, g.basis_names)


@pytest.mark.criterion(2)
def test_literal_signs_are_not_a_quadratic_lie_algebra():
    literal = table_algebra(LITERAL_TABLE, 3)
    b = split_metric(3, BilinearForm.identity(3))
    assert jacobi_defect(literal) or not is_invariant(literal, b)
    corrected = table_algebra({**LITERAL_TABLE, **CORRECTED}, 3)
    assert not jacobi_defect(corrected) and is_invariant(corrected, b)


# family counts


@pytest.mark.criterion(3)
def test_family_counts_and_exclusions():
    assert len(catalog()) == 9 and [f.tag for f in catalog()] == list(TAGS)
    for r in (3, 4, 5):
        entries = heis.metric_catalog(r)
        assert [e.tag for e in entries] == list(QUADRATIC_TAGS)
        first = heis.excluded_diagnostics(r)
        again = heis.excluded_diagnostics(r)
        assert set(first) == {"2.2", "2.3", "2.4", "3.1", "3.2"}
        for tag, res in first.items():
            assert not res and res == again[tag]
            assert res.condition == "b1" if tag in ("2.3", "3.1", "3.2") else res.condition in ("b1", "b2")
            assert metric_exists(to_extension_data(family(tag).template(r)), BilinearForm.identity(r)) is None


# lambda trichotomy


def rank_w1_w2(lam: Matrix) -> int:
    """Rank of an r x 2 matrix from its minors."""
    rows = [lam.row(i)[:2] for i in range(lam.rows)]
    if any(a * d - b * c for (a, b) in rows for (c, d) in rows):
        return 2
    return 1 if any(x for row in rows for x in row) else 0


def remultiply(lam: Matrix, red) -> list[list[Fraction]]:
    """(1/det g) h lam g^T, then column 3 shifted by -tau(x3)."""
    g, h, r = red.g.tolist(), red.h_a.tolist(), lam.rows
    l = lam.tolist()
    det = (
        g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
        - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
    )
    hl = [[sum(h[i][k] * l[k][j] for k in range(r)) for j in range(3)] for i in range(r)]
    out = [[sum(hl[i][k] * g[j][k] for k in range(3)) / det for j in range(3)] for i in range(r)]
    tau3 = red.tau.col(2)
    for i in range(r):
        out[i][2] -= tau3[i]
    return out


FORM_OF_RANK = {2: "identity", 1: "e11", 0: "zero"}


@pytest.mark.criterion(4)
def test_lambda_trichotomy():
    rng = random.Random(2024)
    start = time.perf_counter()
    counts = {2: 0, 1: 0, 0: 0}
    for t in range(1000):
        r = 3 + t % 3
        rows = [[rng.randint(-5, 5) for _ in range(3)] for _ in range(r)]
        # bias a third of the cases toward the lower-rank strata
        if t % 3 == 1:
            s = rng.randint(-5, 5)
            rows = [[a, s * a, c] for a, _, c in rows]
        elif t % 3 == 2 and t % 2:
            rows = [[0, 0, c] for _, _, c in rows]
        lam = Matrix(rows)
        red = reduce_lambda(lam)
        assert remultiply(lam, red) == red.canonical.tolist()
        rank = rank_w1_w2(lam)
        assert red.form == FORM_OF_RANK[rank]
        counts[rank] += 1
    assert time.perf_counter() - start < 30
    assert all(counts.values())


@pytest.mark.criterion(4)
def test_lambda_reduction_agrees_with_cochain_action():
    rng = random.Random(7)
    for _ in range(40):
        r = rng.randint(3, 5)
        he = HeisExtension.make(Matrix([[rng.randint(-5, 5) for _ in range(3)] for _ in range(r)]), Matrix.zeros(3, 3))
        red = reduce_lambda(he.lam)
        w = heis.witness(he, g=red.g, h_a=red.h_a, tau=(red.tau @ red.g) * -1)
        assert heis.act(he, w).lam == red.canonical


# cocycle iff Jacobi


def cocycle_trials(rng: random.Random):
    fams = catalog()
    for t in range(500):
        he = rng.choice(fams).sample(3, rng, lo=-2, hi=2)
        if t % 2:
            parts = [he.phi1, he.phi2, he.phi3, he.lam, he.mu]
            k = rng.randrange(5)
            m = parts[k]
            i, j = rng.randrange(m.rows), rng.randrange(m.cols)
            parts[k] = m + Matrix(
                [[rng.choice([-1, 1]) if (a, b) == (i, j) else 0 for b in range(m.cols)] for a in range(m.rows)]
            )
            he = HeisExtension(3, parts[0], parts[1], parts[2], parts[3], parts[4])
        yield he


@pytest.mark.criterion(5)
def test_cocycle_condition_iff_jacobi():
    rng = random.Random(55)
    valid = invalid = 0
    for he in cocycle_trials(rng):
        data = to_extension_data(he, check=False)
        cocycle = not data.residuals()
        jacobi = not jacobi_defect(build_unchecked(data))
        assert cocycle == jacobi
        valid += cocycle
        invalid += not cocycle
    assert valid >= 200 and invalid >= 100


# anticommutativity


@pytest.mark.criterion(6)
def test_e_phi_anticommutes_with_d():
    rng = random.Random(66)
    for _ in range(200):
        h = rand_solvable(rng)
        while h.dim > 4:
            h = rand_solvable(rng)
        rho = rand_representation(rng, h)
        dim_a = rng.randint(1, 2)
        phi = rand_phi(rng, rho, dim_a)
        on_a = trivial(h, dim_a)
        for degree in (1, 2):
            lam = rand_cochain(rng, degree, h.dim, dim_a)
            lhs = e_phi(phi, differential(on_a, lam), rho.module_dim, dim_a)
            rhs = differential(rho, e_phi(phi, lam, rho.module_dim, dim_a))
            assert (lhs + rhs).is_zero()
        for degree in range(MAX_DEGREE - 1):
            c = rand_cochain(rng, degree, h.dim, rho.module_dim)
            assert differential(rho, differential(rho, c)).is_zero()


# metric identities

CORPUS = quadratic_corpus()


@pytest.mark.criterion(7)
def test_corpus_size():
    assert len(CORPUS) >= 20


@pytest.mark.criterion(7)
@pytest.mark.parametrize("name,g,b", CORPUS, ids=[c[0] for c in CORPUS])
def test_metric_identities(name, g, b):
    rep = series(g)
    for ell in range(1, rep.m + 2):
        c = rep.central(ell)
        assert perp(b, rep.lower(ell)) == c
        assert centralizer_of(g, rep.lower(ell - 1)) == c
    i, j = canonical_ideals(g, rep)
    assert perp(b, i) == j
    j_abelian = bracket_subspaces(g, j, j).dim == 0
    assert j_abelian == (has_abelian_descending_ideal(g, rep) is not None)
    if not j_abelian:
        return
    assert i.contains_space(bracket_subspaces(g, g.full(), j))
    if i != j:
        ex = extract_extension(g, b)
        assert not mu_cyclic_defects(ex.data)
        assert not lambda_phi_duality_defects(ex.data, ex.b_a)


@pytest.mark.criterion(7)
def test_bracket_into_i_needs_abelian_j():
    g, _ = worked_example()
    i, j = canonical_ideals(g)
    assert bracket_subspaces(g, j, j).dim
    assert not i.contains_space(bracket_subspaces(g, g.full(), j))


@pytest.mark.criterion(7)
def test_extraction_covers_part_of_the_corpus():
    covered = []
    for name, g, _ in CORPUS:
        i, j = canonical_ideals(g)
        if i != j and bracket_subspaces(g, j, j).dim == 0:
            covered.append(name)
    assert len(covered) >= 8


# isomorphism witnesses


def corrupt(w: IsomorphismWitness, t: int) -> IsomorphismWitness:
    """Perturbations that always break a witness between Heisenberg extensions."""
    if t % 2:
        # nu(x3) += theta3 moves the theta1 coefficient of mu on (x2, x3) by 1/g33
        nu = w.nu.matrix() + Matrix([[0, 0, 0], [0, 0, 0], [0, 0, 1]])
        return IsomorphismWitness(w.g, w.h_a, w.k, w.T, w.tau, heis.Cochain.linear(3, 3, nu))
    # doubling the first row of the top-left block of k keeps k invertible
    # but stops it from intertwining the coadjoint action
    k = w.k.tolist()
    k[0][0] *= 2
    k[0][1] *= 2
    return IsomorphismWitness(w.g, w.h_a, Matrix(k), w.T, w.tau, w.nu)


@pytest.mark.criterion(8)
def test_witness_round_trips():
    rng = random.Random(88)
    fams = catalog()
    for t in range(200):
        he = rng.choice(fams).sample(3, rng)
        d1 = to_extension_data(he)
        tau = Matrix([[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)])
        nu = Matrix([[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)])
        shift = heis.witness(he, tau=tau, nu=nu)
        d2 = heis.apply_witness(d1, shift)
        w = same_class_fixed_R(d1, d2)
        assert w is not None
        v = verify_witness(d1, d2, w)
        assert v.agree and v
        bad = verify_witness(d1, d2, corrupt(w, t))
        assert bad.agree and not bad


@pytest.mark.criterion(8)
def test_random_admissible_witnesses_agree():
    rng = random.Random(89)
    fams = catalog()
    for t in range(60):
        he = rng.choice(fams).sample(3, rng)
        w = random_admissible_witness(he, rng)
        d1 = to_extension_data(he)
        d2 = heis.apply_witness(d1, w)
        v = verify_witness(d1, d2, w)
        assert v.agree and v
        bad = verify_witness(d1, d2, corrupt(w, t))
        assert bad.agree and not bad
        assert verify_witness(d2, d1, w.inverse())


# splitting

DOCUMENTED_REMAINDER = {"2.1": "2.1", "3.3": "3.3", "3.4": "3.4"}


@pytest.mark.criterion(9)
@pytest.mark.parametrize("r", [4, 5, 6])
@pytest.mark.parametrize("tag", QUADRATIC_TAGS)
def test_split_central_ideal(tag, r):
    rep = split_check(heis.metric_member(tag, r))
    assert rep.ok
    assert rep.trailing_ideal.dim == r - 3 and rep.trailing_central and rep.trailing_nondegenerate
    assert rep.remainder_tag == DOCUMENTED_REMAINDER.get(tag, "1.1")


@pytest.mark.criterion(9)
@pytest.mark.xfail(strict=True, reason="the remainder keeps a rank-two lambda, an isomorphism invariant")
def test_split_literal_remainder_of_rank_two_family():
    assert split_check(heis.metric_member("1.1", 4)).remainder_tag == "2.1"


# Witt decomposition


@pytest.mark.criterion(10)
def test_witt_post_conditions():
    checked = 0
    for name, g, b in CORPUS:
        i, j = canonical_ideals(g)
        if i == j:
            continue
        h, a = witt_complement(g, b)
        assert b.restrict(h).is_zero(), name
        assert perp(b, a) == subspace_sum(h, i), name
        assert h.dim + a.dim + i.dim == g.dim
        checked += 1
    assert checked >= 20
