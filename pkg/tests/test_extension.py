import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from support import rand_cochain, rand_extension

from liext.cechain import Cochain
from liext.exactlin import Matrix, Subspace, kernel
from liext.extension import (
    COND_DMU,
    ExtensionData,
    InvalidExtension,
    IsomorphismWitness,
    apply_witness,
    build,
    build_unchecked,
    coboundary_matrix,
    factorization_ok,
    iso_group_check,
    same_class_fixed_R,
    verify_witness,
)
from liext.liecore import center, heisenberg, is_ideal, jacobi_defect

seeds = st.integers(0, 10**6)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_valid_data_builds_a_lie_algebra(seed):
    data = rand_extension(random.Random(seed))
    assert data.is_valid()
    g = build(data)
    assert not jacobi_defect(g)
    n = data.h.dim
    ai = [tuple(1 if k == t else 0 for k in range(g.dim)) for t in range(n, g.dim)]
    assert is_ideal(g, Subspace(ai, g.dim))


def test_invalid_lambda_is_reported():
    h = heisenberg()
    # phi(x1) = 1 is a cocycle, but e_phi(lam)(x1, x2, x3) = 1 cannot be cancelled by d mu
    data = ExtensionData.trivial(h, 1, 1).replace(phi=Cochain(1, 3, 1, {(0,): (1,)}))
    bad = data.replace(lam=Cochain(2, 3, 1, {(1, 2): (1,)}))
    assert set(bad.residuals()) == {COND_DMU}
    with pytest.raises(InvalidExtension):
        build(bad)
    assert jacobi_defect(build_unchecked(bad))


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_fixed_representation_round_trip(seed):
    rng = random.Random(seed)
    d1 = rand_extension(rng)
    n = d1.h.dim
    tau = rand_cochain(rng, 1, n, d1.dim_a, -2, 2)
    nu = rand_cochain(rng, 1, n, d1.dim_i, -2, 2)
    w0 = IsomorphismWitness.identity(d1)
    shifted = IsomorphismWitness(w0.g, w0.h_a, w0.k, w0.T, tau, nu)
    d2 = apply_witness(d1, shifted)
    w = same_class_fixed_R(d1, d2)
    assert w is not None
    v = verify_witness(d1, d2, w)
    assert v.agree and v


def test_psi_round_trip_and_inverse():
    rng = random.Random(11)
    d = rand_extension(rng)
    n, da, di = d.h.dim, d.dim_a, d.dim_i
    w0 = IsomorphismWitness.identity(d)
    w = IsomorphismWitness(
        w0.g,
        Matrix.identity(da) * 2,
        Matrix.identity(di) * 3,
        Matrix([[1] * da for _ in range(di)]),
        rand_cochain(rng, 1, n, da),
        rand_cochain(rng, 1, n, di),
    )
    assert IsomorphismWitness.from_psi(w.psi(), n, da, di) == w
    assert w.compose(w.inverse()).psi() == Matrix.identity(d.dim)
    assert factorization_ok(w)


def test_self_witnesses_form_a_group():
    rng = random.Random(5)
    d = rand_extension(rng)
    while d.h.dim < 2:
        d = rand_extension(rng)
    n, da, di = d.h.dim, d.dim_a, d.dim_i
    z = kernel(coboundary_matrix(d)).vectors()
    w0 = IsomorphismWitness.identity(d)

    def self_witness(vec):
        tau = Cochain.from_vector(1, n, da, vec[: n * da])
        nu = Cochain.from_vector(1, n, di, vec[n * da :])
        return IsomorphismWitness(w0.g, w0.h_a, w0.k, w0.T, tau, nu)

    ws = [self_witness(v) for v in z] or [w0]
    for w in ws:
        assert verify_witness(d, d, w)
    check = iso_group_check(d, ws[0], ws[-1])
    assert check


def test_non_cohomologous_data_have_no_fixed_witness():
    h = heisenberg()
    d1 = ExtensionData.trivial(h, 1, 1)
    d2 = d1.replace(lam=Cochain(2, 3, 1, {(0, 2): (1,)}))
    assert d2.is_valid()
    assert same_class_fixed_R(d1, d2) is None
    assert center(build(d2)).dim == center(build(d1)).dim - 1
