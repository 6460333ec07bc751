import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from support import rand_invertible, rand_solvable

from liext.exactlin import Matrix, Subspace
from liext.liecore import (
    InvalidAlgebra,
    LieAlgebra,
    abelian,
    bracket_subspaces,
    canonical_ideals,
    center,
    direct_sum,
    has_abelian_descending_ideal,
    heisenberg,
    is_automorphism,
    is_ideal,
    is_nilpotent,
    is_solvable,
    jacobi_defect,
    quotient,
    series,
    transform,
)

SL2 = LieAlgebra.from_brackets(3, {(0, 1): (0, 2, 0), (0, 2): (0, 0, -2), (1, 2): (1, 0, 0)}, ["h", "e", "f"])


def test_heisenberg_series_and_ideals():
    h = heisenberg()
    rep = series(h)
    x3 = Subspace.coordinates([2], 3)
    assert center(h) == x3
    assert rep.lower(1) == x3 and rep.lower(2).dim == 0
    assert rep.central(2) == h.full()
    i, j = canonical_ideals(h)
    assert i == x3 and j == x3
    assert is_nilpotent(h) and has_abelian_descending_ideal(h) == 1


def test_jacobi_violation_is_rejected():
    bad = {(0, 1): (1, 0, 0), (0, 2): (0, 1, 0)}
    with pytest.raises(InvalidAlgebra):
        LieAlgebra.from_brackets(3, bad)
    assert jacobi_defect(LieAlgebra.from_brackets(3, bad, check=False))


def test_non_solvable_algebra():
    assert not is_solvable(SL2)
    assert center(SL2).dim == 0
    assert series(SL2).lower(5) == SL2.full()


def test_affine_algebra_is_solvable_not_nilpotent():
    g = LieAlgebra.from_brackets(2, {(0, 1): (0, 1)})
    assert is_solvable(g) and not is_nilpotent(g)
    assert series(g).lower(3) == Subspace.coordinates([1], 2)


def test_quotient_by_center():
    h = direct_sum(heisenberg(), abelian(1))
    q, proj, sec = quotient(h, center(h))
    assert q.is_abelian() and q.dim == 2
    assert proj @ sec == Matrix.identity(2)
    with pytest.raises(ValueError):
        quotient(h, Subspace.coordinates([0], 4))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_series_invariant_under_change_of_basis(seed):
    rng = random.Random(seed)
    g = rand_solvable(rng)
    p = rand_invertible(rng, g.dim)
    g2 = transform(g, p)
    r1, r2 = series(g), series(g2)
    assert [s.dim for s in r1.descending] == [s.dim for s in r2.descending]
    assert [s.dim for s in r1.derived_central] == [s.dim for s in r2.derived_central]
    i1, j1 = canonical_ideals(g, r1)
    i2, j2 = canonical_ideals(g2, r2)
    assert (i1.dim, j1.dim) == (i2.dim, j2.dim)
    assert is_solvable(g2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_canonical_ideals_are_ideals(seed):
    g = rand_solvable(random.Random(seed))
    rep = series(g)
    i, j = canonical_ideals(g, rep)
    assert is_ideal(g, i) and is_ideal(g, j)
    assert j.contains_space(i)
    assert j.contains_space(center(g))
    for k in range(1, len(rep.descending)):
        assert bracket_subspaces(g, g.full(), rep.lower(k - 1)) == rep.lower(k)
    for k in range(2, len(rep.derived_central) + 1):
        assert bracket_subspaces(g, g.full(), rep.central(k)).dim <= rep.central(k - 1).dim
        assert rep.central(k - 1).contains_space(bracket_subspaces(g, g.full(), rep.central(k)))


def test_automorphism_check():
    h = heisenberg()
    good = Matrix([[1, 1, 0], [0, 1, 0], [2, 3, 1]])
    bad = Matrix([[2, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert is_automorphism(h, good)
    assert not is_automorphism(h, bad)


def test_direct_sum_keeps_names_only_when_distinct():
    assert direct_sum(heisenberg(), abelian(1, ["z"])).basis_names == ("x1", "x2", "x3", "z")
    assert len(set(direct_sum(abelian(2), abelian(2)).basis_names)) == 4
