import random
from fractions import Fraction
from itertools import islice

import pytest

from tamecert.linalg import Subspace, det, identity, mat_mul, transpose
from tamecert.symplectic import (
    SymplecticBasis,
    SymplecticSpace,
    associated_subspaces,
    avoid_vector,
    complete_symplectic_basis,
    enumerate_integer_vectors,
    integer_symplectic_normal_form,
    k_mu,
    lagrangian_avoiding,
    simultaneous_complement_basis,
    standard_gram,
)


def blockdiag_skew(ms):
    n = 2 * len(ms)
    rows = [[0] * n for _ in range(n)]
    for i, m in enumerate(ms):
        rows[2 * i][2 * i + 1] = m
        rows[2 * i + 1][2 * i] = -m
    return tuple(tuple(r) for r in rows)


def check_isnf(b):
    t, ms = integer_symplectic_normal_form(b)
    n = len(b)
    assert abs(det(t)) == 1
    assert mat_mul(mat_mul(transpose(t), b), t) == blockdiag_skew(ms)
    assert all(m > 0 for m in ms)
    for x, y in zip(ms, ms[1:]):
        assert y % x == 0
    return t, ms


def random_nondegenerate_skew(rng, n, bound):
    while True:
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                a[i][j] = rng.randint(-bound, bound)
                a[j][i] = -a[i][j]
        a = tuple(tuple(r) for r in a)
        if det(a) != 0:
            return a


# --- integer symplectic normal form -----------------------------------------

def test_isnf_already_normal():
    t, ms = check_isnf(((0, 2), (-2, 0)))
    assert t == identity(2)
    assert ms == (2,)


def test_isnf_two_blocks():
    b = blockdiag_skew([1, 3])
    _, ms = check_isnf(b)
    assert ms == (1, 3)


def test_isnf_sign_normalisation_swaps_pair():
    b = ((0, -1), (1, 0))
    t, ms = check_isnf(b)
    assert ms == (1,)
    assert t == ((0, 1), (1, 0))


def test_isnf_two_blocks_2_6():
    _, ms = check_isnf(blockdiag_skew([2, 6]))
    assert ms == (2, 6)


def test_isnf_rejects_bad_input():
    with pytest.raises(ValueError):
        integer_symplectic_normal_form(((0, 1, 0), (-1, 0, 0), (0, 0, 0)))
    with pytest.raises(ValueError):
        integer_symplectic_normal_form(((0, 0), (0, 0)))
    with pytest.raises(ValueError):
        integer_symplectic_normal_form(((0, 1), (1, 0)))


def test_isnf_random():
    rng = random.Random(13)
    for _ in range(30):
        n = rng.choice([2, 4, 6])
        check_isnf(random_nondegenerate_skew(rng, n, 9))


# --- annihilators ------------------------------------------------------------

def test_annihilator_diagonal_line():
    # hand oracle: beta(v, e+f) = v1 - v2 under the standard form
    space = SymplecticSpace.standard(1)
    u = Subspace.from_spanning([(1, 1)])
    assert space.annihilator(u) == u


def test_annihilator_extremes():
    space = SymplecticSpace.standard(2)
    assert space.annihilator(Subspace.zero(4)) == Subspace.full(4)
    assert space.annihilator(Subspace.full(4)).is_zero()


def test_annihilator_dimension_and_involution():
    rng = random.Random(17)
    for _ in range(25):
        k = rng.randint(1, 3)
        space = SymplecticSpace.standard(k)
        vecs = [tuple(rng.randint(-3, 3) for _ in range(2 * k))
                for _ in range(rng.randint(0, 2 * k))]
        u = Subspace.from_spanning(vecs, 2 * k)
        ann = space.annihilator(u)
        assert ann.dim == 2 * k - u.dim
        assert space.annihilator(ann) == u


# --- integer vector enumeration ----------------------------------------------

def test_enumeration_order_prefix():
    first = list(islice(enumerate_integer_vectors(2), 8))
    assert first == [(1, 0), (-1, 0), (0, 1), (1, 1), (-1, 1),
                     (0, -1), (1, -1), (-1, -1)]


def test_avoid_vector_examples():
    assert avoid_vector(2, [Subspace.from_spanning([(1, 0)])]) == (0, 1)
    blocked = [Subspace.from_spanning([v]) for v in [(1, 0), (0, 1), (1, 1)]]
    v = avoid_vector(2, blocked)
    assert v == (-1, 1)
    assert all(not s.contains(v) for s in blocked)
    assert avoid_vector(1, []) == (1,)


def test_avoid_vector_rejects_full_space():
    with pytest.raises(ValueError):
        avoid_vector(2, [Subspace.full(2)])


# --- Lagrangian avoidance ------------------------------------------------------

def test_lagrangian_avoiding_k1_diagonal():
    space = SymplecticSpace.standard(1)
    omega = [Subspace.from_spanning([(1, 1)])]
    # hand oracle: e lies outside span(e+f) = its own annihilator
    assert lagrangian_avoiding(space, omega) == Subspace.from_spanning([(1, 0)])


def test_lagrangian_avoiding_empty_omega():
    space = SymplecticSpace.standard(1)
    assert lagrangian_avoiding(space, []) == Subspace.from_spanning([(1, 0)])


def test_lagrangian_avoiding_k2_symplectic_plane():
    space = SymplecticSpace.standard(2)
    omega = [Subspace.from_spanning([(1, 0, 0, 0), (0, 1, 0, 0)])]
    found = lagrangian_avoiding(space, omega)
    assert found.dim == 2
    assert space.is_isotropic(found)
    assert found.intersect(omega[0]).is_zero()


def test_lagrangian_avoiding_random():
    rng = random.Random(19)
    for _ in range(20):
        k = rng.randint(1, 3)
        space = SymplecticSpace.standard(k)
        omega = []
        for _ in range(rng.randint(0, 4)):
            d = rng.randint(1, k)
            omega.append(Subspace.from_spanning(
                [tuple(rng.randint(-2, 2) for _ in range(2 * k)) for _ in range(d)],
                2 * k))
        found = lagrangian_avoiding(space, omega)
        assert found.dim == k
        assert space.is_isotropic(found)
        for w in omega:
            assert found.intersect(w).is_zero()


# --- K_mu and associated subspaces --------------------------------------------

def standard_basis(k):
    space = SymplecticSpace.standard(k)
    return SymplecticBasis(space, identity(2 * k))


def test_k_mu_extremes():
    basis = standard_basis(2)
    assert k_mu(basis, (0, 0)) == Subspace.from_spanning([(1, 0, 0, 0), (0, 0, 1, 0)])
    assert k_mu(basis, (1, 1)) == Subspace.from_spanning([(0, 1, 0, 0), (0, 0, 0, 1)])


def test_k_mu_half():
    basis = standard_basis(1)
    assert k_mu(basis, (Fraction(1, 2),)) == Subspace.from_spanning([(1, 1)])


def test_k_mu_rejects_out_of_range():
    basis = standard_basis(1)
    with pytest.raises(ValueError):
        k_mu(basis, (Fraction(3, 2),))


def test_k_mu_lagrangian_and_transversal():
    rng = random.Random(23)
    basis = standard_basis(2)
    space = basis.space
    lagr = k_mu(basis, (0, 0))
    for _ in range(20):
        mu = tuple(Fraction(rng.randint(0, 4), 4) for _ in range(2))
        sub = k_mu(basis, mu)
        assert sub.dim == 2
        assert space.is_isotropic(sub)
        if all(m > 0 for m in mu):
            assert sub.plus(lagr).is_full()


def test_associated_subspaces_counts():
    fam1 = associated_subspaces(standard_basis(1))
    assert len(fam1.subspaces) == 3
    assert set(fam1.subspaces) == {
        Subspace.from_spanning([(1, 0)]),
        Subspace.from_spanning([(0, 1)]),
        Subspace.from_spanning([(1, 1)]),
    }
    fam2 = associated_subspaces(standard_basis(2))
    assert len(fam2.subspaces) == 9
    assert all(s.dim == 2 for s in fam2.subspaces)


def test_associated_subspaces_are_k_mu_spans():
    basis = standard_basis(2)
    fam = associated_subspaces(basis)
    mu_of_choice = {0: Fraction(0), 1: Fraction(1), 2: Fraction(1, 2)}
    for sub, pick in zip(fam.subspaces, fam.choices):
        mu = tuple(mu_of_choice[c] for c in pick)
        assert sub == k_mu(basis, mu)


# --- simultaneous complement ---------------------------------------------------

def test_simultaneous_complement_k1_diagonal():
    space = SymplecticSpace.standard(1)
    omega = [Subspace.from_spanning([(1, 1)])]
    lagr = lagrangian_avoiding(space, omega)
    basis = complete_symplectic_basis(space, lagr)
    result = simultaneous_complement_basis(space, basis, omega)
    assert result.p == 2
    assert result.basis.vectors == ((1, 0), (2, 1))
    family = associated_subspaces(result.basis)
    assert set(family.subspaces) == {
        Subspace.from_spanning([(1, 0)]),
        Subspace.from_spanning([(2, 1)]),
        Subspace.from_spanning([(3, 1)]),
    }
    for s in family.subspaces:
        assert s.intersect(omega[0]).is_zero()


def test_simultaneous_complement_nothing_to_avoid():
    space = SymplecticSpace.standard(2)
    basis = standard_basis(2)
    result = simultaneous_complement_basis(space, basis, [])
    assert result.p == 1
    for i in range(2):
        assert result.basis.f(i) == tuple(
            a + b for a, b in zip(basis.e(i), basis.f(i)))


def test_simultaneous_complement_k2():
    space = SymplecticSpace.standard(2)
    omega = [Subspace.from_spanning([(1, 1, 0, 0), (0, 0, 1, 1)])]
    lagr = lagrangian_avoiding(space, omega)
    basis = complete_symplectic_basis(space, lagr)
    result = simultaneous_complement_basis(space, basis, omega)
    assert result.p <= 4
    family = associated_subspaces(result.basis)
    assert len(family.subspaces) == 9
    for s in family.subspaces:
        for w in omega:
            assert s.intersect(w).is_zero()


def test_simultaneous_complement_extends_small_subspaces():
    space = SymplecticSpace.standard(2)
    omega = [Subspace.from_spanning([(1, 1, 1, 1)])]
    lagr = lagrangian_avoiding(space, omega)
    basis = complete_symplectic_basis(space, lagr)
    result = simultaneous_complement_basis(space, basis, omega)
    assert all(w.dim == 2 for w in result.extended)
    assert all(w.contains_subspace(omega[0]) or w.contains((1, 1, 1, 1))
               for w in result.extended)
    for s in associated_subspaces(result.basis).subspaces:
        assert s.intersect(omega[0]).is_zero()


def test_complete_symplectic_basis_gram():
    rng = random.Random(29)
    for _ in range(10):
        k = rng.randint(1, 3)
        space = SymplecticSpace.standard(k)
        lagr = lagrangian_avoiding(space, [])
        basis = complete_symplectic_basis(space, lagr)
        gram = tuple(tuple(space.pair(u, v) for v in basis.vectors)
                     for u in basis.vectors)
        assert gram == standard_gram(k)
