from fractions import Fraction

import pytest

from tamecert.groups import (
    ClassTwoData,
    Factor,
    FiniteIndexSubgroup,
    GroupDataError,
    HeisenbergGroup,
    commutation_form_rho,
    decompose_subdirect,
    finite_index_symplectic_subgroup,
    symplectic_basis_lift,
    validate,
)
from tamecert.linalg import mat_mul, rank, transpose, vec_mat
from tamecert.symplectic import SymplecticBasis


def discrete_heisenberg():
    return ClassTwoData(2, 1, {(0, 1): (1,)})


def overlap_group():
    # Q = <(x,x), (y,1), (1,y)> inside H x H
    return ClassTwoData(3, 2, {(0, 1): (1, 0), (0, 2): (0, 1), (1, 2): (0, 0)})


# --- validation -----------------------------------------------------------------

def test_validate_discrete_heisenberg():
    assert validate(discrete_heisenberg()) is not None


def test_validate_extra_central_direction():
    # kernel of the stacked matrices is trivial, z_2 is central by fiat
    data = ClassTwoData(2, 2, {(0, 1): (1, 0)})
    assert validate(data) is data


def test_validate_abelian_data():
    data = ClassTwoData(1, 1)
    assert validate(data) is data


def test_validate_rejects_inexact_centre():
    # g_3 commutes with everything but is not declared central
    data = ClassTwoData(3, 1, {(0, 1): (1,)})
    with pytest.raises(GroupDataError):
        validate(data)


def test_validate_rejects_r0_with_comm():
    with pytest.raises(GroupDataError):
        ClassTwoData(2, 0, {(0, 1): ()})
    with pytest.raises(GroupDataError):
        ClassTwoData(2, 0, {(0, 1): (1,)})


def test_comm_value_antisymmetry():
    data = overlap_group()
    assert data.comm_value(1, 0) == (-1, 0)
    assert data.comm_value(1, 1) == (0, 0)


# --- symplectic lift --------------------------------------------------------------

def test_symplectic_basis_lift_unit():
    group, t = symplectic_basis_lift(((0, 1), (-1, 0)))
    assert group.k == 1
    assert group.invariants == (1,)


def test_symplectic_basis_lift_scaled():
    group, _ = symplectic_basis_lift(((0, 4), (-4, 0)))
    assert group.invariants == (4,)


def test_symplectic_basis_lift_blocks():
    b = ((0, 2, 0, 0), (-2, 0, 0, 0), (0, 0, 0, 6), (0, 0, -6, 0))
    group, t = symplectic_basis_lift(b)
    assert group.invariants == (2, 6)
    assert mat_mul(mat_mul(transpose(t), b), t) == group.comm_form_matrix()


# --- decomposition -----------------------------------------------------------------

def test_decompose_discrete_heisenberg():
    dec = decompose_subdirect(validate(discrete_heisenberg()))
    heis = [f for f in dec.factors if f.kind == "heisenberg"]
    assert len(heis) == 1
    assert heis[0].group.k == 1
    assert heis[0].group.invariants == (1,)
    assert heis[0].projection == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert not [f for f in dec.factors if f.kind == "cyclic"]
    assert dec.check_subdirect()


def test_decompose_heisenberg_times_z():
    # H_1 x Z encoded with the direct Z factor as a second centre generator
    data = validate(ClassTwoData(2, 2, {(0, 1): (1, 0)}))
    dec = decompose_subdirect(data)
    heis = [f for f in dec.factors if f.kind == "heisenberg"]
    cyclic = [f for f in dec.factors if f.kind == "cyclic"]
    assert len(heis) == 1
    assert heis[0].group.invariants == (1,)
    # the abelian quotient Z^3 contributes the cyclic factors
    assert len(cyclic) == 3
    assert dec.check_subdirect()


def test_decompose_overlap_example():
    dec = decompose_subdirect(validate(overlap_group()))
    heis = [f for f in dec.factors if f.kind == "heisenberg"]
    cyclic = [f for f in dec.factors if f.kind == "cyclic"]
    assert len(heis) == 2
    assert all(f.group.k == 1 for f in heis)
    assert all(f.group.invariants == (1,) for f in heis)
    assert len(cyclic) == 2
    assert dec.check_subdirect()
    # both Heisenberg factors see the dual of generator 1
    duals = []
    for f in heis:
        image_rows = f.pi_star
        duals.append(image_rows)
    for rows in duals:
        # g_1 dual direction lies in the image of pi*
        assert rank(rows + ((1, 0, 0, 0, 0),)) == rank(rows)


def test_decompose_abelian():
    dec = decompose_subdirect(validate(ClassTwoData(2, 0)))
    assert all(f.kind == "cyclic" for f in dec.factors)
    assert len(dec.factors) == 2
    assert dec.check_subdirect()
    dec2 = decompose_subdirect(validate(ClassTwoData(1, 1)))
    assert len(dec2.factors) == 2
    assert dec2.check_subdirect()


def test_decompose_rank2_block():
    data = validate(ClassTwoData(4, 1, {(0, 1): (2,), (2, 3): (6,)}))
    dec = decompose_subdirect(data)
    heis = [f for f in dec.factors if f.kind == "heisenberg"]
    assert len(heis) == 1
    assert heis[0].group.invariants == (2, 6)


def test_projection_preserves_commutation():
    """The projection matrix must carry the input commutation data to the
    factor's commutation form."""
    for data in (discrete_heisenberg(), overlap_group(),
                 ClassTwoData(2, 2, {(0, 1): (1, 0)})):
        data = validate(data)
        dec = decompose_subdirect(data)
        n = data.n
        for factor in dec.factors:
            if factor.kind != "heisenberg":
                continue
            k = factor.group.k
            form = factor.group.comm_form_matrix()
            for i in range(n):
                for j in range(n):
                    img_i = vec_mat(
                        tuple(1 if t == i else 0 for t in range(data.lattice_rank)),
                        factor.projection)
                    img_j = vec_mat(
                        tuple(1 if t == j else 0 for t in range(data.lattice_rank)),
                        factor.projection)
                    lhs = sum(img_i[s] * form[s][t] * img_j[t]
                              for s in range(2 * k) for t in range(2 * k))
                    # commutator exponent must land on the factor's z
                    z_exp = factor.projection
                    comm = data.comm_value(i, j)
                    rhs = sum(c * factor.projection[n + t][2 * k]
                              for t, c in enumerate(comm))
                    assert lhs == rhs


# --- rho and the inherited form ------------------------------------------------------

def test_rho_unit_invariant():
    group = HeisenbergGroup(1, (1,))
    space, rho = commutation_form_rho(group)
    # rho(x) = psi, rho(y) = -chi
    assert vec_mat((1, 0), rho) == (0, 1)
    assert vec_mat((0, 1), rho) == (-1, 0)
    assert space.pair((0, 1), (-1, 0)) == 1


def test_rho_scaled_invariant():
    group = HeisenbergGroup(1, (2,))
    space, rho = commutation_form_rho(group)
    assert vec_mat((1, 0), rho) == (0, 2)
    assert vec_mat((0, 1), rho) == (-2, 0)
    # beta(rho x, rho y) = 2 forces the Gram entry beta(psi, chi) = -1/2
    assert space.gram[1][0] == Fraction(-1, 2)
    assert space.pair(vec_mat((1, 0), rho), vec_mat((0, 1), rho)) == 2


def test_rho_alternation():
    group = HeisenbergGroup(2, (1, 3))
    space, rho = commutation_form_rho(group)
    for v in ((1, 0, 0, 0), (1, 2, -1, 0), (0, 0, 0, 5)):
        image = vec_mat(v, rho)
        assert space.pair(image, image) == 0


def test_rho_reproduces_commutators():
    group = HeisenbergGroup(2, (2, 4))
    space, rho = commutation_form_rho(group)
    form = group.comm_form_matrix()
    vs = [(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 2, -1)]
    for a in vs:
        for b in vs:
            expected = sum(a[s] * form[s][t] * b[t]
                           for s in range(4) for t in range(4))
            assert space.pair(vec_mat(a, rho), vec_mat(b, rho)) == expected


def test_rho_rejects_rank0():
    with pytest.raises(GroupDataError):
        commutation_form_rho(HeisenbergGroup(0, ()))


# --- finite index subgroups -----------------------------------------------------------

def test_finite_index_identity_case():
    group = HeisenbergGroup(1, (1,))
    space, _ = commutation_form_rho(group)
    basis = SymplecticBasis(space, ((0, 1), (-1, 0)))  # rho of x, y
    sub = finite_index_symplectic_subgroup(group, basis)
    assert sub.j == 1
    assert sub.group.invariants == (1,)
    assert sub.generator_exponents == ((1, 0), (0, 1))


def test_finite_index_j2_case():
    group = HeisenbergGroup(1, (1,))
    space, rho = commutation_form_rho(group)
    basis = SymplecticBasis(space, ((0, Fraction(1, 2)), (-2, 0)))
    sub = finite_index_symplectic_subgroup(group, basis)
    assert sub.j == 2
    # rho(D) = j * C = {(0,1), (-4,0)}, realised by x and y^4
    assert sub.generator_exponents == ((1, 0), (0, 4))
    assert [vec_mat(v, rho) for v in sub.generator_exponents] == [(0, 1), (-4, 0)]
    assert sub.group.invariants == (4,)


def test_finite_index_invariants_always_j_squared():
    # Gram entry is 1/2 here, so the pairing (4/3)(3/2)(1/2) = 1
    group = HeisenbergGroup(1, (2,))
    space, _ = commutation_form_rho(group)
    basis = SymplecticBasis(space, ((Fraction(4, 3), 0), (0, Fraction(3, 2))))
    sub = finite_index_symplectic_subgroup(group, basis)
    assert sub.j == 12
    assert sub.group.invariants == (144,)
    assert rank(sub.generator_exponents) == 2


def test_finite_index_words():
    group = HeisenbergGroup(1, (1,))
    space, _ = commutation_form_rho(group)
    basis = SymplecticBasis(space, ((0, Fraction(1, 2)), (-2, 0)))
    sub = finite_index_symplectic_subgroup(group, basis)
    assert sub.generator_words() == ((("x1", 1),), (("y1", 4),))
