import pytest

from tamecert.laurent import LaurentPoly
from tamecert.linalg import det, identity, mat_mul
from tamecert.modules import (
    CertificateError,
    FinitePresentation,
    HeisenbergModule,
    Z_INVERSE,
    Z_MATRIX,
    build_module,
    commutator_word,
    fitting_certificate,
    format_word,
    hnn_tower,
    parse_word,
    reduce_word,
    split_extension_presentation,
    verify_annihilators,
    verify_group_relations,
)
from tamecert.groups import HeisenbergGroup


def poly(nvars, terms):
    return LaurentPoly(nvars, terms)


def k1_module(m=1):
    return HeisenbergModule(1, (m,))


# --- words ---------------------------------------------------------------------

def test_word_roundtrip():
    w = parse_word("x1^-1 y1^-1 x1 y1 z^-1")
    assert format_word(w) == "x1^-1 y1^-1 x1 y1 z^-1"
    assert parse_word("1") == ()
    assert reduce_word((("x1", 1), ("x1", -1))) == ()


def test_commutator_word():
    w = commutator_word((("x1", 1),), (("y1", 1),))
    assert format_word(w) == "x1^-1 y1^-1 x1 y1"


# --- module action ---------------------------------------------------------------

def test_z_action_on_generators():
    mod = k1_module()
    a1, a2 = mod.generator(0), mod.generator(1)
    assert mod.act_z(a1) == (LaurentPoly.one(1), LaurentPoly.one(1))
    assert mod.act_z(a2) == (LaurentPoly.one(1), LaurentPoly.constant(1, 2))


def test_y_action_on_a1():
    mod = k1_module()
    a1 = mod.generator(0)
    one_plus_x = LaurentPoly.one(1) + LaurentPoly.variable(1, 0)
    assert mod.act_y(a1, 0) == (one_plus_x, LaurentPoly.zero(1))


def test_x_action_on_a1():
    mod = k1_module()
    a1 = mod.generator(0)
    assert mod.act_x(a1, 0) == (LaurentPoly.variable(1, 0), LaurentPoly.zero(1))


def test_apply_word_xy_hand_value():
    # hand computation: a1 . (x y) = (x + x^2, x + x^2) for k=1, m=1
    mod = k1_module()
    a1 = mod.generator(0)
    expected = (poly(1, {(1,): 1, (2,): 1}), poly(1, {(1,): 1, (2,): 1}))
    assert mod.apply_word(a1, "x1 y1") == expected
    # and matches [x, y] = z: a1 . (y x z) gives the same element
    assert mod.apply_word(a1, "y1 x1 z") == expected


def test_apply_word_empty():
    mod = k1_module()
    a1 = mod.generator(0)
    assert mod.apply_word(a1, "") == a1
    assert mod.apply_word(a1, ()) == a1


def test_apply_word_unknown_generator():
    mod = k1_module()
    with pytest.raises(ValueError):
        mod.apply_word(mod.generator(0), "w1")


def test_y_inverse_left_inverse():
    mod = HeisenbergModule(2, (2, 4))
    for gen in range(2):
        for expts in [(0, 0), (1, -2), (-1, 3)]:
            base = mod.generator(gen)
            elem = (base[0].shift(expts), base[1].shift(expts))
            for j in range(2):
                assert mod.act_y(mod.act_y(elem, j, 1), j, -1) == elem


def test_y_inverse_not_defined_off_image():
    mod = k1_module()
    with pytest.raises(ValueError):
        mod.act_y(mod.generator(0), 0, -1)


# --- certificates -----------------------------------------------------------------

def test_verify_relations_k1():
    cert = verify_group_relations(k1_module(), degree=3)
    assert cert["ok"]
    assert cert["relations"] == 4  # [x,z], [y,z], [x,y]=z, y y^-1
    assert cert["elements"] == 2 * 7


def test_verify_relations_all_small_modules():
    chains = [(1, (1,)), (1, (3,)), (2, (1, 2)), (2, (2, 2))]
    for k, ms in chains:
        cert = verify_group_relations(HeisenbergModule(k, ms), degree=2)
        assert cert["ok"]


def test_relation_failure_would_carry_witness():
    mod = k1_module()
    broken = dict.__getitem__  # marker to keep the test honest below
    # sabotage: wrong commutation exponent must be caught
    class Sabotaged(HeisenbergModule):
        def act_z(self, elem, power=1):
            return super().act_z(elem, power * 2)
    with pytest.raises(CertificateError) as err:
        verify_group_relations(Sabotaged(1, (1,)), degree=1)
    assert err.value.witness is not None
    assert broken is dict.__getitem__


def test_annihilators_k1():
    cert = verify_annihilators(k1_module())
    assert cert["ok"]
    assert cert["checked"] == ["a1*(1+x1-y1)", "a2*(1+x1-y1)"]


def test_annihilators_written_additively():
    mod = k1_module()
    a1 = mod.generator(0)
    lhs = mod.add(a1, mod.act_x(a1, 0))
    rhs = mod.act_y(a1, 0)
    assert mod.sub(lhs, rhs) == mod.zero()


def test_annihilators_k3():
    cert = verify_annihilators(HeisenbergModule(3, (1, 2, 4)))
    assert len(cert["checked"]) == 6


# --- fitting certificate -----------------------------------------------------------

def test_fitting_matrix_constants():
    assert det(Z_MATRIX) == 1
    assert mat_mul(Z_MATRIX, Z_INVERSE) == identity(2)
    assert Z_MATRIX[0][0] + Z_MATRIX[1][1] == 3


def sylvester_resultant_with_cyclotomic(n):
    """Independent oracle: res(t^2 - 3t + 1, t^n - 1) via the Sylvester
    matrix determinant."""
    f = [1, -3, 1]
    g = [1] + [0] * (n - 1) + [-1]
    size = 2 + n
    rows = []
    for i in range(n):
        rows.append([0] * i + f + [0] * (size - 3 - i))
    for i in range(2):
        rows.append([0] * i + g + [0] * (size - len(g) - i))
    return int(det(tuple(tuple(r) for r in rows)))


def test_fitting_certificate_anchors():
    cert = fitting_certificate(n_max=10)
    assert cert["ok"]
    assert cert["char_poly"] == [1, -3, 1]
    assert cert["discriminant"] == 5
    # hand anchors: det(M - I) = -1, det(M^2 - I) = (1+3+1)*(1-3+1) = -5
    assert cert["resultants"][0] == -1
    assert cert["resultants"][1] == -5
    for n in range(1, 11):
        assert cert["resultants"][n - 1] == sylvester_resultant_with_cyclotomic(n)
        assert cert["resultants"][n - 1] != 0


# --- presentations -----------------------------------------------------------------

def test_presentation_k0():
    pres = split_extension_presentation(HeisenbergGroup(0, ()))
    assert pres.generators == ("z", "a1", "a2")
    rels = set(pres.relator_strings())
    assert rels == {
        "a1^-1 a2^-1 a1 a2",
        "z^-1 a1 z a2^-1 a1^-1",
        "z^-1 a2 z a2^-2 a1^-1",
    }


def test_presentation_k1_contains_commutator_relator():
    pres = split_extension_presentation(HeisenbergGroup(1, (1,)))
    assert "x1^-1 y1^-1 x1 y1 z^-1" in pres.relator_strings()


def test_presentation_k2_relators():
    pres = split_extension_presentation(HeisenbergGroup(2, (1, 2)))
    rels = pres.relator_strings()
    assert "x1^-1 x2^-1 x1 x2" in rels
    assert "x2^-1 y2^-1 x2 y2 z^-2" in rels


def test_presentation_levels_differ_by_last_y():
    group = HeisenbergGroup(2, (1, 2))
    full = split_extension_presentation(group)
    lower = split_extension_presentation(group, level=1)
    assert set(full.generators) - set(lower.generators) == {"y2"}
    extra = set(full.relator_strings()) - set(lower.relator_strings())
    assert all("y2" in rel for rel in extra)
    assert set(lower.relator_strings()) <= set(full.relator_strings())


def test_presentation_rejects_undeclared_generator():
    with pytest.raises(ValueError):
        FinitePresentation(("a",), ((("b", 1),),))


def test_hnn_tower_structure():
    group = HeisenbergGroup(2, (1, 2))
    tower = hnn_tower(group)
    assert [lvl["stable_letter"] for lvl in tower] == ["z", "y1", "y2"]
    assert tower[0]["endomorphism"]["a1"] == "a1 a2"
    assert tower[2]["endomorphism"]["x2"] == "x2 z^2"
    # stable letters are fixed by later levels
    assert tower[2]["endomorphism"]["y1"] == "y1"


def test_build_module_from_group():
    mod = build_module(HeisenbergGroup(2, (1, 2)))
    assert mod.k == 2
    assert mod.invariants == (1, 2)
    mod0 = build_module(HeisenbergGroup(0, ()))
    assert mod0.k == 0
    assert mod0.act_z(mod0.generator(0)) == (LaurentPoly.one(0), LaurentPoly.one(0))
