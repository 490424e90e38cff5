import random
from fractions import Fraction as F

import pytest

from spdeg import catalog, linalg
from spdeg.degeneration import random_symplectic
from spdeg.scalars import ExpPoly
from spdeg.tensor import (Bracket, MultiForm, MultiVec, TwoForm, act,
                          bracket_distance, bracket_to_table, d_omega, flat,
                          is_closed, is_lie, is_symplectic, jacobiator, sharp,
                          symplectic_inverse, table_to_bracket, trace_slot,
                          transvection)

OMEGA = TwoForm.canonical(4)


def _mu(key, param=None):
    return catalog.bracket_of(key, param)


# -- construction ----------------------------------------------------------------


def test_bracket_antisymmetry_by_construction():
    mu = Bracket(4, {(2, 1): {3: F(5)}})
    assert mu.entry(1, 2, 3) == -5
    assert mu.entry(2, 1, 3) == 5
    assert mu.entry(1, 2, 1) == 0
    assert mu.pair(3, 4) == [F(0)] * 4


def test_bracket_rejects_diagonal_and_bad_indices():
    with pytest.raises(ValueError):
        Bracket(4, {(1, 1): {2: F(1)}})
    with pytest.raises(ValueError):
        Bracket(4, {(1, 5): {2: F(1)}})
    with pytest.raises(ValueError):
        Bracket(3)


def test_canonical_two_form():
    assert OMEGA.pairing(1, 3) == 1
    assert OMEGA.pairing(2, 4) == 1
    assert OMEGA.pairing(1, 2) == 0
    assert OMEGA.pairing(3, 1) == -1
    assert OMEGA.nondegenerate()
    om6 = TwoForm.canonical(6)
    assert om6.pairing(3, 6) == 1


def test_canonical_inner_product():
    from spdeg.tensor import InnerProduct

    dot = InnerProduct.canonical(4)
    assert dot.m == linalg.identity(4)
    assert dot([F(1), F(2), F(0), F(0)], [F(3), F(1), F(0), F(0)]) == 5
    with pytest.raises(ValueError):
        InnerProduct([[F(0), F(1)], [F(1), F(0)]])  # indefinite


# -- validation ------------------------------------------------------------------


def test_jacobiator_zero_bracket():
    jac = jacobiator(Bracket(4))
    assert all(all(x == 0 for x in v) for v in jac.values())


def test_jacobiator_table_law_and_broken_variant():
    assert is_lie(_mu("d4_2:w2"))
    broken = Bracket(4, {(1, 2): {2: F(1)}, (1, 3): {3: F(2)},
                         (1, 4): {4: F(1)}, (2, 3): {4: F(1)}})
    assert not is_lie(broken)


def test_d_omega_examples():
    assert is_closed(_mu("n4"), OMEGA)
    assert is_closed(Bracket(4), OMEGA)
    single = Bracket(4, {(1, 2): {1: F(1)}})
    vals = d_omega(single, OMEGA)
    assert vals[(1, 2, 3)] != 0


def test_d_omega_dim_mismatch():
    with pytest.raises(ValueError):
        d_omega(Bracket(4), TwoForm.canonical(6))


# -- the action ------------------------------------------------------------------


def test_act_identity():
    mu = _mu("n4")
    assert act(linalg.identity(4), mu) == mu


def test_act_worked_example_family():
    g = [[ExpPoly.const(1) if i == j else ExpPoly.const(0) for j in range(4)]
         for i in range(4)]
    g[1][1] = ExpPoly.exp(1)
    g[3][3] = ExpPoly.exp(-1)
    moved = act(g, _mu("d4_2:w2"), symplectic_inverse(g, OMEGA))
    assert moved.entry(1, 2, 2) == ExpPoly.const(-1)
    assert moved.entry(1, 3, 3) == ExpPoly.const(2)
    assert moved.entry(1, 4, 4) == ExpPoly.const(1)
    assert moved.entry(2, 3, 4) == ExpPoly.exp(-2)


def test_act_is_group_action_50_random_pairs():
    rng = random.Random(41)
    mu = _mu("r2r2", F(1))
    for _ in range(50):
        g = random_symplectic(rng)
        h = random_symplectic(rng)
        assert act(linalg.mat_mul(g, h), mu) == act(g, act(h, mu))


def test_act_requires_invertible():
    with pytest.raises(ValueError):
        act(linalg.zeros(4), _mu("n4"))


def test_act_exppoly_requires_symplectic():
    g = [[ExpPoly.const(1 if i == j else 0) for j in range(4)] for i in range(4)]
    g[0][0] = ExpPoly.exp(1)  # scales one coordinate only, so not symplectic
    with pytest.raises(ValueError):
        act(g, _mu("n4"))


# -- symplectic membership ---------------------------------------------------------


def test_is_symplectic_block_scaling():
    g = [[F(3), 0, 0, 0], [0, F(-2, 7), 0, 0], [0, 0, F(1, 3), 0], [0, 0, 0, F(-7, 2)]]
    assert is_symplectic(g, OMEGA)


def test_is_symplectic_exppoly_curve():
    inst = catalog.parse_curve("appendix:d411-rh3")
    assert is_symplectic(inst.g, OMEGA)
    gi = symplectic_inverse(inst.g, OMEGA)
    prod = linalg.mat_mul(inst.g, gi)
    ident = [[ExpPoly.const(1 if i == j else 0) for j in range(4)] for i in range(4)]
    assert all(prod[i][j] == ident[i][j] for i in range(4) for j in range(4))


def test_is_symplectic_counterexample():
    g = [[F(2), 0, 0, 0], [0, F(1), 0, 0], [0, 0, F(1), 0], [0, 0, 0, F(1)]]
    assert not is_symplectic(g, OMEGA)


def test_symplectic_closure_under_inverse_and_product_50_samples():
    rng = random.Random(43)
    for _ in range(50):
        g = random_symplectic(rng)
        h = random_symplectic(rng)
        assert is_symplectic(g, OMEGA)
        assert is_symplectic(symplectic_inverse(g, OMEGA), OMEGA)
        assert is_symplectic(linalg.mat_mul(g, h), OMEGA)


def test_transvection_is_symplectic_for_any_vector():
    t = transvection([F(1), F(-2), F(1, 3), F(5)], F(-3, 7), OMEGA)
    assert is_symplectic(t, OMEGA)


def test_closedness_is_equivariant():
    rng = random.Random(47)
    for key in ("n4", "d4_2:w2", "h4:plus"):
        mu = _mu(key)
        assert is_closed(mu, OMEGA)
        for _ in range(5):
            g = random_symplectic(rng)
            assert is_closed(act(g, mu), OMEGA)


# -- musical maps and traces --------------------------------------------------------


def test_flat_evaluation_example():
    mv = MultiVec.from_bracket(_mu("n4"))
    form = flat(mv, 3, OMEGA)
    # w(mu(e1,e2), e2) = w(e4, e2) = -1
    assert form.data[(0, 1, 1)] == -1


def test_flat_sharp_roundtrip_all_slots_all_classes():
    for cid, _ in catalog.expected_invariants_table():
        mv = MultiVec.from_bracket(catalog.make(cid)[0])
        for slot in (1, 2, 3):
            form = flat(mv, slot, OMEGA)
            assert sharp(form, slot, OMEGA) == mv
    # and the opposite composition on a generic trilinear form
    rng = random.Random(3)
    form = MultiForm(4, 3, {idx: F(rng.randint(-3, 3))
                            for idx in MultiForm(4, 3).data})
    for slot in (1, 2, 3):
        assert flat(sharp(form, slot, OMEGA), slot, OMEGA) == form


def test_sharp_of_zero_form_is_zero_map():
    zero = MultiForm(4, 3)
    mv = sharp(zero, 2, OMEGA)
    assert all(all(x == 0 for x in v) for v in mv.data.values())


def test_sharp_rejects_degenerate_form():
    degenerate = TwoForm(linalg.zeros(4))
    with pytest.raises(ValueError):
        sharp(MultiForm(4, 3), 3, degenerate)


def test_trace_slot_examples():
    tr2 = trace_slot(MultiVec.from_bracket(_mu("rr3_0")), 2)
    assert tr2.data[(0,)] == 1  # trace of ad_{e1} for [e1,e3] = e3
    tr2_n4 = trace_slot(MultiVec.from_bracket(_mu("n4")), 2)
    assert all(x == 0 for x in tr2_n4.data.values())
    zero = trace_slot(MultiVec(4, 2), 1)
    assert all(x == 0 for x in zero.data.values())
    with pytest.raises(ValueError):
        trace_slot(MultiVec(4, 2), 3)


# -- distances -------------------------------------------------------------------


def test_bracket_distance_examples():
    mu = _mu("n4")
    assert bracket_distance(mu, mu) == 0
    assert bracket_distance(_mu("a4"), _mu("rh3")) == 1


def test_bracket_distance_exppoly_family():
    inst = catalog.parse_curve("ex2:xi_u")
    moved = act(inst.g, inst.source_bracket, symplectic_inverse(inst.g, OMEGA))
    d = bracket_distance(moved, inst.target_bracket)
    assert d == ExpPoly.exp(-2)


def test_bracket_distance_dim_mismatch():
    with pytest.raises(ValueError):
        bracket_distance(Bracket(4), Bracket(6))


# -- dense conversions and serialization ---------------------------------------------


def test_table_bracket_roundtrip():
    mu = _mu("d4p:plus", F(5, 2))
    assert table_to_bracket(bracket_to_table(mu)) == mu


def test_json_roundtrip_bit_exact():
    for key, param in (("n4", None), ("h4:plus", None), ("r2r2", F(7, 3)),
                       ("d4p:minus", F(5, 2))):
        mu = _mu(key, param)
        text = mu.to_json()
        again = Bracket.from_json(text)
        assert again == mu
        assert again.to_json() == text


def test_json_schema_shape():
    d = _mu("n4").to_json_dict()
    assert d == {"dim": 4, "scalars": "rational", "omega": "canonical",
                 "bracket": {"1,2": {"4": "1"}, "1,4": {"3": "1"}}}
