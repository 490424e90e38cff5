import random
from fractions import Fraction as F

import pytest

from spdeg import catalog, linalg
from spdeg.catalog import CurveInstance, class_id, parse_curve
from spdeg.degeneration import (HASSE_EDGES, NODE_BY_ID, TrapError,
                                borbit_element, classify_pairs, hasse,
                                n_element, r2p_trap_coords, r2r2_trap_coords,
                                r2r2_trap_residual, random_symplectic,
                                verify_curve, witness_for_class)
from spdeg.invariants import obstruction_report
from spdeg.scalars import ExpPoly
from spdeg.tensor import (Bracket, TwoForm, is_closed, is_lie, is_symplectic)

OMEGA = TwoForm.canonical(4)


# -- curve verification -----------------------------------------------------------


def test_verify_curve_first_item(curve_reports):
    by_label = {r.label: r for r in curve_reports}
    r = by_label["appendix:d422-r4a"]
    assert r.symplectic_exact and r.status == "verified" and r.verified
    ds = [d for _, d in r.float_distances]
    assert all(b < a for a, b in zip(ds, ds[1:]))
    assert ds[-1] < 1e-8


def test_verify_curve_worked_example_structure():
    inst = parse_curve("ex2:xi_u")
    r = verify_curve(inst)
    assert r.verified
    nonconst = [(i, j, k, c) for (i, j), vec in r.moved.rules.items()
                for k, c in vec.items() if not ExpPoly.coerce(c).is_constant()]
    assert nonconst == [(2, 3, 4, ExpPoly.exp(-2))]
    assert r.moved.limit() == catalog.bracket_of("r4_alpha", F(-1, 2))


def test_verify_curve_identity_is_nonproper_limit():
    mu = catalog.bracket_of("n4")
    ident = [[ExpPoly.const(1 if i == j else 0) for j in range(4)] for i in range(4)]
    inst = CurveInstance("identity", None, class_id("n4"), class_id("n4"),
                         ident, mu, mu)
    r = verify_curve(inst)
    assert r.status == "verified"
    assert r.moved.limit() == mu
    assert r.verified  # distances identically zero


def test_verify_curve_divergence_and_wrong_target_reports():
    inst = parse_curve("appendix:rh3-a4")
    backwards = CurveInstance("backwards", None, inst.source, inst.target,
                              linalg.transpose(inst.g), inst.source_bracket,
                              inst.target_bracket)
    # transposing the diagonal matrix changes nothing; flip the clock instead
    flipped = [[ExpPoly({-r: c for r, c in x.terms.items()}) for x in row]
               for row in inst.g]
    diverging = CurveInstance("flipped", None, inst.source, inst.target,
                              flipped, inst.source_bracket, inst.target_bracket)
    r = verify_curve(diverging)
    assert r.status == "no limit"
    assert r.bad_entries
    wrong = CurveInstance("wrong", None, inst.source, inst.target, inst.g,
                          inst.source_bracket, catalog.bracket_of("n4"))
    r = verify_curve(wrong)
    assert r.status == "wrong target"
    assert set(r.bad_entries) == {(1, 2, 4), (1, 4, 3)}


def test_verify_curve_flags_non_symplectic():
    mu = catalog.bracket_of("n4")
    bad = [[ExpPoly.const(2 if i == j == 0 else (1 if i == j else 0))
            for j in range(4)] for i in range(4)]
    r = verify_curve(CurveInstance("bad", None, class_id("n4"), class_id("n4"),
                                   bad, mu, mu))
    assert r.status == "not symplectic" and not r.verified


# -- B-orbit parametrization --------------------------------------------------------


def test_borbit_identity_parameters():
    mu = catalog.bracket_of("r2r2", F(7, 3))
    assert borbit_element(mu, (F(1), F(1)), (0, 0, 0, 0)) == mu


def test_borbit_matches_printed_form():
    lam = F(7, 3)
    mu = catalog.bracket_of("r2r2", lam)
    t1, t2, a, x, y, z = F(2), F(3, 2), F(1, 3), F(-1, 2), F(2), F(1, 5)
    xi = borbit_element(mu, (t1, t2), (a, x, y, z))
    assert xi.pair(1, 3)[2] == t1 and xi.pair(1, 3)[3] == -t1 * a
    assert xi.pair(2, 4)[3] == t2
    assert xi.pair(2, 3)[2] == -t1 * a and xi.pair(2, 3)[3] == a * (t2 + t1 * a)
    assert xi.pair(1, 2)[2] == (a * x + y - t2 * t1 * lam) * t1


def test_borbit_outputs_are_symplectic_lie_algebras():
    rng = random.Random(19)
    for key, param in (("r2r2", F(1)), ("r2p", None), ("d4_2:w2", None)):
        mu = catalog.bracket_of(key, param)
        for _ in range(10):
            t1 = abs(F(rng.randint(1, 5), rng.randint(1, 3)))
            t2 = abs(F(rng.randint(1, 5), rng.randint(1, 3)))
            xi = borbit_element(mu, (t1, t2),
                                tuple(F(rng.randint(-3, 3), 2) for _ in range(4)))
            assert is_lie(xi) and is_closed(xi, OMEGA)


def test_borbit_rejects_nonpositive_diagonal():
    mu = catalog.bracket_of("r2p")
    with pytest.raises(ValueError):
        borbit_element(mu, (F(0), F(1)), (0, 0, 0, 0))
    with pytest.raises(ValueError):
        borbit_element(mu, (F(1), F(-2)), (0, 0, 0, 0))


def test_n_element_is_symplectic():
    h = n_element(F(1, 3), F(-2), F(5, 2), F(7))
    assert is_symplectic(h, OMEGA)


def test_k_element_float_path():
    from spdeg.degeneration import k_element

    a = [[F(3, 5), F(0)], [F(0), F(5, 13)]]
    b = [[F(4, 5), F(0)], [F(0), F(12, 13)]]
    g = k_element(a, b)
    assert is_symplectic(g, OMEGA)
    with pytest.raises(ValueError):
        k_element([[F(1), F(0)], [F(0), F(1)]], [[F(1), F(0)], [F(0), F(0)]])


# -- trapping subspaces ---------------------------------------------------------------


def test_trap_residual_on_orbit_samples():
    rng = random.Random(29)
    for lam in (F(0), F(1), F(7, 3)):
        mu = catalog.bracket_of("r2r2", lam)
        for _ in range(25):
            t1 = abs(F(rng.randint(1, 4), rng.randint(1, 3)))
            t2 = abs(F(rng.randint(1, 4), rng.randint(1, 3)))
            xi = borbit_element(mu, (t1, t2),
                                tuple(F(rng.randint(-2, 2), 3) for _ in range(4)))
            assert r2r2_trap_residual(xi, lam) == 0


def test_trap_rejects_off_pattern_brackets():
    with pytest.raises(TrapError):
        r2r2_trap_coords(catalog.bracket_of("n4"))
    with pytest.raises(TrapError):
        r2p_trap_coords(catalog.bracket_of("n4"))


def test_trap_residual_handcrafted():
    xi = Bracket(4, {(1, 2): {3: F(1)}, (2, 3): {4: F(1)}})
    assert r2r2_trap_coords(xi) == (F(1), F(0), F(0), F(0), F(1), F(0))
    assert r2r2_trap_residual(xi, F(1)) == 1


def test_trap_shared_coordinate_enforced():
    bad = Bracket(4, {(1, 3): {4: F(1)}, (2, 3): {3: F(2)}})
    with pytest.raises(TrapError):
        r2r2_trap_coords(bad)


def test_r2p_orbit_lands_in_trap():
    rng = random.Random(31)
    mu = catalog.bracket_of("r2p")
    for _ in range(25):
        t1 = abs(F(rng.randint(1, 4), rng.randint(1, 3)))
        t2 = abs(F(rng.randint(1, 4), rng.randint(1, 3)))
        xi = borbit_element(mu, (t1, t2),
                            tuple(F(rng.randint(-2, 2), 3) for _ in range(4)))
        coords = r2p_trap_coords(xi)
        assert len(coords) == 4


# -- the assembled diagram --------------------------------------------------------------


def test_hasse_all_edges_verified(hasse_report):
    assert hasse_report.all_verified
    assert hasse_report.strict_der_omega
    assert len(hasse_report.edges) == len(HASSE_EDGES) == 35


def test_hasse_rejects_self_loops():
    with pytest.raises(ValueError):
        hasse([("n4", "n4", "appendix:n4-rh3", None)])


def test_hasse_dot_output(hasse_report):
    dot = hasse_report.dot
    assert dot.startswith("digraph")
    assert '"d4_2:w2" -> "r4_alpha:alpha=-1/2"' in dot
    assert '"rh3" -> "a4"' in dot
    assert dot.count("->") == 35
    assert '[label="(n4, w)"]' in dot


def test_hasse_closure_contains_composites(hasse_report):
    closure = hasse_report.closure
    assert "a4" in closure["d4_2:w2"]      # via r4_alpha and n4 and rh3
    assert "rh3" in closure["h4:plus"]
    assert "n4" not in closure["r2r2"]     # excluded by the worked argument


def test_battery_never_contradicts_reachable_pairs(hasse_report):
    for a, b, status in classify_pairs(hasse_report):
        if status != "reachable":
            continue
        for s in NODE_BY_ID[a].class_ids():
            for t in NODE_BY_ID[b].class_ids():
                assert not obstruction_report(s, t).excluded(), (a, b)


def test_pair_classification_is_exhaustive(hasse_report):
    pairs = classify_pairs(hasse_report)
    n = len(NODE_BY_ID)
    assert len(pairs) == n * (n - 1)
    assert {s for _, _, s in pairs} == {"reachable", "obstructed", "open"}


def test_worked_nondegenerations_not_reachable(hasse_report):
    closure = hasse_report.closure
    assert "d4_2:w1" not in closure["d4_2:w2"]
    assert "n4" not in closure["r2r2"]
    assert "n4" not in closure["r2p"]


# -- random symplectic sampling -----------------------------------------------------------


def test_random_symplectic_products_exact():
    rng = random.Random(37)
    for _ in range(50):
        assert is_symplectic(random_symplectic(rng), OMEGA)


# -- witness search ------------------------------------------------------------------------


def test_witness_for_single_class():
    rec = witness_for_class(class_id("n4"))
    assert rec.status == "witness"
    assert rec.signature == (1, 3, 0)
    assert rec.float_min_eig > 1e-6
    assert rec.t <= 25.0


def test_witness_chained_class():
    rec = witness_for_class(class_id("d4_2:w2"))
    assert rec.status == "witness"
    assert "appendix:d422-r4a" in rec.provenance
    assert "appendix:r4alpha-n4" in rec.provenance


def test_witness_special_parameters_use_pinned_plans():
    # at these parameter values the generic family curves are singular, so
    # the witnesses come straight from the reference transforms
    rec = witness_for_class(class_id("d4_lambda", F(1, 2)))
    assert rec.status == "witness" and "shear:t=12" in rec.provenance
    rec = witness_for_class(class_id("r4_m1_beta", F(-1)))
    assert rec.status == "witness" and "identity" in rec.provenance
