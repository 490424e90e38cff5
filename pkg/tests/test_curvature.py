import random
from fractions import Fraction as F

import pytest

from spdeg import catalog, linalg
from spdeg.catalog import (scaling_transform, shear_transform, rho_family,
                           varrho_family, xi_family)
from spdeg.curvature import (einstein_check, find_degenerate_ricci, levi_civita,
                             metric_compatible, ricci, ricci_form,
                             ricci_matrix_float, ricci_nilpotent, riemann,
                             torsion_free)
from spdeg.tensor import TwoForm, act, is_symplectic

OMEGA = TwoForm.canonical(4)


def _diag(*xs):
    return [[F(x) if i == j else F(0) for j in range(len(xs))] for i, x in enumerate(xs)]


def _mu(key, param=None):
    return catalog.bracket_of(key, param)


def test_levi_civita_flat_abelian():
    lc = levi_civita(_mu("a4"))
    assert all(all(x == 0 for x in lc[i][j]) for i in range(4) for j in range(4))


def test_torsion_and_metric_compatibility_all_classes():
    for cid, _ in catalog.expected_invariants_table():
        mu = catalog.make(cid)[0]
        lc = levi_civita(mu)
        assert torsion_free(mu, lc), str(cid)
        assert metric_compatible(lc), str(cid)


def test_riemann_antisymmetric_in_first_two_slots():
    mu = _mu("d4_1:w1")
    r = riemann(mu)
    for i in range(4):
        for j in range(4):
            for k in range(4):
                assert r[i][j][k] == [-x for x in r[j][i][k]]


def test_ricci_reference_values():
    assert ricci(_mu("r4_m1_beta", F(-1))).ricci.m == _diag(-3, -1, -1, 1)
    assert ricci(_mu("a4")).ricci.is_zero()


@pytest.mark.parametrize("t", [F(1, 2), F(2), F(3)])
def test_ricci_scaling_family_diagonal(t):
    got = ricci(xi_family(t)).ricci.m
    expect = _diag(-t * t / 2 - t ** 4 / 2, -t * t / 2, t ** 4 / 2, t * t / 2 - t ** 4 / 2)
    assert got == expect


def test_ricci_scaling_family_signatures():
    assert ricci(xi_family(F(1, 2))).ricci.signature() == (2, 2, 0)
    assert ricci(xi_family(F(2))).ricci.signature() == (1, 3, 0)
    assert ricci(xi_family(F(3))).ricci.signature() == (1, 3, 0)


def test_ricci_nilpotent_agrees_with_full_path_on_nilpotent_classes():
    from spdeg.invariants import nilpotent

    nil = [cid for cid, _ in catalog.expected_invariants_table()
           if nilpotent(catalog.make(cid)[0])]
    assert len(nil) >= 3  # a4, rh3, n4
    for cid in nil:
        mu = catalog.make(cid)[0]
        assert ricci_nilpotent(mu).m == ricci(mu).ricci.m
    for t in (F(1, 2), F(2), F(5)):
        assert ricci_nilpotent(xi_family(t)).m == ricci(xi_family(t)).ricci.m


def test_ricci_nilpotent_example_values():
    assert ricci_nilpotent(xi_family(F(2))).m == _diag(-10, -2, 8, -6)
    assert ricci_nilpotent(_mu("a4")).is_zero()


def test_ricci_nilpotent_rejects_solvable_input():
    with pytest.raises(ValueError):
        ricci_nilpotent(rho_family(F(12)))
    # the shear family is handled by the full path instead
    assert ricci(rho_family(F(12))).ricci.signature() == (1, 3, 0)
    assert ricci(varrho_family(F(2))).ricci.signature() == (1, 3, 0)


def test_einstein_checks():
    c = einstein_check(rho_family(F(0)))
    assert c is not None and c < 0
    assert einstein_check(_mu("a4")) == 0
    assert einstein_check(_mu("r4_m1_beta", F(-1))) is None


def test_scalar_curvature_is_trace():
    tensors = ricci(rho_family(F(0)))
    assert tensors.scalar_curv == sum(tensors.ricci.m[i][i] for i in range(4))
    assert tensors.scalar_curv < 0


def test_lemma_transforms_are_symplectic():
    assert is_symplectic(scaling_transform(F(2)), OMEGA)
    assert is_symplectic(scaling_transform(F(1, 2)), OMEGA)
    assert is_symplectic(shear_transform(F(12)), OMEGA)
    with pytest.raises(ValueError):
        scaling_transform(F(0))


def test_find_degenerate_ricci_on_shear_family():
    roots = find_degenerate_ricci(rho_family, 0, 12)
    assert len(roots) == 1
    r = roots[0]
    assert 0 < float(r.t_hat) < 12
    assert abs(r.det_at_t_hat) < 1e-12
    assert r.signature_below == (0, 4, 0)
    assert r.signature_above == (1, 3, 0)
    assert r.low <= r.t_hat <= r.high


def test_find_degenerate_ricci_reports_no_root():
    # no sign change of det Ric on (0, 1): negative definite throughout
    assert find_degenerate_ricci(rho_family, 0, 1, subintervals=20) == []


def test_signature_locally_constant_where_nondegenerate():
    from spdeg.linalg import signature_float

    mu = _mu("r4_m1_beta", F(-1))
    base = signature_float(ricci_matrix_float(mu), tol=1e-6)
    rng = random.Random(5)
    for _ in range(5):
        from spdeg.tensor import transvection
        u = [F(rng.randint(-2, 2), 97) for _ in range(4)]
        g = transvection(u, F(1, 89), OMEGA)
        moved = act(g, mu)
        assert signature_float(ricci_matrix_float(moved), tol=1e-6) == base


def test_ricci_pullback_equivariance_orthogonal_symplectic_float_path():
    # orthogonal-symplectic block rotations built from rational unit pairs
    a1, b1 = F(3, 5), F(4, 5)
    a2, b2 = F(5, 13), F(12, 13)
    g = [[a1, 0, -b1, 0], [0, a2, 0, -b2], [b1, 0, a1, 0], [0, b2, 0, a2]]
    assert is_symplectic(g, OMEGA)
    gt = linalg.transpose(g)
    assert linalg.mat_eq(linalg.mat_mul(gt, g), linalg.identity(4))
    for key in ("n4", "d4_1:w1"):
        mu = _mu(key)
        lhs = ricci_matrix_float(act(g, mu))
        ginv = linalg.inverse(g)
        rhs_exact = linalg.mat_mul(linalg.transpose(ginv),
                                   linalg.mat_mul(ricci_form(mu).m, ginv))
        rhs = [[float(x) for x in row] for row in rhs_exact]
        assert all(abs(lhs[i][j] - rhs[i][j]) < 1e-9 for i in range(4) for j in range(4))
