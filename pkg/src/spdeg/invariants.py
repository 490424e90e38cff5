"""Degeneration obstructions: derivation algebras, equivariant products,
trace forms, exact signatures, unimodularity, derived series.

All kernels are computed exactly; dimension claims carry no tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from . import linalg
from .catalog import ClassId, expected_invariants, make
from .scalars import format_rational
from .tensor import (Bracket, MultiForm, MultiVec, TwoForm, is_lie, sharp,
                     trace_slot, validate_symplectic)


@dataclass
class DerivationAlgebra:
    basis: list  # square rational matrices
    dim: int


def _derivation_rows(mu: Bracket):
    """Rows of the linear system D[e_i,e_j] = [De_i,e_j] + [e_i,De_j].

    Unknowns are the dim*dim entries D[p][q] in row-major order; one row per
    (i < j, component m).
    """
    n = mu.dim
    rows = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            bij = mu.pair(i, j)
            for m in range(1, n + 1):
                row = [Fraction(0)] * (n * n)
                for k in range(1, n + 1):
                    if bij[k - 1] != 0:
                        row[(m - 1) * n + (k - 1)] += bij[k - 1]
                for p in range(1, n + 1):
                    c = mu.entry(p, j, m)
                    if c != 0:
                        row[(p - 1) * n + (i - 1)] -= c
                    c = mu.entry(i, p, m)
                    if c != 0:
                        row[(p - 1) * n + (j - 1)] -= c
                rows.append(row)
    return rows


def _skew_adjoint_rows(dim: int, omega: TwoForm):
    """Rows of w(De_i, e_j) + w(e_i, De_j) = 0 for i < j (the rest is redundant)."""
    rows = []
    for i in range(dim):
        for j in range(i + 1, dim):
            row = [Fraction(0)] * (dim * dim)
            for p in range(dim):
                if omega.m[p][j] != 0:
                    row[p * dim + i] += omega.m[p][j]
                if omega.m[i][p] != 0:
                    row[p * dim + j] += omega.m[i][p]
            rows.append(row)
    return rows


def _kernel_to_matrices(basis, dim):
    return [[[v[p * dim + q] for q in range(dim)] for p in range(dim)] for v in basis]


def derivations(mu: Bracket) -> DerivationAlgebra:
    """Exact basis of the derivation algebra of mu."""
    if not is_lie(mu):
        raise ValueError("input is not a Lie bracket")
    rows = _derivation_rows(mu)
    basis = linalg.nullspace(rows)
    return DerivationAlgebra(_kernel_to_matrices(basis, mu.dim), len(basis))


def symplectic_derivations(mu: Bracket, omega: TwoForm) -> DerivationAlgebra:
    """Exact basis of the derivations that are also skew-adjoint for omega."""
    if not validate_symplectic(mu, omega):
        raise ValueError("input is not a symplectic Lie algebra")
    rows = _derivation_rows(mu) + _skew_adjoint_rows(mu.dim, omega)
    basis = linalg.nullspace(rows)
    return DerivationAlgebra(_kernel_to_matrices(basis, mu.dim), len(basis))


def derivation_kernel_rank_oracle(mu: Bracket, omega: Optional[TwoForm] = None) -> int:
    """Kernel dimension via the independent fraction-free rank routine."""
    rows = _derivation_rows(mu)
    if omega is not None:
        rows += _skew_adjoint_rows(mu.dim, omega)
    return mu.dim * mu.dim - linalg.rank_bareiss(rows)


def is_derivation(mu: Bracket, d) -> bool:
    n = mu.dim
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            lhs = linalg.mat_vec(d, mu.pair(i, j))
            di = [d[p][i - 1] for p in range(n)]
            dj = [d[p][j - 1] for p in range(n)]
            ei = [Fraction(1) if p == i - 1 else Fraction(0) for p in range(n)]
            ej = [Fraction(1) if p == j - 1 else Fraction(0) for p in range(n)]
            rhs = [a + b for a, b in zip(mu.apply(di, ej), mu.apply(ei, dj))]
            if any(x != y for x, y in zip(lhs, rhs)):
                return False
    return True


def orbit_dim(mu: Bracket, omega: Optional[TwoForm] = None, group: str = "symplectic") -> int:
    """Orbit dimension as dim(G) - dim(stabilizer Lie algebra)."""
    n = mu.dim // 2
    if group == "symplectic":
        omega = omega or TwoForm.canonical(mu.dim)
        return n * (2 * n + 1) - symplectic_derivations(mu, omega).dim
    if group == "general-linear":
        return (2 * n) ** 2 - derivations(mu).dim
    raise ValueError(f"unknown group {group!r}")


# -- symmetric forms -------------------------------------------------------------


@dataclass
class SymForm:
    """Symmetric bilinear form with exact signature bookkeeping."""

    m: list

    def __post_init__(self):
        n = len(self.m)
        for i in range(n):
            for j in range(n):
                if self.m[i][j] != self.m[j][i]:
                    raise ValueError("matrix is not symmetric")

    def signature(self):
        return linalg.signature_exact(self.m)

    def signature_float(self, tol: float = 1e-9):
        return linalg.signature_float(self.m, tol)

    def is_zero(self):
        return all(x == 0 for row in self.m for x in row)

    def verdict(self) -> str:
        """Definiteness verdict derived from the exact signature triple."""
        np_, nm, nz = self.signature()
        if np_ == 0 and nm == 0:
            return "zero"
        if nm == 0:
            return "positive definite" if nz == 0 else "positive semidefinite, nonzero"
        if np_ == 0:
            return "negative definite" if nz == 0 else "negative semidefinite, nonzero"
        return "indefinite"

    def to_json_dict(self):
        np_, nm, nz = self.signature()
        return {"matrix": [[format_rational(x) for x in row] for row in self.m],
                "signature": [np_, nm, nz]}


def signature(form: SymForm):
    return form.signature()


# -- equivariant products and trace forms ----------------------------------------


def second_trace(mu: Bracket):
    """The 1-form v -> trace(ad_v) on basis vectors, as a coordinate list."""
    n = mu.dim
    return [linalg.sum_entries([mu.entry(i, p, p) for p in range(1, n + 1)])
            for i in range(1, n + 1)]


def equivariant_product(mu: Bracket, coeffs, omega: TwoForm):
    """The six-coefficient equivariant bilinear product attached to a closed bracket.

    Defined through omega by
        w(P(v1,v2), v3) = c1 w(mu(v1,v2),v3) + c2 w(mu(v2,v3),v1)
                        + c3 w(mu(v3,v1),v2) + c4 w(v1,v2) tr(ad_{v3})
                        + c5 w(v2,v3) tr(ad_{v1}) + c6 w(v3,v1) tr(ad_{v2})
    and recovered by raising the third slot.  Returns a dense bilinear table.
    coeffs = (c1..c6).  (c1,c2,c3,c4,c5,c6) = (0,0,-1,0,0,0) is the canonical
    torsion-free flat connection of the symplectic structure.
    """
    if not omega.nondegenerate():
        raise ValueError("degenerate two-form")
    c1, c2, c3, c4, c5, c6 = (Fraction(c) for c in coeffs)
    n = mu.dim
    tr2 = second_trace(mu)
    form = MultiForm(n, 3)
    basis = linalg.identity(n)
    for i in range(n):
        for j in range(n):
            mij = mu.pair(i + 1, j + 1)
            for k in range(n):
                val = Fraction(0)
                if c1 != 0:
                    val += c1 * omega(mij, basis[k])
                if c2 != 0:
                    val += c2 * omega(mu.pair(j + 1, k + 1), basis[i])
                if c3 != 0:
                    val += c3 * omega(mu.pair(k + 1, i + 1), basis[j])
                if c4 != 0:
                    val += c4 * omega.m[i][j] * tr2[k]
                if c5 != 0:
                    val += c5 * omega.m[j][k] * tr2[i]
                if c6 != 0:
                    val += c6 * omega.m[k][i] * tr2[j]
                form.data[(i, j, k)] = val
    prod = sharp(form, 3, omega)
    return [[prod.data[(i, j)] for j in range(n)] for i in range(n)]


def chu_connection(mu: Bracket, omega: TwoForm):
    """The canonical torsion-free flat connection product."""
    return equivariant_product(mu, (0, 0, -1, 0, 0, 0), omega)


class AsymmetryError(ValueError):
    """A trace form expected to be symmetric came out asymmetric."""


def composition_trace_form(table) -> SymForm:
    """The form (X, Y) -> trace(v -> P(X, P(Y, v))) of a bilinear product table.

    Asymmetric results raise AsymmetryError rather than being averaged.
    """
    n = len(table)
    m = linalg.zeros(n)
    for a in range(n):
        for b in range(n):
            tr = Fraction(0)
            for v in range(n):
                inner = table[b][v]
                w = [Fraction(0)] * n
                for s in range(n):
                    if inner[s] != 0:
                        w = [x + inner[s] * y for x, y in zip(w, table[a][s])]
                tr += w[v]
            m[a][b] = tr
    for i in range(n):
        for j in range(i + 1, n):
            if m[i][j] != m[j][i]:
                raise AsymmetryError(f"trace form asymmetric at ({i + 1},{j + 1})")
    return SymForm(m)


def killing_form(mu: Bracket) -> SymForm:
    """trace(ad_x ad_y), via the third trace of mu(v1, mu(v2, v3))."""
    if not is_lie(mu):
        raise ValueError("input is not a Lie bracket")
    return SymForm(_p_trace_matrix(mu, 3))


def modified_killing_form(mu: Bracket, c) -> SymForm:
    """Killing form plus c * (tr ad) (x) (tr ad)."""
    k = killing_form(mu)
    tr2 = second_trace(mu)
    c = Fraction(c)
    n = mu.dim
    m = [[k.m[i][j] + c * tr2[i] * tr2[j] for j in range(n)] for i in range(n)]
    return SymForm(m)


def _p_map(mu: Bracket) -> MultiVec:
    """The trilinear map (v1,v2,v3) -> mu(v1, mu(v2,v3))."""
    n = mu.dim
    out = MultiVec(n, 3)
    basis = linalg.identity(n)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                out.data[(i, j, k)] = mu.apply(basis[i], mu.pair(j + 1, k + 1))
    return out

def _p_trace_matrix(mu: Bracket, slot: int):
    f = trace_slot(_p_map(mu), slot)
    n = mu.dim
    return [[f.data[(i, j)] for j in range(n)] for i in range(n)]


def first_trace_of_p(mu: Bracket):
    """tr_1 of mu(v1, mu(v2,v3)); identically zero on Lie brackets."""
    return _p_trace_matrix(mu, 1)


# -- structural predicates --------------------------------------------------------


def unimodular(mu: Bracket) -> bool:
    """tr(ad_v) = 0 for every basis vector."""
    return all(x == 0 for x in second_trace(mu))


def derived_dim(mu: Bracket) -> int:
    """Dimension of the span of all bracket values."""
    rows = [mu.pair(i, j) for i in range(1, mu.dim + 1) for j in range(i + 1, mu.dim + 1)]
    rows = [r for r in rows if any(x != 0 for x in r)]
    if not rows:
        return 0
    return linalg.rank(rows)


def _span_rows(vectors):
    rows = [v for v in vectors if any(x != 0 for x in v)]
    if not rows:
        return []
    r, pivots = linalg.rref(rows)
    return r[:len(pivots)]


def nilpotent(mu: Bracket) -> bool:
    """Lower central series reaches zero."""
    n = mu.dim
    basis = linalg.identity(n)
    current = basis
    for _ in range(n + 1):
        nxt = _span_rows([mu.apply(b, c) for b in basis for c in current])
        if not nxt:
            return True
        if len(nxt) == len(current) and linalg.rank(current + nxt) == len(current):
            return False
        current = nxt
    return False


# -- the obstruction battery -------------------------------------------------------


@dataclass
class ObstructionCheck:
    name: str
    passed: bool
    source_value: object
    target_value: object

    def to_json_dict(self):
        return {"name": self.name, "passed": self.passed,
                "source_value": str(self.source_value),
                "target_value": str(self.target_value)}


@dataclass
class ObstructionReport:
    source: ClassId
    target: ClassId
    checks: list

    @property
    def violations(self):
        return [c for c in self.checks if not c.passed]

    def excluded(self) -> bool:
        """True when some necessary condition fails, certifying non-degeneration."""
        return bool(self.violations)

    def to_json_dict(self):
        return {"source": str(self.source), "target": str(self.target),
                "checks": [c.to_json_dict() for c in self.checks]}


@lru_cache(maxsize=None)
def _class_profile(cid: ClassId):
    mu, omega = make(cid)
    return (symplectic_derivations(mu, omega).dim, derivations(mu).dim,
            unimodular(mu), derived_dim(mu))


def obstruction_report(source: ClassId, target: ClassId) -> ObstructionReport:
    """Evaluate the necessary conditions for source to degenerate to target.

    Returned checks with passed=False each certify non-degeneration.
    """
    ds_w, ds, us, dds = _class_profile(source)
    dt_w, dt, ut, ddt = _class_profile(target)
    checks = [
        ObstructionCheck("dim_der_omega_strictly_increases", ds_w < dt_w, ds_w, dt_w),
        ObstructionCheck("dim_der_does_not_decrease", ds <= dt, ds, dt),
        ObstructionCheck("unimodularity_preserved", (not us) or ut, us, ut),
        ObstructionCheck("derived_dim_does_not_increase", ddt <= dds, dds, ddt),
    ]
    return ObstructionReport(source, target, checks)


def invariants_summary(cid: ClassId) -> dict:
    """All invariants of one class, with the tabulated expectation."""
    mu, omega = make(cid)
    dw = symplectic_derivations(mu, omega).dim
    d = derivations(mu).dim
    exp_dw, exp_d = expected_invariants(cid)
    return {
        "class": str(cid),
        "display": cid.display(),
        "dim_der_omega": dw,
        "dim_der": d,
        "expected_dim_der_omega": exp_dw,
        "expected_dim_der": exp_d,
        "matches_expected": (dw, d) == (exp_dw, exp_d),
        "orbit_dim_symplectic": orbit_dim(mu, omega, "symplectic"),
        "orbit_dim_general_linear": orbit_dim(mu, None, "general-linear"),
        "unimodular": unimodular(mu),
        "derived_dim": derived_dim(mu),
        "nilpotent": nilpotent(mu),
    }
