"""Exact verification of Sp(4,R)-orbit closures of symplectic Lie algebras.

Exact structure-constant algebra over the rationals and over exponential
polynomials, the four-dimensional classification catalog with its explicit
degeneration curves, derivation-dimension and trace-form obstructions,
left-invariant curvature with signature analysis, and the assembled
degeneration diagram with its curvature applications.
"""

from .catalog import ClassId, class_id, curves, expected_invariants, make, parse_class, tau6
from .curvature import einstein_check, find_degenerate_ricci, levi_civita, ricci, ricci_nilpotent
from .degeneration import (borbit_element, hasse, non_degeneration_suite,
                           r2r2_trap_residual, theorem_b_search, verify_curve)
from .invariants import (DerivationAlgebra, SymForm, composition_trace_form,
                         derivations, derived_dim, equivariant_product,
                         killing_form, modified_killing_form, nilpotent,
                         obstruction_report, orbit_dim, symplectic_derivations,
                         unimodular)
from .scalars import ExpPoly
from .tensor import (Bracket, InnerProduct, TwoForm, act, bracket_distance,
                     d_omega, flat, is_closed, is_lie, is_symplectic,
                     jacobiator, sharp, symplectic_inverse, trace_slot,
                     transvection)

__all__ = [
    "Bracket", "ClassId", "DerivationAlgebra", "ExpPoly", "InnerProduct",
    "SymForm", "TwoForm", "act", "borbit_element", "bracket_distance",
    "class_id", "composition_trace_form", "curves", "d_omega", "derivations",
    "derived_dim", "einstein_check", "equivariant_product",
    "expected_invariants", "find_degenerate_ricci", "flat", "hasse",
    "is_closed", "is_lie", "is_symplectic", "jacobiator", "killing_form",
    "levi_civita", "make", "modified_killing_form", "nilpotent",
    "non_degeneration_suite", "obstruction_report", "orbit_dim",
    "parse_class", "r2r2_trap_residual", "ricci", "ricci_nilpotent", "sharp",
    "symplectic_derivations", "symplectic_inverse", "tau6", "theorem_b_search",
    "trace_slot", "transvection", "verify_curve",
]
