"""Difference families, strong difference families and 2-designs over finite
abelian groups and finite fields."""

from .algebra import (AbelianGroup, CyclicGroup, FieldAdditiveGroup, FieldError, FiniteField,
                      ProductGroup, Subgroup, cyclo_index, field_new, field_of_order, is_prime,
                      primitive_fourth_root, representative_system)
from .families import (Design, RelativeDifferenceFamily, StrongDifferenceFamily, Verdict,
                       affine_plane, compose_design, develop_df, difference_multiset, double,
                       trivial_design, verify_design, verify_df, verify_sdf)
from .lifting import CatalogEntry, LiftError, LiftInput, catalog, catalog_entry, lift, sdf_catalog
from .paley import (PaleyScheme, build_scheme, evaluate_dh, paley_sdf, q_bound, symbolic_dh,
                    transversal_check)
from .search import (SearchProblem, SearchResult, find_constrained_element, greedy_lift_search,
                     make_problem, scan_range, search)

__all__ = [
    "AbelianGroup",
    "CyclicGroup",
    "FieldAdditiveGroup",
    "FieldError",
    "FiniteField",
    "ProductGroup",
    "Subgroup",
    "cyclo_index",
    "field_new",
    "field_of_order",
    "is_prime",
    "primitive_fourth_root",
    "representative_system",
    "Design",
    "RelativeDifferenceFamily",
    "StrongDifferenceFamily",
    "Verdict",
    "affine_plane",
    "compose_design",
    "develop_df",
    "difference_multiset",
    "double",
    "trivial_design",
    "verify_design",
    "verify_df",
    "verify_sdf",
    "CatalogEntry",
    "LiftError",
    "LiftInput",
    "catalog",
    "catalog_entry",
    "lift",
    "sdf_catalog",
    "PaleyScheme",
    "build_scheme",
    "evaluate_dh",
    "paley_sdf",
    "q_bound",
    "symbolic_dh",
    "transversal_check",
    "SearchProblem",
    "SearchResult",
    "find_constrained_element",
    "greedy_lift_search",
    "make_problem",
    "scan_range",
    "search",
]

__version__ = "0.1.0"
