"""Construct, verify and analyse Stanley sequences and their p-free analogues."""

from .core import (APWitness, CoverageSieve, Sequence, find_p_ap, greedy_stanley, is_covered,
                   is_covered_mod, p_free_mod, stanley_zero)
from .errors import (APFoundError, HorizonError, NotIndependentError, NotModularError,
                     StanleyError, SumCollisionError, TheoremContradiction, ZeroNotInSetError)
from .modular import (ModularSet, VerificationReport, expand, independent_to_modular,
                      load_table1, omega, product, scale, verify_modular_set)
from .structure import (GrowthVerdict, StructureReport, build_pseudomodular, classify_growth,
                        detect_independent, detect_modular_params, detect_pseudomodular,
                        detect_structure)
from .basic import (Basis, basis_sequence, complete, cover_witness_digits, scale_basic,
                    theorem_set, validate_basis)
from .gaps import GapProfile, gap_family, gap_profile
from .search import SearchResult, SearchTask, scan_generators, search_modular_sets

__version__ = "0.1.0"

__all__ = [
    "APFoundError",
    "APWitness",
    "Basis",
    "CoverageSieve",
    "GapProfile",
    "GrowthVerdict",
    "HorizonError",
    "ModularSet",
    "NotIndependentError",
    "NotModularError",
    "SearchResult",
    "SearchTask",
    "Sequence",
    "StanleyError",
    "StructureReport",
    "SumCollisionError",
    "TheoremContradiction",
    "VerificationReport",
    "ZeroNotInSetError",
    "basis_sequence",
    "build_pseudomodular",
    "classify_growth",
    "complete",
    "cover_witness_digits",
    "detect_independent",
    "detect_modular_params",
    "detect_pseudomodular",
    "detect_structure",
    "expand",
    "find_p_ap",
    "gap_family",
    "gap_profile",
    "greedy_stanley",
    "independent_to_modular",
    "is_covered",
    "is_covered_mod",
    "load_table1",
    "omega",
    "p_free_mod",
    "product",
    "scale",
    "scale_basic",
    "scan_generators",
    "search_modular_sets",
    "stanley_zero",
    "theorem_set",
    "validate_basis",
    "verify_modular_set",
]
