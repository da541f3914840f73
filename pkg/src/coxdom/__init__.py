"""Roots, dominance and dihedral reflection subgroups of Coxeter groups."""

from .core import INF, CoxeterDatum, bilinear, load_datum, load_datum_file, validate_datum
from .errors import CoxdomError
from .roots import RootStore, enumerate_to_depth
from .dominance import dominance_cover, dominated_set, dominates, enumerate_Dn, is_elementary
from .dihedral import chain_residuals, chain_root, decompose_reflections, dominance_chains, maximal_dihedral, subsystem_height
from .height import enumerate_Tn, infinity_height, standard_height, verify_height_identities
from .cone import imaginary_cone_contains, key_witness, tits_dual_contains, verify_cone_identities

__version__ = "0.1.0"

__all__ = [
    "INF",
    "CoxeterDatum",
    "CoxdomError",
    "RootStore",
    "bilinear",
    "chain_residuals",
    "chain_root",
    "decompose_reflections",
    "dominance_chains",
    "dominance_cover",
    "dominated_set",
    "dominates",
    "enumerate_Dn",
    "enumerate_Tn",
    "enumerate_to_depth",
    "imaginary_cone_contains",
    "infinity_height",
    "is_elementary",
    "key_witness",
    "load_datum",
    "load_datum_file",
    "maximal_dihedral",
    "standard_height",
    "subsystem_height",
    "tits_dual_contains",
    "validate_datum",
    "verify_cone_identities",
    "verify_height_identities",
]
