"""Orthoscalar representations of posets: exact stability, numerical unitarization."""

from .catalog import (
    CRITICAL_NAMES,
    FamilyInstance,
    deleted_rep,
    extend_to_superposet,
    family_rep,
    remark5_weight,
)
from .exact import GaussQ, Subspace, parse_scalar
from .poset import Poset, critical_poset, finiteness_type, parse_poset
from .representation import SubspaceRep, are_equivalent, end_dim, hom_space, is_indecomposable, validate_rep
from .stability import StabilityReport, compute_R, extend_weight, find_stabilizing_weight, is_stable
from .unitary import UnitaryRep, extract_unitary, lemma1_verify, orthoscalar_residual, unitarize

__all__ = [
    "CRITICAL_NAMES",
    "FamilyInstance",
    "GaussQ",
    "Poset",
    "StabilityReport",
    "Subspace",
    "SubspaceRep",
    "UnitaryRep",
    "are_equivalent",
    "compute_R",
    "critical_poset",
    "deleted_rep",
    "end_dim",
    "extend_to_superposet",
    "extend_weight",
    "extract_unitary",
    "family_rep",
    "find_stabilizing_weight",
    "finiteness_type",
    "hom_space",
    "is_indecomposable",
    "is_stable",
    "lemma1_verify",
    "orthoscalar_residual",
    "parse_poset",
    "parse_scalar",
    "remark5_weight",
    "unitarize",
    "validate_rep",
]
