"""Lagrangians of 3-uniform patterns, Frankl-Rodl constructions and non-jump certificates."""

from .catalog import CatalogEntry, family_pattern, get_entry, lemma_small_pattern, theorem1_pattern, verify_entry
from .frankl_rodl import FRPattern, NonJumpCertificate, certify_nonjump, fr_construct, theorem_main_check
from .optimizer import (
    BlowupDensityRecord,
    Certification,
    LagrangianRecord,
    OptConfig,
    blowup_density,
    kkt_residual,
    lagrangian,
    rational_certify,
)
from .pattern import (
    Pattern,
    PatternError,
    PatternSyntaxError,
    blowup,
    canonical_form,
    density,
    eval_poly,
    grad_poly,
    parse_pattern,
    serialize_pattern,
    simple_blowup,
    simple_blowup_edge_count,
)
from .search import SearchResult, SearchRow, SearchSpec, run_search
from .symmetry import EquivalencePartition, equivalence_classes, reduce

__all__ = [
    "BlowupDensityRecord", "CatalogEntry", "Certification", "EquivalencePartition", "FRPattern",
    "LagrangianRecord", "NonJumpCertificate", "OptConfig", "Pattern", "PatternError", "PatternSyntaxError",
    "SearchResult", "SearchRow", "SearchSpec", "blowup", "blowup_density", "canonical_form", "certify_nonjump",
    "density", "equivalence_classes", "eval_poly", "family_pattern", "fr_construct", "get_entry", "grad_poly",
    "kkt_residual", "lagrangian", "lemma_small_pattern", "parse_pattern", "rational_certify", "reduce",
    "run_search", "serialize_pattern", "simple_blowup", "simple_blowup_edge_count", "theorem1_pattern",
    "theorem_main_check", "verify_entry",
]
