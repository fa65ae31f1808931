"""JSON payloads for CLI output.

Floats are emitted as strings with 17 significant digits and rationals as
"num/den" strings, so identical runs give byte-identical files.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

from .catalog import CatalogEntry, VerifyReport
from .frankl_rodl import CAVEATS, SCHEMA_VERSION, FRPattern, NonJumpCertificate
from .optimizer import LagrangianRecord
from .pattern import Pattern, edge_string
from .search import SearchResult, SearchRow
from .symmetry import EquivalencePartition


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def fmt_fraction(q: Fraction | int | None) -> str | None:
    if q is None:
        return None
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def dumps(payload: dict) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def pattern_dict(P: Pattern) -> dict:
    return {"r": P.r, "n": P.n, "edges": [list(e) for e in P.edges], "string": edge_string(P)}


def partition_dict(part: EquivalencePartition) -> list[list[int]]:
    return [list(c) for c in part.classes]


def lagrangian_dict(rec: LagrangianRecord) -> dict:
    cert = None
    if rec.certified is not None:
        cert = {
            "weights": [fmt_fraction(w) for w in rec.certified.weights],
            "value": fmt_fraction(rec.certified.value),
            "exact_kkt_verified": rec.certified.exact_kkt_verified,
        }
    return {
        "value": fmt_float(rec.value),
        "witness": [fmt_float(w) for w in rec.witness],
        "support": list(rec.support),
        "kkt_residual": fmt_float(rec.kkt_residual),
        "restarts_agreeing": rec.restarts_agreeing,
        "converged": rec.converged,
        "consistent": rec.consistent,
        "full_value": None if rec.full_value is None else fmt_float(rec.full_value),
        "reduced_value": None if rec.reduced_value is None else fmt_float(rec.reduced_value),
        "certified": cert,
    }


def lagrangian_payload(P: Pattern, rec: LagrangianRecord, part: EquivalencePartition | None = None) -> dict:
    out: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "kind": "lagrangian",
        "pattern": pattern_dict(P),
        "lagrangian": lagrangian_dict(rec),
        "blowup_density": fmt_float(math.factorial(P.r) * rec.value),
        "exact_blowup_density": fmt_fraction(math.factorial(P.r) * rec.certified.value) if rec.certified else None,
    }
    if part is not None:
        out["equivalence_classes"] = partition_dict(part)
    return out


def fr_dict(fr: FRPattern) -> dict:
    return {
        "pattern": pattern_dict(fr.pattern),
        "pivot": fr.pivot,
        "copy_labels": list(fr.copy_map),
        "label_map": [list(p) for p in fr.label_map],
    }


def certificate_payload(cert: NonJumpCertificate) -> dict:
    density = fmt_fraction(cert.exact_claimed_density) if cert.status == "exact-certified" else fmt_float(cert.claimed_density)
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "nonjump_certificate",
        "source": pattern_dict(cert.source),
        "pivot": cert.pivot,
        "fr": fr_dict(cert.fr),
        "lambda_P": lagrangian_dict(cert.lambda_P),
        "lambda_FR": lagrangian_dict(cert.lambda_FR),
        "pivot_weight_positive": cert.pivot_weight_positive,
        "lambda_below_one": cert.lambda_below_one,
        "density_below_one": cert.density_below_one,
        "equality": cert.equality,
        "gap": fmt_float(cert.gap),
        "structural_condition": cert.structural_condition,
        "structural_witness": cert.structural_witness,
        "claimed_density": density,
        "claimed_density_float": fmt_float(cert.claimed_density),
        "claimed_density_exact": fmt_fraction(cert.exact_claimed_density),
        "status": cert.status,
        "passed": cert.passed,
        "failed_conditions": cert.failed_conditions(),
        "caveats": list(CAVEATS),
    }


def entry_dict(entry: CatalogEntry) -> dict:
    return {
        "name": entry.name,
        "description": entry.description,
        "pattern": pattern_dict(entry.pattern),
        "pivot": entry.pivot,
        "expected_lambda": fmt_float(entry.expected_lambda),
        "expected_lambda_exact": fmt_fraction(entry.exact_lambda),
        "expected_density": fmt_float(entry.expected_density),
        "expected_density_exact": fmt_fraction(entry.exact_density),
        "expected_weights": [fmt_fraction(w) if isinstance(w, Fraction) else fmt_float(w) for w in entry.expected_weights],
        "k_squared": entry.k_squared,
    }


def catalog_payload(entries: list[CatalogEntry], reports: list[VerifyReport] | None = None) -> dict:
    items = []
    for i, entry in enumerate(entries):
        item = entry_dict(entry)
        if reports is not None:
            rep = reports[i]
            item["verify"] = {
                "passed": rep.passed,
                "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in rep.checks],
                "certificate": certificate_payload(rep.certificate),
            }
        items.append(item)
    return {"schema_version": SCHEMA_VERSION, "kind": "catalog", "entries": items}


def search_row_dict(row: SearchRow) -> dict:
    return {
        "pattern": pattern_dict(row.pattern),
        "density": fmt_float(row.density),
        "density_exact": fmt_fraction(row.exact_density),
        "lambda": fmt_float(row.lam),
        "status": row.status,
        "gap": fmt_float(row.gap),
        "patterns_with_density": row.patterns_with_density,
        "flagged": row.flagged,
        "note": row.note,
    }


def search_payload(n: int, max_extra: int | None, result: SearchResult) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "search",
        "vertices": n,
        "max_extra_edges": max_extra,
        "candidates": result.candidates,
        "kept": result.kept,
        "rows": [search_row_dict(r) for r in result.rows],
        "flagged": [search_row_dict(r) for r in result.flagged],
    }


def blowup_payload(P: Pattern, t: list[int], simple: bool, count: int, result=None) -> dict:
    out: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "kind": "blowup",
        "source": pattern_dict(P),
        "t": list(t),
        "simple": simple,
        "edge_count": count,
    }
    if result is not None:
        out["pattern"] = pattern_dict(result.pattern)
        out["label_map"] = [list(p) for p in result.label_map]
    return out
