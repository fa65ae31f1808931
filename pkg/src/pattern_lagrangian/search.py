"""Exhaustive search over small 3-patterns containing the structural core.

The core on n vertices with pivot 1 is {122} plus {11i : i = 2..n}.  Every
extension of the core by other 3-multisets is generated, deduplicated up to
relabelling of vertices 2..n, and certified.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .frankl_rodl import EQUALITY_TOL, NonJumpCertificate, certify_nonjump, theorem_main_check
from .optimizer import OptConfig
from .pattern import Pattern, all_multisets, canonical_form

log = logging.getLogger(__name__)

DENSITY_DEDUP_TOL = 1e-9


@dataclass(frozen=True)
class SearchSpec:
    n: int
    required_pivot: int = 1
    max_extra_edges: int | None = None
    lambda_window: tuple[float, float] | None = None
    cfg: OptConfig = field(default_factory=lambda: OptConfig(exact_mode=True))

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("search needs at least 2 vertices")
        if self.required_pivot != 1:
            raise ValueError("enumeration fixes the pivot at vertex 1")
        if self.max_extra_edges is not None and self.max_extra_edges < 0:
            raise ValueError("max_extra_edges must be nonnegative")


@dataclass(frozen=True)
class SearchRow:
    pattern: Pattern
    density: float
    exact_density: Fraction | None
    status: str
    gap: float
    lam: float
    patterns_with_density: int = 1
    note: str = ""

    @property
    def flagged(self) -> bool:
        return self.gap > EQUALITY_TOL


@dataclass
class SearchResult:
    rows: list[SearchRow]
    candidates: int
    kept: int
    flagged: list[SearchRow] = field(default_factory=list)

    def densities(self) -> list[float]:
        return [r.density for r in self.rows]


def core_edges(n: int) -> list[tuple[int, ...]]:
    return [(1, 2, 2)] + [(1, 1, i) for i in range(2, n + 1)]


def enumerate_candidates(spec: SearchSpec) -> Iterator[Pattern]:
    core = core_edges(spec.n)
    rest = [e for e in all_multisets(spec.n) if e not in core]
    cap = len(rest) if spec.max_extra_edges is None else min(spec.max_extra_edges, len(rest))
    seen = set()
    for k in range(cap + 1):
        for extra in itertools.combinations(rest, k):
            P = Pattern(spec.n, tuple(core) + extra)
            canon = canonical_form(P, fixed=(1,))
            if canon.edges in seen:
                continue
            seen.add(canon.edges)
            yield canon


def _evaluate(args) -> NonJumpCertificate:
    P, cfg = args
    return certify_nonjump(P, 1, cfg)


def _row(cert: NonJumpCertificate) -> SearchRow:
    note = "" if cert.lambda_P.consistent and cert.lambda_FR.consistent else "full/reduced optimum mismatch"
    if not (cert.lambda_P.converged and cert.lambda_FR.converged):
        note = (note + "; " if note else "") + "not converged"
    return SearchRow(
        pattern=cert.source,
        density=cert.claimed_density,
        exact_density=cert.exact_claimed_density,
        status=cert.status,
        gap=cert.gap,
        lam=cert.lambda_P.value,
        note=note,
    )


def run_search(spec: SearchSpec, jobs: int = 1) -> SearchResult:
    candidates = list(enumerate_candidates(spec))
    work = [(P, spec.cfg) for P in candidates]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            certs = list(pool.map(_evaluate, work, chunksize=4))
    else:
        certs = [_evaluate(w) for w in work]

    kept = []
    for cert in certs:
        if not (cert.structural_condition and cert.pivot_weight_positive
                and cert.lambda_below_one and cert.density_below_one):
            continue
        row = _row(cert)
        if spec.lambda_window is not None:
            lo, hi = spec.lambda_window
            if not lo <= row.density <= hi:
                continue
        kept.append(row)
    log.info("search n=%d: %d candidates, %d kept", spec.n, len(candidates), len(kept))

    kept.sort(key=lambda r: (r.density, len(r.pattern.edges), r.pattern.edges))
    rows: list[SearchRow] = []
    for row in kept:
        if rows and _same_density(rows[-1], row):
            last = rows[-1]
            rows[-1] = SearchRow(last.pattern, last.density, last.exact_density or row.exact_density,
                                 last.status if last.status == "exact-certified" else row.status,
                                 max(last.gap, row.gap), last.lam, last.patterns_with_density + 1,
                                 "; ".join(x for x in (last.note, row.note) if x))
        else:
            rows.append(row)
    return SearchResult(rows=rows, candidates=len(candidates), kept=len(kept),
                        flagged=[r for r in kept if r.flagged])


def _same_density(a: SearchRow, b: SearchRow) -> bool:
    if a.exact_density is not None and b.exact_density is not None:
        return a.exact_density == b.exact_density
    return abs(a.density - b.density) <= DENSITY_DEDUP_TOL
