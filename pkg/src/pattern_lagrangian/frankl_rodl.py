"""The Frankl-Rodl construction FR_v(P) and non-jump certificates.

FR_v(P) blows the pivot v up into r copies, keeps only the edges in which
copies 2..r each appear at most once, and adds the edge made of all r
copies.  A pattern P with pivot v yields the non-jump density r! * lambda(P)
when some optimal weighting of P gives v positive weight and
lambda(FR_v(P)) = lambda(P) < 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .optimizer import LagrangianRecord, OptConfig, lagrangian
from .pattern import Pattern, PatternError, blowup

SCHEMA_VERSION = "1.0"
EQUALITY_TOL = 1e-8
BELOW_ONE_TOL = 1e-12

CAVEATS = (
    "Non-jump status follows from the sufficient condition only if the reported Lagrangians are global maxima.",
    "exact-certified means the optimal weightings were verified as exact rational critical points with equal values; "
    "global maximality rests on restart agreement, not on a proof.",
    "No forbidden family witnessing the non-jump is constructed.",
)


@dataclass(frozen=True)
class FRPattern:
    pattern: Pattern
    source: Pattern
    pivot: int
    copy_map: tuple[int, ...]  # labels of (v,1), ..., (v,r) in the new pattern
    label_map: tuple[tuple[int, int], ...]


def fr_construct(P: Pattern, v: int) -> FRPattern:
    if not 1 <= v <= P.n:
        raise PatternError(f"pivot {v} is not a vertex of a pattern on {P.n} vertices")
    t = [1] * P.n
    t[v - 1] = P.r
    blown = blowup(P, t)
    copies = tuple(blown.label_of(v, c) for c in range(1, P.r + 1))
    extra = set(copies[1:])
    kept = [e for e in blown.pattern.edges if all(e.count(c) <= 1 for c in extra)]
    kept.append(copies)
    pattern = Pattern(blown.pattern.n, tuple(kept), P.r)
    return FRPattern(pattern, P, v, copies, blown.label_map)


def theorem_main_check(P: Pattern, v: int) -> tuple[bool, int | None]:
    """Structural test: some {v,u,u} is an edge and {v,v,i} is an edge for every i != v.

    Returns the smallest witnessing u.  Only defined for 3-patterns.
    """
    if P.r != 3 or not 1 <= v <= P.n:
        return False, None
    edges = set(P.edges)
    others = [i for i in range(1, P.n + 1) if i != v]
    if not others:
        return False, None
    if not all(tuple(sorted((v, v, i))) in edges for i in others):
        return False, None
    for u in others:
        if tuple(sorted((v, u, u))) in edges:
            return True, u
    return False, None


@dataclass(frozen=True)
class NonJumpCertificate:
    source: Pattern
    pivot: int
    fr: FRPattern
    lambda_P: LagrangianRecord
    lambda_FR: LagrangianRecord
    pivot_weight_positive: bool
    lambda_below_one: bool
    density_below_one: bool
    equality: bool
    gap: float
    structural_condition: bool
    structural_witness: int | None
    claimed_density: float
    exact_claimed_density: Fraction | None
    status: str

    @property
    def passed(self) -> bool:
        return all((self.pivot_weight_positive, self.lambda_below_one, self.density_below_one,
                    self.equality, self.structural_condition))

    def failed_conditions(self) -> list[str]:
        names = ("pivot_weight_positive", "lambda_below_one", "density_below_one", "equality", "structural_condition")
        return [name for name in names if not getattr(self, name)]


def _pivot_positive(rec: LagrangianRecord, v: int, threshold: float) -> bool:
    return any(w[v - 1] > threshold for w in rec.optimal_weightings())


def certify_nonjump(P: Pattern, v: int, cfg: OptConfig = OptConfig()) -> NonJumpCertificate:
    """Evaluate every hypothesis of the sufficient condition for (P, v).

    The certificate is a report: failed conditions are flagged, not raised.
    """
    fr = fr_construct(P, v)
    lam_p = lagrangian(P, cfg)
    lam_fr = lagrangian(fr.pattern, cfg)
    scale = math.factorial(P.r)

    exact = lam_p.certified is not None and lam_fr.certified is not None
    if exact:
        gap = float(abs(lam_fr.certified.value - lam_p.certified.value))
        equal = lam_fr.certified.value == lam_p.certified.value
        exact_pivot = lam_p.certified.weights[v - 1] > 0
        below_one = lam_p.certified.value < 1
        exact_density = scale * lam_p.certified.value
        density_below = exact_density < 1
    else:
        gap = abs(lam_fr.value - lam_p.value)
        equal = False
        exact_pivot = False
        below_one = lam_p.value < 1 - BELOW_ONE_TOL
        exact_density = None
        density_below = scale * lam_p.value < 1 - BELOW_ONE_TOL
    pivot_positive = _pivot_positive(lam_p, v, cfg.support_threshold)
    structural, witness = theorem_main_check(P, v)
    status = "exact-certified" if exact and equal and exact_pivot else "numeric-evidence"
    return NonJumpCertificate(
        source=P,
        pivot=v,
        fr=fr,
        lambda_P=lam_p,
        lambda_FR=lam_fr,
        pivot_weight_positive=pivot_positive,
        lambda_below_one=below_one,
        density_below_one=density_below,
        equality=gap <= EQUALITY_TOL,
        gap=gap,
        structural_condition=structural,
        structural_witness=witness,
        claimed_density=scale * lam_p.value,
        exact_claimed_density=exact_density,
        status=status,
    )
