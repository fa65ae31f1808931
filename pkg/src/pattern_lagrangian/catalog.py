"""Concrete patterns with known Lagrangians.

* ``lemma44``: {112, 122}, lambda = 1/8, density 3/4.
* ``thm16``: {123, 122, 112, 113, 223}, lambda = 32/243, density 64/81.
* ``family:<n>``: on n + 1 vertices, every 3-subset plus {1,i,i} and {1,1,i}
  for i = 2..n+1.  With k = sqrt(3n - 2) the optimum puts k/(n+k) on vertex 1
  and 1/(n+k) on every other vertex, giving
  lambda = 1/6 - (3n^2 - 2n + k^3) / (6 (n+k)^3).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .frankl_rodl import NonJumpCertificate, certify_nonjump
from .optimizer import OptConfig
from .pattern import Pattern, eval_poly
from .symmetry import equivalence_classes

IRRATIONAL_TOL = 1e-8


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    pattern: Pattern
    pivot: int
    expected_lambda: float
    expected_weights: tuple
    description: str
    exact_lambda: Fraction | None = None
    k_squared: int | None = None

    @property
    def expected_density(self) -> float:
        return 6 * self.expected_lambda

    @property
    def exact_density(self) -> Fraction | None:
        return None if self.exact_lambda is None else 6 * self.exact_lambda

    @property
    def k(self) -> float | None:
        return None if self.k_squared is None else math.sqrt(self.k_squared)


def lemma_small_pattern() -> CatalogEntry:
    return CatalogEntry(
        name="lemma44",
        pattern=Pattern.from_string(2, "112 122"),
        pivot=1,
        expected_lambda=1 / 8,
        exact_lambda=Fraction(1, 8),
        expected_weights=(Fraction(1, 2), Fraction(1, 2)),
        description="two-vertex pattern {112, 122}; density 3/4",
    )


def theorem1_pattern() -> CatalogEntry:
    return CatalogEntry(
        name="thm16",
        pattern=Pattern.from_string(3, "123 122 112 113 223"),
        pivot=1,
        expected_lambda=32 / 243,
        exact_lambda=Fraction(32, 243),
        expected_weights=(Fraction(4, 9), Fraction(4, 9), Fraction(1, 9)),
        description="three-vertex pattern {123, 122, 112, 113, 223}; density 64/81",
    )


def family_edges(n: int, strict_paper_edges: bool = False) -> list[tuple[int, ...]]:
    vertices = range(1, n + 2)
    edges = list(itertools.combinations(vertices, 3))
    edges += [(1, i, i) for i in range(2, n + 2)]
    if not strict_paper_edges:
        edges += [(1, 1, i) for i in range(2, n + 2)]
    return edges


def family_lambda(n: int) -> float:
    if n < 1:
        raise ValueError("family index must be at least 1")
    k = math.sqrt(3 * n - 2)
    return 1 / 6 - (3 * n * n - 2 * n + k**3) / (6 * (n + k) ** 3)


def family_density(n: int) -> float:
    """1 - (3n^2 - 2n + k^3) / (n + k)^3 with k = sqrt(3n - 2)."""
    if n < 1:
        raise ValueError("family index must be at least 1")
    k = math.sqrt(3 * n - 2)
    return 1 - (3 * n * n - 2 * n + k**3) / (n + k) ** 3


def _family_exact(n: int) -> tuple[Fraction | None, tuple | None]:
    s = 3 * n - 2
    k = math.isqrt(s)
    if k * k != s:
        return None, None
    lam = Fraction(1, 6) - Fraction(3 * n * n - 2 * n + k**3, 6 * (n + k) ** 3)
    weights = (Fraction(k, n + k),) + (Fraction(1, n + k),) * n
    return lam, weights


def family_pattern(n: int, strict_paper_edges: bool = False) -> CatalogEntry:
    """The k = sqrt(3n - 2) family on n + 1 vertices, pivot 1.

    ``strict_paper_edges`` drops the {1,1,i} edges; that variant fails
    the structural condition and its expected values are not known.
    """
    if n < 1:
        raise ValueError("family index must be at least 1")
    k = math.sqrt(3 * n - 2)
    exact_lambda, exact_weights = _family_exact(n)
    weights = exact_weights or (k / (n + k),) + (1 / (n + k),) * n
    name = f"family:{n}" + (":strict" if strict_paper_edges else "")
    return CatalogEntry(
        name=name,
        pattern=Pattern.from_edges(n + 1, family_edges(n, strict_paper_edges), r=3),
        pivot=1,
        expected_lambda=family_lambda(n),
        exact_lambda=exact_lambda,
        expected_weights=weights,
        description=f"all triples on {n + 1} vertices plus "
        + ("1ii edges only; expected values belong to the full family" if strict_paper_edges
           else f"1ii and 11i edges; k = sqrt({3 * n - 2})"),
        k_squared=3 * n - 2,
    )


ENTRY_NAMES = ("lemma44", "thm16", "family:<n>")


def get_entry(name: str) -> CatalogEntry:
    if name == "lemma44":
        return lemma_small_pattern()
    if name == "thm16":
        return theorem1_pattern()
    if name.startswith("family:"):
        try:
            n = int(name.split(":", 1)[1])
        except ValueError:
            raise KeyError(name) from None
        return family_pattern(n)
    raise KeyError(name)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{self.name}: {'PASS' if self.passed else 'FAIL'}" + (f" ({self.detail})" if self.detail else "")


@dataclass
class VerifyReport:
    entry: CatalogEntry
    certificate: NonJumpCertificate
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def class_totals(P: Pattern, weights) -> list:
    return [sum(weights[v - 1] for v in c) for c in equivalence_classes(P).classes]


def verify_entry(entry: CatalogEntry, cfg: OptConfig = OptConfig()) -> VerifyReport:
    cert = certify_nonjump(entry.pattern, entry.pivot, cfg)
    rep = VerifyReport(entry, cert)
    lam = cert.lambda_P
    add = rep.checks.append

    value_at_expected = eval_poly(entry.pattern, list(entry.expected_weights))
    if entry.exact_lambda is not None:
        add(Check("expected weights reproduce expected lambda", value_at_expected == entry.exact_lambda,
                  f"{value_at_expected}"))
    else:
        add(Check("expected weights reproduce expected lambda",
                  abs(value_at_expected - entry.expected_lambda) <= 1e-12 * entry.expected_lambda,
                  f"{float(value_at_expected):.17g}"))

    if entry.exact_lambda is not None and cfg.exact_mode:
        got = lam.certified.value if lam.certified is not None else None
        add(Check(f"λ = {entry.exact_lambda} exact", got == entry.exact_lambda, f"certified {got}"))
    else:
        err = abs(lam.value - entry.expected_lambda)
        add(Check(f"λ ≈ {entry.expected_lambda:.12g}", err <= IRRATIONAL_TOL, f"|error| = {err:.3g}"))

    expected_tot = class_totals(entry.pattern, entry.expected_weights)
    got_tot = class_totals(entry.pattern, lam.witness)
    candidates = [lam.witness, *lam.alternatives]
    ok = any(
        all(abs(float(a) - float(b)) <= IRRATIONAL_TOL for a, b in zip(class_totals(entry.pattern, w), expected_tot))
        for w in candidates
    )
    add(Check("witness class totals", ok,
              "expected " + ", ".join(f"{float(t):.9g}" for t in expected_tot)
              + "; got " + ", ".join(f"{float(t):.9g}" for t in got_tot)))
    add(Check("structural condition", cert.structural_condition))
    add(Check("pivot weight positive", cert.pivot_weight_positive))
    add(Check("λ(FR) = λ(P)", cert.equality, f"gap {cert.gap:.3g}"))
    add(Check("density below one", cert.density_below_one and cert.lambda_below_one))
    add(Check("KKT at witness", lam.kkt_residual <= cfg.kkt_tol, f"{lam.kkt_residual:.3g}"))
    return rep
