"""r-patterns: hypergraphs whose edges are r-multisets of vertices.

Vertices are labelled 1..n.  An edge is stored as a nondecreasing tuple, so
``(1, 1, 2)`` is the multiset {1, 1, 2}.  A pattern with no repeated vertex
inside any edge is an ordinary r-graph.
"""

from __future__ import annotations

import itertools
import math
import re
import warnings
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .polynomial import HomogeneousPolynomial

Edge = tuple[int, ...]


class PatternError(ValueError):
    """Invalid pattern data."""


class PatternSyntaxError(PatternError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Pattern:
    n: int
    edges: tuple[Edge, ...]
    r: int = 3

    def __post_init__(self):
        if self.r < 1:
            raise PatternError(f"uniformity must be positive, got {self.r}")
        if self.n < 1:
            raise PatternError(f"vertex count must be at least 1, got {self.n}")
        normalized = set()
        for e in self.edges:
            e = tuple(sorted(int(v) for v in e))
            if len(e) != self.r:
                raise PatternError(f"edge {e} has {len(e)} entries, expected {self.r}")
            if e[0] < 1 or e[-1] > self.n:
                bad = e[0] if e[0] < 1 else e[-1]
                raise PatternError(f"vertex {bad} out of range 1..{self.n}")
            normalized.add(e)
        object.__setattr__(self, "edges", tuple(sorted(normalized)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], r: int | None = None) -> "Pattern":
        edges = [tuple(e) for e in edges]
        if r is None:
            r = len(edges[0]) if edges else 3
        return cls(n=n, edges=tuple(edges), r=r)

    @classmethod
    def from_string(cls, n: int, spec: str) -> "Pattern":
        """Build from compact digit words, e.g. ``Pattern.from_string(3, "112 123")``.

        Only usable when n <= 9.
        """
        edges = [tuple(int(c) for c in word) for word in spec.split()]
        return cls.from_edges(n, edges, r=len(edges[0]) if edges else 3)

    def __str__(self) -> str:
        return edge_string(self)

    @property
    def is_simple(self) -> bool:
        """True when no edge repeats a vertex (the pattern is an r-graph)."""
        return all(len(set(e)) == len(e) for e in self.edges)

    def multiplicity(self, edge: Edge, vertex: int) -> int:
        return edge.count(vertex)

    @cached_property
    def polynomial(self) -> HomogeneousPolynomial:
        """p_P(x) = sum over edges of prod_i x_i^m / m!, in 0-indexed variables."""
        terms = []
        for e in self.edges:
            coef = Fraction(1, math.prod(math.factorial(m) for m in Counter(e).values()))
            terms.append((coef, [v - 1 for v in e]))
        return HomogeneousPolynomial(self.n, self.r, terms)

    def relabel(self, perm: Sequence[int]) -> "Pattern":
        """Apply the vertex map ``v -> perm[v - 1]`` (perm is a permutation of 1..n)."""
        return Pattern(self.n, tuple(tuple(perm[v - 1] for v in e) for e in self.edges), self.r)

    def with_edges(self, extra: Iterable[Sequence[int]]) -> "Pattern":
        return Pattern(self.n, self.edges + tuple(tuple(e) for e in extra), self.r)


def edge_string(P: Pattern) -> str:
    if P.n <= 9:
        return " ".join("".join(str(v) for v in e) for e in P.edges)
    return " ".join("(" + ",".join(str(v) for v in e) + ")" for e in P.edges)


def parse_pattern(text: str) -> Pattern:
    """Parse the line-oriented pattern format.

    Directives are ``r <int>``, ``n <int>`` and ``edge v1 ... vr``; ``#`` starts
    a comment.  ``r`` defaults to 3.  Duplicate edges are dropped with a
    warning.
    """
    r = None
    n = None
    edges: list[tuple[Edge, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = [(m.start() + 1, m.group()) for m in _tokens(line)]
        if not tokens:
            continue
        col, word = tokens[0]
        args = tokens[1:]
        if word in ("r", "n"):
            if len(args) != 1:
                raise PatternSyntaxError(f"'{word}' takes exactly one integer", lineno, col)
            acol, aval = args[0]
            value = _to_int(aval, lineno, acol)
            if word == "r":
                r = value
            else:
                n = value
        elif word == "edge":
            if not args:
                raise PatternSyntaxError("edge with no vertices", lineno, col)
            edges.append((tuple(_to_int(a, lineno, c) for c, a in args), lineno))
        else:
            raise PatternSyntaxError(f"unknown directive '{word}'", lineno, col)

    if n is None:
        raise PatternSyntaxError("missing 'n' directive", max(1, len(text.splitlines())), 1)
    if r is None:
        r = 3
    seen = set()
    unique = []
    for e, lineno in edges:
        if len(e) != r:
            raise PatternError(f"line {lineno}: edge {' '.join(map(str, e))} has {len(e)} entries, expected {r}")
        for v in e:
            if not 1 <= v <= n:
                raise PatternError(f"line {lineno}: vertex {v} out of range 1..{n}")
        key = tuple(sorted(e))
        if key in seen:
            warnings.warn(f"line {lineno}: duplicate edge {' '.join(map(str, key))} ignored", stacklevel=2)
            continue
        seen.add(key)
        unique.append(key)
    return Pattern(n, tuple(unique), r)


def _tokens(line: str):
    return re.finditer(r"\S+", line)


def _to_int(token: str, line: int, column: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise PatternSyntaxError(f"expected an integer, got '{token}'", line, column) from None


def serialize_pattern(P: Pattern, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines += [f"r {P.r}", f"n {P.n}"]
    lines += ["edge " + " ".join(str(v) for v in e) for e in P.edges]
    return "\n".join(lines) + "\n"


def canonical_form(P: Pattern, fixed: Sequence[int] = ()) -> Pattern:
    """Relabelling of P with the lexicographically smallest sorted edge list.

    Vertices in ``fixed`` keep their labels.  For n <= 7 every admissible
    permutation is tried; beyond that, candidates are restricted to those
    that order vertices by an isomorphism-invariant colouring, which is still
    constant on isomorphism classes.
    """
    fixed = tuple(fixed)
    free = [v for v in range(1, P.n + 1) if v not in fixed]
    best = None
    for perm in _candidate_perms(P, fixed, free):
        edges = sorted(tuple(sorted(perm[v - 1] for v in e)) for e in P.edges)
        if best is None or edges < best:
            best = edges
    return Pattern(P.n, tuple(best), P.r)


def _candidate_perms(P: Pattern, fixed: tuple[int, ...], free: list[int]):
    if len(free) <= 7:
        for images in itertools.permutations(free):
            perm = list(range(1, P.n + 1))
            for v, image in zip(free, images):
                perm[v - 1] = image
            yield perm
        return
    colour = _refined_colours(P, fixed)
    classes = sorted({colour[v] for v in free})
    blocks = [[v for v in free if colour[v] == c] for c in classes]
    slots = sorted(free)
    offsets = []
    start = 0
    for block in blocks:
        offsets.append(slots[start:start + len(block)])
        start += len(block)
    for choice in itertools.product(*(itertools.permutations(b) for b in blocks)):
        perm = list(range(1, P.n + 1))
        for block_order, targets in zip(choice, offsets):
            for v, image in zip(block_order, targets):
                perm[v - 1] = image
        yield perm


def _refined_colours(P: Pattern, fixed: tuple[int, ...]) -> dict[int, tuple]:
    # colour refinement on the vertex/edge incidence structure; colours are
    # compared by value only, so the ordering is label independent
    colour = {v: (0, -fixed.index(v)) if v in fixed else (1,) for v in range(1, P.n + 1)}
    for _ in range(P.n):
        sig = {}
        for v in range(1, P.n + 1):
            around = []
            for e in P.edges:
                if v in e:
                    around.append((e.count(v), tuple(sorted(colour[u] for u in e))))
            # negate so that busier vertices receive smaller labels
            sig[v] = (colour[v], -len(around), tuple(sorted(around)))
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {v: (ranks[sig[v]],) for v in sig}
        if len(set(new.values())) == len(set(colour.values())):
            colour = new
            break
        colour = new
    return colour


def all_multisets(n: int, r: int = 3) -> list[Edge]:
    return list(itertools.combinations_with_replacement(range(1, n + 1), r))


@dataclass(frozen=True)
class BlowupResult:
    pattern: Pattern
    label_map: tuple[tuple[int, int], ...]  # new label - 1 -> (original vertex, copy index)

    def label_of(self, vertex: int, copy: int) -> int:
        return self.label_map.index((vertex, copy)) + 1


def _copy_labels(t: Sequence[int]) -> tuple[list[list[int]], tuple[tuple[int, int], ...]]:
    labels = []
    label_map = []
    for i, ti in enumerate(t, start=1):
        if ti < 0:
            raise PatternError(f"negative blowup entry t_{i} = {ti}")
        labels.append([len(label_map) + c + 1 for c in range(ti)])
        label_map.extend((i, c + 1) for c in range(ti))
    return labels, tuple(label_map)


def _blow(P: Pattern, t: Sequence[int], simple: bool) -> BlowupResult:
    if len(t) != P.n:
        raise PatternError(f"blowup vector has length {len(t)}, pattern has {P.n} vertices")
    labels, label_map = _copy_labels(t)
    if not label_map:
        raise PatternError("blowup vector deletes every vertex")
    pick = itertools.combinations if simple else itertools.combinations_with_replacement
    edges = []
    for e in P.edges:
        per_vertex = [pick(labels[v - 1], m) for v, m in sorted(Counter(e).items())]
        for choice in itertools.product(*per_vertex):
            edges.append(tuple(itertools.chain.from_iterable(choice)))
    return BlowupResult(Pattern(len(label_map), tuple(edges), P.r), label_map)


def blowup(P: Pattern, t: Sequence[int]) -> BlowupResult:
    """P(t): vertex i becomes t_i copies; a multiset of copies is an edge iff its projection is."""
    return _blow(P, t, simple=False)


def simple_blowup(P: Pattern, t: Sequence[int]) -> BlowupResult:
    """P[t]: the blowup restricted to edges with r distinct vertices."""
    return _blow(P, t, simple=True)


def simple_blowup_edge_count(P: Pattern, t: Sequence[int]) -> int:
    if len(t) != P.n:
        raise PatternError(f"blowup vector has length {len(t)}, pattern has {P.n} vertices")
    return sum(math.prod(math.comb(t[v - 1], m) for v, m in Counter(e).items()) for e in P.edges)


def eval_poly(P: Pattern, x: Sequence):
    """p_P(x); exact when x holds Fractions."""
    return P.polynomial.value(x)


def grad_poly(P: Pattern, x: Sequence) -> list:
    return P.polynomial.gradient(x)


def density(P: Pattern) -> float:
    """Edge density e / C(n, r) of an r-graph."""
    if not P.is_simple:
        raise PatternError("density is only defined for patterns without repeated vertices in an edge")
    total = math.comb(P.n, P.r)
    if total == 0:
        raise PatternError(f"no {P.r}-sets on {P.n} vertices")
    return len(P.edges) / total
