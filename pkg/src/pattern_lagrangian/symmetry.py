"""Equivalent vertices and the class-aggregated objective.

Two vertices are equivalent when swapping their labels maps the edge set to
itself.  Transposition-equivalence is closed under composition, so each class
carries the full symmetric group as automorphisms.  An optimal weighting can
therefore be taken to put equal weight on every positively weighted member
of a class; only the number of active members per class matters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .pattern import Pattern
from .polynomial import HomogeneousPolynomial


@dataclass(frozen=True)
class EquivalencePartition:
    classes: tuple[tuple[int, ...], ...]

    @property
    def is_trivial(self) -> bool:
        return all(len(c) == 1 for c in self.classes)

    def class_of(self, v: int) -> int:
        for j, c in enumerate(self.classes):
            if v in c:
                return j
        raise KeyError(v)

    def __str__(self) -> str:
        return " ".join("{" + ",".join(map(str, c)) + "}" for c in self.classes)


def swaps_to_self(P: Pattern, i: int, j: int) -> bool:
    perm = list(range(1, P.n + 1))
    perm[i - 1], perm[j - 1] = j, i
    return P.relabel(perm).edges == P.edges


def equivalence_classes(P: Pattern) -> EquivalencePartition:
    parent = list(range(P.n + 1))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, j in itertools.combinations(range(1, P.n + 1), 2):
        if find(i) != find(j) and swaps_to_self(P, i, j):
            parent[max(find(i), find(j))] = min(find(i), find(j))
    groups: dict[int, list[int]] = {}
    for v in range(1, P.n + 1):
        groups.setdefault(find(v), []).append(v)
    return EquivalencePartition(tuple(tuple(g) for g in sorted(groups.values())))


def validate_partition(P: Pattern, part: EquivalencePartition) -> None:
    members = sorted(v for c in part.classes for v in c)
    if members != list(range(1, P.n + 1)) or any(not c for c in part.classes):
        raise ValueError("classes must be nonempty and partition the vertex set")
    for c in part.classes:
        for i, j in itertools.combinations(c, 2):
            if not swaps_to_self(P, i, j):
                raise ValueError(f"vertices {i} and {j} are not equivalent")


@dataclass(frozen=True)
class ReducedObjective:
    """Objective over class totals y; class j spreads y_j evenly over its first active[j] members."""

    base: Pattern
    partition: EquivalencePartition
    active: tuple[int, ...]
    polynomial: HomogeneousPolynomial

    def __call__(self, y: Sequence):
        return self.polynomial.value(y)

    def lift(self, y: Sequence) -> list:
        x = [0] * self.base.n
        for yj, members, m in zip(y, self.partition.classes, self.active):
            share = yj / m
            for v in members[:m]:
                x[v - 1] = share
        return x


def reduce(P: Pattern, part: EquivalencePartition, active: Sequence[int] | None = None) -> ReducedObjective:
    validate_partition(P, part)
    if active is None:
        active = tuple(len(c) for c in part.classes)
    active = tuple(active)
    if len(active) != len(part.classes) or not all(1 <= m <= len(c) for m, c in zip(active, part.classes)):
        raise ValueError(f"active counts {active} do not fit classes {part}")
    groups = [[v - 1 for v in c[:m]] for c, m in zip(part.classes, active)]
    scale = [Fraction(0)] * P.n
    for c, m in zip(part.classes, active):
        for v in c[:m]:
            scale[v - 1] = Fraction(1, m)
    poly = P.polynomial.substitute(groups, scale)
    return ReducedObjective(P, part, active, poly)


def active_count_vectors(part: EquivalencePartition, limit: int = 512) -> Iterator[tuple[int, ...]]:
    """Active-member counts to explore, full classes first.

    A class with no active member corresponds to y_j = 0, a face of the
    reduced simplex, so counts start at 1.  Past ``limit`` vectors only the
    full-count vector is produced.
    """
    sizes = [len(c) for c in part.classes]
    full = tuple(sizes)
    yield full
    total = 1
    for s in sizes:
        total *= s
    if total > limit:
        return
    for counts in itertools.product(*(range(s, 0, -1) for s in sizes)):
        if counts != full:
            yield counts
