"""Homogeneous polynomials with nonnegative coefficients, stored as slot lists.

A monomial of degree d is kept as a sorted tuple of d variable indices
(repeats allowed) plus a rational coefficient, so ``x0**2 * x2 / 2`` is
``(Fraction(1, 2), (0, 0, 2))``.  The slot form makes the gradient a sum over
slots: the partial in slot s is the product of the other d - 1 slots.

Scalar methods accept any numeric sequence and are exact when fed
``Fraction``; the ``batch_*`` methods are numpy float paths used by the
optimizer.
"""

from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class HomogeneousPolynomial:
    def __init__(self, dim: int, degree: int, terms: Iterable[tuple[Fraction, Sequence[int]]]):
        if dim < 1:
            raise ValueError("polynomial needs at least one variable")
        merged: dict[tuple[int, ...], Fraction] = defaultdict(Fraction)
        for coef, slots in terms:
            slots = tuple(sorted(slots))
            if len(slots) != degree:
                raise ValueError(f"monomial {slots} is not of degree {degree}")
            if slots and not (0 <= slots[0] and slots[-1] < dim):
                raise ValueError(f"monomial {slots} uses a variable outside 0..{dim - 1}")
            merged[slots] += Fraction(coef)
        self.dim = dim
        self.degree = degree
        self.terms: tuple[tuple[Fraction, tuple[int, ...]], ...] = tuple(
            (c, s) for s, c in sorted(merged.items()) if c != 0
        )

    def __repr__(self) -> str:
        return f"HomogeneousPolynomial(dim={self.dim}, degree={self.degree}, terms={len(self.terms)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        return (self.dim, self.degree, self.terms) == (other.dim, other.degree, other.terms)

    def __hash__(self) -> int:
        return hash((self.dim, self.degree, self.terms))

    def _check(self, x: Sequence) -> None:
        if len(x) != self.dim:
            raise ValueError(f"point has length {len(x)}, expected {self.dim}")

    # scalar (exact-capable) paths

    def value(self, x: Sequence):
        self._check(x)
        total = 0
        for coef, slots in self.terms:
            total += coef * math.prod(x[i] for i in slots)
        return total

    def gradient(self, x: Sequence) -> list:
        self._check(x)
        grad = [0] * self.dim
        for coef, slots in self.terms:
            for s, i in enumerate(slots):
                grad[i] += coef * math.prod(x[j] for k, j in enumerate(slots) if k != s)
        return grad

    def hessian(self, x: Sequence[float]) -> np.ndarray:
        """Float Hessian at a single point."""
        self._check(x)
        x = np.asarray(x, dtype=float)
        coef, slots, _ = self._arrays
        H = np.zeros(self.dim * self.dim)
        if coef.size == 0:
            return H.reshape(self.dim, self.dim)
        d = self.degree
        for s in range(d):
            for u in range(d):
                if u == s:
                    continue
                w = coef.copy()
                for k in range(d):
                    if k != s and k != u:
                        w = w * x[slots[:, k]]
                np.add.at(H, slots[:, s] * self.dim + slots[:, u], w)
        return H.reshape(self.dim, self.dim)

    def float_value(self, x: Sequence[float]) -> float:
        return float(self.batch_value(np.asarray(x, dtype=float)[None, :])[0])

    def float_gradient(self, x: Sequence[float]) -> np.ndarray:
        return self.batch_value_and_gradient(np.asarray(x, dtype=float)[None, :])[1][0]

    # numpy batch paths

    @cached_property
    def _arrays(self):
        if not self.terms:
            return np.zeros(0), np.zeros((0, self.degree), dtype=np.intp), []
        coef = np.array([float(c) for c, _ in self.terms])
        slots = np.array([s for _, s in self.terms], dtype=np.intp).reshape(len(self.terms), self.degree)
        scatter = []
        for s in range(self.degree):
            onehot = np.zeros((len(self.terms), self.dim))
            onehot[np.arange(len(self.terms)), slots[:, s]] = 1.0
            scatter.append(onehot)
        return coef, slots, scatter

    def batch_value(self, X: np.ndarray) -> np.ndarray:
        coef, slots, _ = self._arrays
        if coef.size == 0:
            return np.zeros(X.shape[0])
        mono = np.ones((X.shape[0], coef.size))
        for s in range(self.degree):
            mono *= X[:, slots[:, s]]
        return mono @ coef

    def batch_value_and_gradient(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        coef, slots, scatter = self._arrays
        if coef.size == 0:
            return np.zeros(X.shape[0]), np.zeros_like(X)
        factors = [X[:, slots[:, s]] for s in range(self.degree)]
        grad = np.zeros_like(X)
        for s in range(self.degree):
            others = np.ones((X.shape[0], coef.size))
            for u in range(self.degree):
                if u != s:
                    others *= factors[u]
            grad += (others * coef) @ scatter[s]
        mono = factors[0] * coef
        for s in range(1, self.degree):
            mono = mono * factors[s]
        return mono.sum(axis=1), grad

    def substitute(self, groups: Sequence[Sequence[int]], scale: Sequence[Fraction]) -> "HomogeneousPolynomial":
        """Return q(y) = p(x) where x_i = y_j * scale[i] for every i in groups[j].

        Variables not listed in any group are fixed at zero.
        """
        owner = {}
        for j, members in enumerate(groups):
            for i in members:
                owner[i] = j
        terms = []
        for coef, slots in self.terms:
            if any(i not in owner for i in slots):
                continue
            c = coef * math.prod(Fraction(scale[i]) for i in slots)
            terms.append((c, [owner[i] for i in slots]))
        return HomogeneousPolynomial(len(groups), self.degree, terms)
