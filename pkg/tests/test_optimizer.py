import math
from fractions import Fraction as F

import numpy as np
import pytest

from pattern_lagrangian.catalog import family_pattern
from pattern_lagrangian.optimizer import (
    OptConfig,
    blowup_density,
    kkt_residual,
    lagrangian,
    maximize_on_simplex,
    project_rows,
    rational_certify,
)
from pattern_lagrangian.pattern import Pattern

LEMMA = Pattern.from_string(2, "112 122")
THM16 = Pattern.from_string(3, "123 122 112 113 223")


def test_projection_onto_simplex():
    Y = np.array([[0.5, 0.5, 0.5], [2.0, -1.0, 0.0], [0.2, 0.3, 0.5]])
    X = project_rows(Y, np.ones_like(Y, dtype=bool))
    assert np.allclose(X.sum(axis=1), 1.0)
    assert (X >= 0).all()
    assert np.allclose(X[0], [1 / 3] * 3)
    assert np.allclose(X[1], [1, 0, 0])
    assert np.allclose(X[2], Y[2])


def test_projection_respects_mask():
    Y = np.array([[0.9, 0.9, 0.9]])
    X = project_rows(Y, np.array([[True, False, True]]))
    assert np.allclose(X, [[0.5, 0, 0.5]])


def test_kkt_residual():
    assert kkt_residual(LEMMA, [0.5, 0.5]) == 0
    assert kkt_residual(LEMMA, [0.9, 0.1]) > 0.1
    assert kkt_residual(LEMMA, [F(1, 2), F(1, 2)]) == 0


def test_lemma_value_and_certificate():
    rec = lagrangian(LEMMA, OptConfig(exact_mode=True))
    assert rec.converged and rec.consistent
    assert rec.certified.value == F(1, 8)
    assert rec.certified.weights == (F(1, 2), F(1, 2))
    assert rec.support == (1, 2)
    assert rec.restarts_agreeing > 100


def test_thm16():
    rec = lagrangian(THM16, OptConfig(exact_mode=True))
    assert rec.certified.value == F(32, 243)
    assert rec.certified.weights == (F(4, 9), F(4, 9), F(1, 9))


def test_single_edge():
    rec = lagrangian(Pattern.from_string(3, "123"))
    assert math.isclose(rec.value, 1 / 27, rel_tol=1e-12)
    assert np.allclose(rec.witness, [1 / 3] * 3)


def test_empty_pattern():
    rec = lagrangian(Pattern(3, ()), OptConfig(exact_mode=True))
    assert rec.value == 0
    assert rec.certified.value == 0


def test_irrational_optimum_not_certified():
    rec = lagrangian(family_pattern(4).pattern, OptConfig(exact_mode=True))
    assert rec.converged
    assert rec.certified is None


def test_rational_certify_rejects_non_stationary():
    assert rational_certify(LEMMA, [0.9, 0.1], OptConfig()) is None


def test_blowup_density():
    rec = blowup_density(THM16, OptConfig(exact_mode=True))
    assert rec.exact_density == F(64, 81)
    assert math.isclose(rec.density, 64 / 81, rel_tol=1e-12)


def test_deterministic():
    cfg = OptConfig(seed=7, restarts=60)
    a = lagrangian(THM16, cfg)
    b = lagrangian(THM16, cfg)
    assert a == b


def test_seed_changes_nothing_material():
    a = lagrangian(THM16, OptConfig(seed=1, restarts=60))
    b = lagrangian(THM16, OptConfig(seed=2, restarts=60))
    assert abs(a.value - b.value) < 1e-12
    assert a.witness == b.witness


def test_maximize_plain_polynomial():
    rec = maximize_on_simplex(LEMMA.polynomial, 2, OptConfig(restarts=20))
    assert math.isclose(rec.value, 0.125, rel_tol=1e-12)


def test_config_validation():
    with pytest.raises(ValueError):
        OptConfig(restarts=0)
    with pytest.raises(ValueError):
        OptConfig(kkt_tol=0)
