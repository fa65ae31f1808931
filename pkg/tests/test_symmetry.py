from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from conftest import patterns
from pattern_lagrangian.optimizer import OptConfig, lagrangian
from pattern_lagrangian.pattern import Pattern, eval_poly
from pattern_lagrangian.symmetry import (
    EquivalencePartition,
    active_count_vectors,
    equivalence_classes,
    reduce,
    swaps_to_self,
    validate_partition,
)

THM16 = Pattern.from_string(3, "123 122 112 113 223")


def test_thm16_classes():
    part = equivalence_classes(THM16)
    assert part.classes == ((1, 2), (3,))
    assert str(part) == "{1,2} {3}"
    assert part.class_of(3) == 1


def test_complete_pattern_one_class():
    P = Pattern.from_string(4, "123 124 134 234")
    assert equivalence_classes(P).classes == ((1, 2, 3, 4),)


def test_trivial_partition():
    P = Pattern.from_string(3, "112 123 223")
    assert swaps_to_self(P, 1, 3) is False
    assert equivalence_classes(P).is_trivial


def test_validate_rejects_bad_partition():
    with pytest.raises(ValueError):
        validate_partition(THM16, EquivalencePartition(((1, 3), (2,))))
    with pytest.raises(ValueError):
        validate_partition(THM16, EquivalencePartition(((1, 2),)))


def test_reduced_objective_matches_lift():
    part = equivalence_classes(THM16)
    ro = reduce(THM16, part)
    y = [F(8, 9), F(1, 9)]
    assert ro.lift(y) == [F(4, 9), F(4, 9), F(1, 9)]
    assert ro(y) == eval_poly(THM16, ro.lift(y)) == F(32, 243)


def test_active_counts():
    part = EquivalencePartition(((1, 2, 3), (4, 5)))
    vecs = list(active_count_vectors(part))
    assert vecs[0] == (3, 2)
    assert len(vecs) == 6 and len(set(vecs)) == 6
    assert list(active_count_vectors(part, limit=2)) == [(3, 2)]


def test_uniform_split_is_not_enough():
    # 2 and 3 are equivalent, but the optimum puts weight on only one of them
    P = Pattern.from_string(3, "122 133")
    part = equivalence_classes(P)
    assert part.classes == ((1,), (2, 3))
    uniform = reduce(P, part)
    assert uniform([F(1, 3), F(2, 3)]) == F(1, 27)
    one = reduce(P, part, (1, 1))
    assert one([F(1, 3), F(2, 3)]) == F(2, 27)
    rec = lagrangian(P, OptConfig(restarts=50))
    assert abs(rec.value - 2 / 27) < 1e-12
    assert rec.consistent


@settings(max_examples=40)
@given(patterns(max_n=3, max_edges=6))
def test_optimum_preserved(P):
    rec = lagrangian(P, OptConfig(restarts=40))
    if rec.reduced_value is not None:
        assert abs(rec.full_value - rec.reduced_value) <= 1e-9
