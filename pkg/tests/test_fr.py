from fractions import Fraction as F

import pytest

from pattern_lagrangian.frankl_rodl import certify_nonjump, fr_construct, theorem_main_check
from pattern_lagrangian.optimizer import OptConfig
from pattern_lagrangian.pattern import Pattern, PatternError, eval_poly

LEMMA = Pattern.from_string(2, "112 122")
EXACT = OptConfig(exact_mode=True)


def lemma_fr_polynomial(a, b, c):
    # b is the combined weight of the two extra pivot copies, c the weight of vertex 2
    return a * b**2 / 4 + a**2 * c / 2 + b**2 * c / 4 + a * b * c + (a + b) * c**2 / 2


def test_lemma_fr_edges():
    fr = fr_construct(LEMMA, 1)
    a, b, c = fr.copy_map
    two = fr.pattern.n
    assert fr.label_map[two - 1] == (2, 1)
    expected = {(a, a, two), (a, b, two), (a, c, two), (b, c, two),
                (a, two, two), (b, two, two), (c, two, two), (a, b, c)}
    assert set(fr.pattern.edges) == {tuple(sorted(e)) for e in expected}
    assert len(fr.pattern.edges) == 8


@pytest.mark.parametrize("a,b,c", [(F(1, 2), F(0), F(1, 2)), (F(1, 3), F(1, 3), F(1, 3)),
                                   (F(1, 5), F(3, 10), F(1, 2)), (F(7, 9), F(1, 9), F(1, 9)),
                                   (F(0), F(2, 3), F(1, 3))])
def test_lemma_fr_polynomial(a, b, c):
    fr = fr_construct(LEMMA, 1)
    assert eval_poly(fr.pattern, [a, b / 2, b / 2, c]) == lemma_fr_polynomial(a, b, c)


def test_fr_contains_source_at_first_copy():
    P = Pattern.from_string(3, "123 122 112 113 223")
    fr = fr_construct(P, 1)
    x = [F(1, 4), F(0), F(0), F(1, 2), F(1, 4)]
    assert eval_poly(fr.pattern, x) == eval_poly(P, [F(1, 4), F(1, 2), F(1, 4)])


def test_fr_bad_pivot():
    with pytest.raises(PatternError):
        fr_construct(LEMMA, 3)


def test_structural_check():
    assert theorem_main_check(LEMMA, 1) == (True, 2)
    assert theorem_main_check(Pattern.from_string(3, "112 122"), 1) == (False, None)
    assert theorem_main_check(Pattern.from_string(3, "112 113 123"), 1) == (False, None)
    assert theorem_main_check(Pattern.from_string(3, "112 113 133"), 1) == (True, 3)


def test_certify_lemma():
    cert = certify_nonjump(LEMMA, 1, EXACT)
    assert cert.passed
    assert cert.status == "exact-certified"
    assert cert.exact_claimed_density == F(3, 4)
    assert cert.lambda_P.certified.value == cert.lambda_FR.certified.value == F(1, 8)
    assert cert.gap == 0
    assert cert.failed_conditions() == []


def test_certify_flags_failures():
    P = Pattern.from_string(3, "123")
    cert = certify_nonjump(P, 1, EXACT)
    assert not cert.passed
    assert "structural_condition" in cert.failed_conditions()
    # the FR triangle through the pivot copies beats 1/27
    assert cert.lambda_FR.value > cert.lambda_P.value
    assert not cert.equality


def test_density_one_flagged():
    P = Pattern.from_string(2, "112 122 222")
    cert = certify_nonjump(P, 1, EXACT)
    assert cert.lambda_below_one
    assert not cert.density_below_one
    assert not cert.passed
