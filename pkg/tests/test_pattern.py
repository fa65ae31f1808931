import itertools
import math
import warnings
from fractions import Fraction as F

import pytest

from pattern_lagrangian.pattern import (
    Pattern,
    PatternError,
    PatternSyntaxError,
    all_multisets,
    blowup,
    canonical_form,
    density,
    edge_string,
    eval_poly,
    grad_poly,
    parse_pattern,
    serialize_pattern,
    simple_blowup,
    simple_blowup_edge_count,
)


def brute_simple_count(P, t):
    """Count 3-sets of distinct copies whose projection is an edge."""
    copies = [(i, c) for i in range(1, P.n + 1) for c in range(t[i - 1])]
    edges = set(P.edges)
    return sum(1 for trip in itertools.combinations(copies, P.r)
               if tuple(sorted(v for v, _ in trip)) in edges)


def brute_full_count(P, t):
    copies = [(i, c) for i in range(1, P.n + 1) for c in range(t[i - 1])]
    edges = set(P.edges)
    return sum(1 for trip in itertools.combinations_with_replacement(copies, P.r)
               if tuple(sorted(v for v, _ in trip)) in edges)


EXAMPLE = Pattern.from_string(3, "112 123 223")


class TestParse:
    def test_basic(self):
        P = parse_pattern("r 3\nn 2\nedge 1 1 2\nedge 2 1 2\n")
        assert P.n == 2 and P.r == 3
        assert P.edges == ((1, 1, 2), (1, 2, 2))

    def test_default_r_and_comments(self):
        P = parse_pattern("# hello\nn 3   # three\nedge 3 2 1 # tail\n\n")
        assert P.r == 3 and P.edges == ((1, 2, 3),)

    def test_syntax_error_location(self):
        with pytest.raises(PatternSyntaxError) as info:
            parse_pattern("n 3\nedge 1 x 2\n")
        assert info.value.line == 2 and info.value.column == 8

    def test_unknown_directive(self):
        with pytest.raises(PatternSyntaxError) as info:
            parse_pattern("n 3\n  vertex 1\n")
        assert (info.value.line, info.value.column) == (2, 3)

    def test_missing_n(self):
        with pytest.raises(PatternSyntaxError):
            parse_pattern("r 3\nedge 1 1 1\n")

    def test_wrong_arity(self):
        with pytest.raises(PatternError, match="line 2"):
            parse_pattern("n 3\nedge 1 2\n")

    def test_out_of_range(self):
        with pytest.raises(PatternError, match="vertex 4"):
            parse_pattern("n 3\nedge 1 2 4\n")

    def test_duplicate_warns(self):
        with pytest.warns(UserWarning, match="duplicate"):
            P = parse_pattern("n 2\nedge 1 1 2\nedge 2 1 1\n")
        assert P.edges == ((1, 1, 2),)

    def test_other_uniformity(self):
        P = parse_pattern("r 2\nn 3\nedge 1 2\nedge 2 3\n")
        assert P.r == 2 and len(P.edges) == 2

    def test_round_trip(self):
        P = parse_pattern("n 3\nedge 2 2 3\nedge 1 2 3\nedge 1 1 2\n")
        text = serialize_pattern(P)
        assert text == "r 3\nn 3\nedge 1 1 2\nedge 1 2 3\nedge 2 2 3\n"
        assert serialize_pattern(parse_pattern(text)) == text

    def test_fixture_round_trip(self, fixtures):
        for path in sorted(fixtures.glob("*.pat")):
            with warnings.catch_warnings():
                warnings.simplefilter("error")
                once = serialize_pattern(parse_pattern(path.read_text()))
            assert serialize_pattern(parse_pattern(once)) == once, path.name


class TestPattern:
    def test_validation(self):
        with pytest.raises(PatternError):
            Pattern(2, ((1, 2, 3),))
        with pytest.raises(PatternError):
            Pattern(2, ((1, 2),))
        with pytest.raises(PatternError):
            Pattern(0, ())

    def test_edges_sorted(self):
        P = Pattern(3, ((3, 2, 1), (2, 1, 1)))
        assert P.edges == ((1, 1, 2), (1, 2, 3))
        assert edge_string(P) == "112 123"

    def test_polynomial_coefficients(self):
        P = Pattern.from_string(3, "111 112 123")
        x = [F(1, 2), F(1, 3), F(1, 6)]
        a, b, c = x
        assert eval_poly(P, x) == a**3 / 6 + a * a * b / 2 + a * b * c

    def test_gradient_exact(self):
        P = Pattern.from_string(2, "112 122")
        a, b = F(2, 5), F(3, 5)
        assert grad_poly(P, [a, b]) == [a * b + b * b / 2, a * a / 2 + a * b]

    def test_density(self):
        K4 = Pattern.from_edges(4, itertools.combinations(range(1, 5), 3))
        assert density(K4) == 1.0
        assert density(Pattern.from_string(4, "123 124")) == 0.5
        with pytest.raises(PatternError):
            density(Pattern.from_string(2, "112"))

    def test_all_multisets(self):
        assert len(all_multisets(3)) == 10
        assert len(all_multisets(4)) == math.comb(6, 3)


class TestBlowup:
    def test_example_count(self):
        # brute force gives 7: 112 contributes C(2,2)*C(2,1)=2, 123 gives 4, 223 gives 1
        assert brute_simple_count(EXAMPLE, [2, 2, 1]) == 7
        assert simple_blowup_edge_count(EXAMPLE, [2, 2, 1]) == 7
        assert len(simple_blowup(EXAMPLE, [2, 2, 1]).pattern.edges) == 7

    def test_simple_blowup_is_graph(self):
        res = simple_blowup(EXAMPLE, [2, 3, 2])
        assert res.pattern.is_simple
        assert res.pattern.n == 7
        for e in res.pattern.edges:
            proj = tuple(sorted(res.label_map[v - 1][0] for v in e))
            assert proj in EXAMPLE.edges

    def test_full_blowup_matches_brute(self):
        for t in ([1, 1, 1], [2, 1, 3], [0, 2, 2]):
            assert len(blowup(EXAMPLE, t).pattern.edges) == brute_full_count(EXAMPLE, t)

    def test_label_map(self):
        res = blowup(EXAMPLE, [2, 1, 1])
        assert res.label_map == ((1, 1), (1, 2), (2, 1), (3, 1))
        assert res.label_of(3, 1) == 4

    def test_bad_vectors(self):
        with pytest.raises(PatternError):
            blowup(EXAMPLE, [1, 1])
        with pytest.raises(PatternError):
            blowup(EXAMPLE, [0, 0, 0])
        with pytest.raises(PatternError):
            simple_blowup(EXAMPLE, [1, -1, 1])

    def test_count_matches_brute_small(self):
        for n in (1, 2, 3):
            pool = all_multisets(n)
            for k in range(1, min(4, len(pool)) + 1):
                for edges in itertools.combinations(pool, k):
                    P = Pattern(n, edges)
                    for t in itertools.product(range(4), repeat=n):
                        assert simple_blowup_edge_count(P, t) == brute_simple_count(P, t)

    def test_density_limit(self):
        # edge density of P[t] with t proportional to x tends to 6 p(x)
        P = Pattern.from_string(2, "112 122")
        t = [40, 40]
        count = simple_blowup_edge_count(P, t)
        assert abs(count / math.comb(80, 3) - 0.75) < 0.02


class TestCanonical:
    def test_isomorphic_patterns_agree(self):
        P = Pattern.from_string(3, "112 123 223")
        Q = P.relabel([3, 1, 2])
        assert canonical_form(P) == canonical_form(Q)

    def test_fixed_vertex(self):
        P = Pattern.from_string(3, "122 112")
        Q = Pattern.from_string(3, "133 113")
        assert canonical_form(P, fixed=(1,)) == canonical_form(Q, fixed=(1,))
        R = Pattern.from_string(3, "122 223")
        assert canonical_form(P, fixed=(1,)) != canonical_form(R, fixed=(1,))

    def test_large_n_uses_refinement(self):
        edges = [(i, i + 1, i + 2) for i in range(1, 8)] + [(1, 1, 9)]
        P = Pattern.from_edges(9, edges)
        perm = [9, 8, 7, 6, 5, 4, 3, 2, 1]
        assert canonical_form(P) == canonical_form(P.relabel(perm))
