from itertools import permutations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from signedbalance.census import TriadState, census, classify_triad, fraction_balanced
from signedbalance.errors import NoClosedTriadsError
from signedbalance.graph import EdgeState, SignedGraph

from oracles import brute_census, make_graph, random_signed_graph

P, N, A = EdgeState.POSITIVE, EdgeState.NEGATIVE, EdgeState.ABSENT


class TestClassifyTriad:
    @pytest.mark.parametrize(
        "states,expected",
        [
            ((P, P, P), TriadState.BALANCED),
            ((P, N, N), TriadState.BALANCED),
            ((P, P, N), TriadState.IMBALANCED),
            ((N, N, N), TriadState.IMBALANCED),
            ((P, P, A), TriadState.OPEN),
            ((N, A, A), TriadState.OPEN),
            ((A, A, A), TriadState.OPEN),
        ],
    )
    def test_truth_table(self, states, expected):
        assert classify_triad(*states) is expected

    @given(st.tuples(*[st.sampled_from([P, N, A])] * 3))
    def test_invariant_under_edge_order(self, states):
        reference = classify_triad(*states)
        for perm in permutations(states):
            assert classify_triad(*perm) is reference

    def test_any_absent_edge_opens_the_triad(self):
        for s1 in (P, N):
            for s2 in (P, N):
                assert classify_triad(s1, s2, A) is TriadState.OPEN


class TestCensusHandInstances:
    def test_two_faction_k4_is_fully_balanced(self):
        g = make_graph(
            1900, range(4), pos=[(0, 1), (2, 3)], neg=[(0, 2), (0, 3), (1, 2), (1, 3)]
        )
        c = census(g)
        assert (c.n_balanced, c.n_imbalanced, c.n_open) == (4, 0, 0)
        assert c.n_closed == 4
        assert c.n_triples == 4
        assert c.fraction_balanced() == 1.0

    def test_half_balanced_instance(self):
        # two closed triads: (0,1,2) all positive, (2,3,4) with one negative
        g = make_graph(
            1900,
            range(5),
            pos=[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4)],
            neg=[(3, 4)],
        )
        c = census(g)
        assert c.n_balanced == 1
        assert c.n_imbalanced == 1
        assert c.n_open == 8
        assert c.fraction_balanced() == pytest.approx(0.5)
        assert c.fraction_balanced("all") == pytest.approx(1 / 10)

    def test_single_triangle_signs(self):
        assert census(make_graph(1900, range(3), pos=[(0, 1), (1, 2), (0, 2)])).n_balanced == 1
        assert (
            census(
                make_graph(1900, range(3), pos=[(0, 1)], neg=[(1, 2), (0, 2)])
            ).n_balanced
            == 1
        )
        assert (
            census(
                make_graph(1900, range(3), pos=[(0, 1), (1, 2)], neg=[(0, 2)])
            ).n_imbalanced
            == 1
        )

    def test_isolated_nodes_count_toward_open_triples(self):
        g = make_graph(1900, range(6), pos=[(0, 1), (1, 2), (0, 2)])
        c = census(g)
        assert c.n_triples == 20
        assert c.n_open == 19
        assert c.fraction_balanced("all") == pytest.approx(1 / 20)

    def test_small_and_empty_graphs(self):
        assert census(SignedGraph(1900, [], {})).n_triples == 0
        assert census(SignedGraph(1900, range(2), {})).n_triples == 0
        c = census(SignedGraph(1900, range(3), {}))
        assert (c.n_balanced, c.n_imbalanced, c.n_open) == (0, 0, 1)

    def test_no_closed_triads_fraction_undefined(self):
        star = make_graph(1900, range(5), pos=[(0, i) for i in range(1, 5)])
        assert census(star).n_closed == 0
        with pytest.raises(NoClosedTriadsError):
            fraction_balanced(star)
        # against all triples the fraction exists and is zero
        assert fraction_balanced(star, "all") == 0.0

    def test_bad_denominator_name(self):
        g = make_graph(1900, range(3), pos=[(0, 1), (1, 2), (0, 2)])
        with pytest.raises(ValueError):
            fraction_balanced(g, "closed_triads")


def test_census_matches_bruteforce_on_random_graphs():
    rng = np.random.default_rng(421)
    for _ in range(40):
        n = int(rng.integers(3, 36))
        g = random_signed_graph(rng, n, rng.random(), rng.random())
        c = census(g)
        assert (c.n_balanced, c.n_imbalanced, c.n_open) == brute_census(g)


def test_census_total_is_binomial_coefficient():
    rng = np.random.default_rng(99)
    for n in (3, 10, 64, 65, 130):
        g = random_signed_graph(rng, n, 0.4, 0.5)
        c = census(g)
        assert c.n_triples == n * (n - 1) * (n - 2) // 6
        assert c.n_balanced + c.n_imbalanced + c.n_open == c.n_triples
