import numpy as np
import pytest

from signedbalance.census import TriadState, census
from signedbalance.errors import NodeSetMismatchError
from signedbalance.graph import EdgeState, SignedGraph
from signedbalance.transitions import (
    TriadTransitionCounts,
    balance_dynamics_stats,
    changed_dyads,
    edge_transition_counts,
    triad_transition_counts,
    triad_transition_probabilities,
)

from oracles import (
    brute_edge_transitions,
    brute_triad_transitions,
    make_graph,
    random_pair,
)

P, N, A = EdgeState.POSITIVE, EdgeState.NEGATIVE, EdgeState.ABSENT


def test_changed_dyads_reports_both_states():
    g1 = make_graph(1900, range(4), pos=[(0, 1), (0, 2)], neg=[(1, 2)])
    g2 = make_graph(1901, range(4), pos=[(0, 1), (1, 2)], neg=[(0, 3)])
    assert changed_dyads(g1, g2) == {
        (0, 2): (P, A),
        (1, 2): (N, P),
        (0, 3): (A, N),
    }
    assert changed_dyads(g1, g1) == {}


class TestEdgeTransitionCounts:
    def test_mixed_change_multiset(self):
        # ten edges (4 positive, 6 negative) on six nodes, then five changes:
        # one of each flavor -/0, +/0, 0/+, 0/-, -/+
        pos = [(0, 1), (0, 2), (1, 2), (3, 4)]
        neg = [(0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4)]
        g1 = make_graph(1900, range(6), pos=pos, neg=neg)
        g2 = make_graph(
            1901,
            range(6),
            pos=[(0, 1), (0, 2), (1, 2), (0, 5), (2, 4)],  # 0-5 closes, 2-4 flips
            neg=[(0, 4), (1, 3), (1, 4), (2, 3), (1, 5)],  # 1-5 closes negative
        )
        c = edge_transition_counts(g1, g2)
        assert c[N, A] == 1  # 0-3 dissolves
        assert c[P, A] == 1  # 3-4 dissolves
        assert c[A, P] == 1
        assert c[A, N] == 1
        assert c[N, P] == 1
        assert c[P, N] == 0
        assert c.n_changes == 5
        assert c.n_dyads == 15
        assert c.counts.sum() == 15
        assert c[P, P] == 3 and c[N, N] == 4

    def test_matches_bruteforce_on_random_pairs(self):
        rng = np.random.default_rng(1001)
        for _ in range(30):
            n = int(rng.integers(3, 15))
            g1, g2 = random_pair(rng, n, rng.uniform(0.2, 0.9), rng.random(), rng.uniform(0, 0.8))
            assert np.array_equal(edge_transition_counts(g1, g2).counts, brute_edge_transitions(g1, g2))

    def test_identity_pair_is_diagonal(self):
        g = make_graph(1900, range(5), pos=[(0, 1), (2, 3)], neg=[(1, 2)])
        g_next = make_graph(1901, range(5), pos=[(0, 1), (2, 3)], neg=[(1, 2)])
        c = edge_transition_counts(g, g_next)
        assert c.n_changes == 0
        assert np.array_equal(np.diag(c.counts), [2, 1, 7])

    def test_node_set_mismatch_rejected(self):
        g1 = make_graph(1900, range(4), pos=[(0, 1)])
        g2 = make_graph(1901, range(5), pos=[(0, 1)])
        with pytest.raises(NodeSetMismatchError):
            edge_transition_counts(g1, g2)


class TestTriadTransitionCounts:
    def test_two_faction_k4_breakup(self):
        g1 = make_graph(
            1900, range(4), pos=[(0, 1), (2, 3)], neg=[(0, 2), (0, 3), (1, 2), (1, 3)]
        )
        g2 = make_graph(
            1901, range(4), pos=[(0, 1), (2, 3), (0, 3)], neg=[(0, 2), (1, 3)]
        )
        c = triad_transition_counts(g1, g2)
        assert c[TriadState.BALANCED, TriadState.IMBALANCED] == 2
        assert c[TriadState.BALANCED, TriadState.OPEN] == 2
        assert c[TriadState.BALANCED, TriadState.BALANCED] == 0
        assert c.n_triples == 4
        assert c.counts.sum() == 4

    def test_identity_pair_matches_census_diagonal(self):
        g1 = make_graph(1900, range(6), pos=[(0, 1), (0, 2), (1, 2), (3, 4)], neg=[(4, 5), (3, 5)])
        g2 = make_graph(1901, range(6), pos=[(0, 1), (0, 2), (1, 2), (3, 4)], neg=[(4, 5), (3, 5)])
        c = triad_transition_counts(g1, g2)
        prev = census(g1)
        assert np.array_equal(
            np.diag(c.counts), [prev.n_imbalanced, prev.n_open, prev.n_balanced]
        )
        assert c.counts.sum() == np.trace(c.counts)

    def test_whole_triangle_rewired_at_once(self):
        # all three dyads of (0,1,2) change together: the shared-triple
        # correction, not the single-dyad pass, must classify it
        g1 = make_graph(1900, range(4), pos=[(0, 1), (1, 2), (0, 2)])
        g2 = make_graph(1901, range(4), neg=[(0, 1), (1, 2)])
        c = triad_transition_counts(g1, g2)
        assert np.array_equal(c.counts, brute_triad_transitions(g1, g2))
        assert c[TriadState.BALANCED, TriadState.OPEN] == 1

    def test_row_sums_equal_prior_census(self):
        rng = np.random.default_rng(77)
        for _ in range(20):
            n = int(rng.integers(4, 16))
            g1, g2 = random_pair(rng, n, 0.6, 0.5, rng.uniform(0.1, 0.9))
            c = triad_transition_counts(g1, g2)
            prev = census(g1)
            assert np.array_equal(
                c.counts.sum(axis=1), [prev.n_imbalanced, prev.n_open, prev.n_balanced]
            )
            curr = census(g2)
            assert np.array_equal(
                c.counts.sum(axis=0), [curr.n_imbalanced, curr.n_open, curr.n_balanced]
            )

    def test_matches_bruteforce_on_random_pairs(self):
        rng = np.random.default_rng(515)
        for _ in range(30):
            n = int(rng.integers(3, 14))
            g1, g2 = random_pair(rng, n, rng.uniform(0.2, 1.0), rng.random(), rng.uniform(0, 1.0))
            c = triad_transition_counts(g1, g2)
            assert np.array_equal(c.counts, brute_triad_transitions(g1, g2))

    def test_dense_change_stress(self):
        # nearly every dyad flips; shared-triple corrections dominate
        rng = np.random.default_rng(3)
        for _ in range(10):
            g1, g2 = random_pair(rng, 9, 0.9, 0.5, 0.95)
            assert np.array_equal(
                triad_transition_counts(g1, g2).counts, brute_triad_transitions(g1, g2)
            )


class TestProbabilitiesAndStats:
    def test_rows_normalized_and_undefined_marked(self):
        counts = TriadTransitionCounts(
            np.array([[0, 0, 0], [2, 6, 4], [1, 0, 3]], dtype=np.int64), 16
        )
        w = triad_transition_probabilities(counts)
        assert w.defined == (False, True, True)
        assert np.isnan(w.w[0]).all()
        assert np.allclose(w.w[1], [2 / 12, 6 / 12, 4 / 12])
        assert w[TriadState.BALANCED, TriadState.BALANCED] == pytest.approx(0.75)
        assert not w.row_defined(TriadState.IMBALANCED)

    def test_stats_from_hand_matrix(self):
        counts = TriadTransitionCounts(
            np.array([[2, 3, 5], [1, 6, 3], [0, 1, 3]], dtype=np.int64), 24
        )
        stats = balance_dynamics_stats(triad_transition_probabilities(counts))
        assert stats.escape_from_imbalance == pytest.approx(0.8)
        assert stats.closure_bias == pytest.approx(0.2)
        assert stats.balanced_persistence == pytest.approx(0.75)
        assert stats.get("closure_bias") == stats.closure_bias
        with pytest.raises(KeyError):
            stats.get("nonsense")

    def test_undefined_rows_give_none_stats(self):
        counts = TriadTransitionCounts(
            np.array([[0, 0, 0], [0, 4, 0], [0, 0, 0]], dtype=np.int64), 4
        )
        stats = balance_dynamics_stats(triad_transition_probabilities(counts))
        assert stats.escape_from_imbalance is None
        assert stats.balanced_persistence is None
        assert stats.closure_bias == pytest.approx(0.0)
