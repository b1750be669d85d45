"""Edge- and triad-state transitions between consecutive yearly snapshots.

Both snapshots must already be restricted to their common node set (see
:func:`signedbalance.graph.common_subgraphs`); every pair and triple of common
nodes is tallied, absent-to-absent dyads and fully open triples included.

Triad transitions are counted delta-driven rather than by enumerating all
C(n, 3) triples: only triples touching a changed dyad can change state, and a
triple whose single changed dyad is flanked by two unchanged edges is
classified from precomputed per-dyad neighbour counts alone.  Triples spanning
two or three changed dyads are few and get corrected individually; everything
untouched contributes diagonal mass taken from the year t-1 census.  The same
machinery scores surrogate growths, where it is the dominant cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .census import TriadCensus, TriadState, census
from .errors import NodeSetMismatchError
from .graph import EdgeState, SignedGraph

__all__ = [
    "EdgeTransitionCounts",
    "TriadTransitionCounts",
    "TriadTransitionMatrix",
    "BalanceDynamicsStats",
    "edge_transition_counts",
    "triad_transition_counts",
    "triad_transition_probabilities",
    "balance_dynamics_stats",
    "changed_dyads",
    "GrowthContext",
]

_EIDX = {EdgeState.POSITIVE: 0, EdgeState.NEGATIVE: 1, EdgeState.ABSENT: 2}
_TIDX = {TriadState.IMBALANCED: 0, TriadState.OPEN: 1, TriadState.BALANCED: 2}
_TSTATES = (TriadState.IMBALANCED, TriadState.OPEN, TriadState.BALANCED)

# _CELL[s + 1][j]: triad index of a triple whose focal dyad has state s and
# whose other two dyads are present with j negatives among them
_CELL = np.array(
    [
        [0, 2, 0],  # s = -1: odd parity flips with j
        [1, 1, 1],  # s =  0: open regardless
        [2, 0, 2],  # s = +1
    ],
    dtype=np.int64,
)


def _triad_index(states) -> int:
    """Triad index from three integer edge states (-1/0/+1)."""
    if 0 in states:
        return 1
    n_neg = sum(1 for s in states if s < 0)
    return 2 if n_neg % 2 == 0 else 0


def _check_same_nodes(g_prev: SignedGraph, g_curr: SignedGraph) -> None:
    if g_prev.nodes != g_curr.nodes:
        raise NodeSetMismatchError(
            "snapshots must share a node set; restrict them with common_subgraphs first"
        )


@dataclass(frozen=True)
class EdgeTransitionCounts:
    """3x3 dyad-state transition tallies over all C(n, 2) common-node dyads."""

    counts: np.ndarray  # indexed [positive, negative, absent] x same
    n_dyads: int

    def __getitem__(self, key: tuple[EdgeState, EdgeState]) -> int:
        src, dst = key
        return int(self.counts[_EIDX[src], _EIDX[dst]])

    @property
    def n_changes(self) -> int:
        """Number of dyads whose state differs between the two years."""
        return int(self.counts.sum() - np.trace(self.counts))

    def __eq__(self, other):
        if not isinstance(other, EdgeTransitionCounts):
            return NotImplemented
        return self.n_dyads == other.n_dyads and np.array_equal(self.counts, other.counts)


@dataclass(frozen=True)
class TriadTransitionCounts:
    """3x3 triad-state transition tallies over all C(n, 3) common-node triples."""

    counts: np.ndarray  # indexed [imbalanced, open, balanced] x same
    n_triples: int

    def __getitem__(self, key: tuple[TriadState, TriadState]) -> int:
        src, dst = key
        return int(self.counts[_TIDX[src], _TIDX[dst]])

    def __eq__(self, other):
        if not isinstance(other, TriadTransitionCounts):
            return NotImplemented
        return self.n_triples == other.n_triples and np.array_equal(self.counts, other.counts)


@dataclass(frozen=True)
class TriadTransitionMatrix:
    """Row-normalized triad transition probabilities with per-row definedness.

    A row is undefined when no triple occupied its state in year t-1; its
    entries are NaN.
    """

    w: np.ndarray  # (3, 3) float
    defined: tuple[bool, bool, bool]  # by [imbalanced, open, balanced]

    def __getitem__(self, key: tuple[TriadState, TriadState]) -> float:
        src, dst = key
        return float(self.w[_TIDX[src], _TIDX[dst]])

    def row_defined(self, state: TriadState) -> bool:
        return self.defined[_TIDX[state]]


@dataclass(frozen=True)
class BalanceDynamicsStats:
    """The three year-over-year balance statistics; None marks an undefined one.

    escape_from_imbalance
        Probability that an imbalanced triad leaves imbalance (opens or
        becomes balanced).
    closure_bias
        Probability an open triad closes balanced minus the probability it
        closes imbalanced.
    balanced_persistence
        Probability a balanced triad stays balanced.
    """

    escape_from_imbalance: float | None
    closure_bias: float | None
    balanced_persistence: float | None

    FIELDS = ("escape_from_imbalance", "closure_bias", "balanced_persistence")

    def get(self, name: str) -> float | None:
        if name not in self.FIELDS:
            raise KeyError(name)
        return getattr(self, name)


def changed_dyads(
    g_prev: SignedGraph, g_curr: SignedGraph
) -> dict[tuple[int, int], tuple[EdgeState, EdgeState]]:
    """Dyads whose state differs between the two snapshots, with both states."""
    out = {}
    for d in g_prev.edges.keys() | g_curr.edges.keys():
        sp = g_prev.edges.get(d, EdgeState.ABSENT)
        sc = g_curr.edges.get(d, EdgeState.ABSENT)
        if sp is not sc:
            out[d] = (sp, sc)
    return out


def edge_transition_counts(g_prev: SignedGraph, g_curr: SignedGraph) -> EdgeTransitionCounts:
    """Tally (state at t-1 -> state at t) for every dyad over the shared nodes."""
    _check_same_nodes(g_prev, g_curr)
    n = g_prev.node_count()
    n_dyads = comb(n, 2)
    c = np.zeros((3, 3), dtype=np.int64)
    for sp, sc in changed_dyads(g_prev, g_curr).values():
        c[_EIDX[sp], _EIDX[sc]] += 1
    n_pos, n_neg = g_prev.edge_counts()
    class_totals = (n_pos, n_neg, n_dyads - n_pos - n_neg)
    for i, total in enumerate(class_totals):
        c[i, i] = total - (c[i].sum() - c[i, i])
        assert c[i, i] >= 0
    return EdgeTransitionCounts(c, n_dyads)


class GrowthContext:
    """Per-year-pair precomputation for scoring one-year triad transitions.

    Everything here depends only on the year t-1 snapshot, so one context is
    shared by the empirical growth and all of its surrogates.  Dyads of the
    common node set are indexed canonically (ascending id pairs, row-major),
    and ``jcounts[k]`` holds, for dyad ``k = (u, v)``, the number of third
    nodes adjacent to both u and v at t-1 with 0, 1, or 2 negative flanking
    edges.
    """

    def __init__(self, g_prev: SignedGraph):
        self.g_prev = g_prev
        nodes_sorted = sorted(g_prev.nodes)
        self.n = len(nodes_sorted)
        self.dyads: list[tuple[int, int]] = list(combinations(nodes_sorted, 2))
        self.index = {d: k for k, d in enumerate(self.dyads)}
        n_dyads = len(self.dyads)

        prev_state = np.zeros(n_dyads, dtype=np.int8)
        for d, s in g_prev.edges.items():
            prev_state[self.index[d]] = int(s)
        self.prev_state = prev_state

        self.census_prev: TriadCensus = census(g_prev)
        self.row_totals = np.array(
            [
                self.census_prev.n_imbalanced,
                self.census_prev.n_open,
                self.census_prev.n_balanced,
            ],
            dtype=np.int64,
        )

        if n_dyads:
            pk = g_prev.packed()
            iu, iv = np.triu_indices(self.n, k=1)  # same order as self.dyads
            cpp = np.bitwise_count(pk.pos[iu] & pk.pos[iv]).sum(axis=1, dtype=np.int64)
            c1 = np.bitwise_count(pk.pos[iu] & pk.neg[iv]).sum(axis=1, dtype=np.int64)
            c1 += np.bitwise_count(pk.neg[iu] & pk.pos[iv]).sum(axis=1, dtype=np.int64)
            cnn = np.bitwise_count(pk.neg[iu] & pk.neg[iv]).sum(axis=1, dtype=np.int64)
            self.jcounts = np.stack([cpp, c1, cnn], axis=1)
        else:
            self.jcounts = np.zeros((0, 3), dtype=np.int64)

    def joint_counts(self, changed_idx: np.ndarray, changed_dest: np.ndarray) -> np.ndarray:
        """(prev state, curr state) triple tallies for a year t graph that
        differs from t-1 exactly on the given dyads.

        ``changed_idx`` are canonical dyad indices, ``changed_dest`` the new
        integer states (each must differ from the dyad's t-1 state).  Returns
        a 3x3 int64 array indexed [imbalanced, open, balanced] both ways.
        """
        c = np.zeros((3, 3), dtype=np.int64)
        if len(changed_idx):
            src = self.prev_state[changed_idx]
            for a in (-1, 0, 1):
                for b in (-1, 0, 1):
                    if a == b:
                        continue
                    sel = (src == a) & (changed_dest == b)
                    if not sel.any():
                        continue
                    jc = self.jcounts[changed_idx[sel]].sum(axis=0)
                    for j in range(3):
                        if jc[j]:
                            c[_CELL[a + 1, j], _CELL[b + 1, j]] += jc[j]
            self._correct_shared_triples(c, changed_idx, changed_dest)
        # untouched triples keep their year t-1 state
        for i in range(3):
            remainder = self.row_totals[i] - c[i].sum()
            assert remainder >= 0
            c[i, i] += remainder
        return c

    def _correct_shared_triples(self, c, changed_idx, changed_dest) -> None:
        # triples containing two or three changed dyads were classified as if
        # each change were alone; redo them exactly
        if len(changed_idx) < 2:
            return
        changed_map = {int(k): int(d) for k, d in zip(changed_idx, changed_dest)}
        by_node: dict[int, list[int]] = {}
        for k in changed_map:
            a, b = self.dyads[k]
            by_node.setdefault(a, []).append(k)
            by_node.setdefault(b, []).append(k)
        triples = set()
        for x, incident in by_node.items():
            if len(incident) < 2:
                continue
            for k1, k2 in combinations(incident, 2):
                d1, d2 = self.dyads[k1], self.dyads[k2]
                y = d1[0] if d1[1] == x else d1[1]
                z = d2[0] if d2[1] == x else d2[1]
                if y != z:
                    triples.add(tuple(sorted((x, y, z))))
        for x, y, z in triples:
            ks = (self.index[(x, y)], self.index[(x, z)], self.index[(y, z)])
            sp = [int(self.prev_state[k]) for k in ks]
            sc = [changed_map.get(k, s) for k, s in zip(ks, sp)]
            for t in range(3):
                if ks[t] not in changed_map:
                    continue
                o1, o2 = sp[(t + 1) % 3], sp[(t + 2) % 3]
                if o1 != 0 and o2 != 0:
                    j = (o1 < 0) + (o2 < 0)
                    c[_CELL[sp[t] + 1, j], _CELL[sc[t] + 1, j]] -= 1
            c[_triad_index(sp), _triad_index(sc)] += 1


def triad_transition_counts(g_prev: SignedGraph, g_curr: SignedGraph) -> TriadTransitionCounts:
    """Tally (triad state at t-1 -> triad state at t) for every common triple."""
    _check_same_nodes(g_prev, g_curr)
    ctx = GrowthContext(g_prev)
    changes = changed_dyads(g_prev, g_curr)
    keys = sorted(changes)
    idx = np.fromiter((ctx.index[d] for d in keys), dtype=np.int64, count=len(keys))
    dest = np.fromiter((int(changes[d][1]) for d in keys), dtype=np.int8, count=len(keys))
    return TriadTransitionCounts(ctx.joint_counts(idx, dest), ctx.census_prev.n_triples)


def triad_transition_probabilities(c: TriadTransitionCounts) -> TriadTransitionMatrix:
    """Row-normalize transition counts; rows with zero total become undefined."""
    totals = c.counts.sum(axis=1)
    w = np.full((3, 3), np.nan)
    defined = []
    for i in range(3):
        if totals[i] > 0:
            w[i] = c.counts[i] / totals[i]
            defined.append(True)
        else:
            defined.append(False)
    return TriadTransitionMatrix(w, tuple(defined))


def balance_dynamics_stats(w: TriadTransitionMatrix) -> BalanceDynamicsStats:
    """Extract the three balance statistics from a transition matrix."""
    escape = None
    if w.row_defined(TriadState.IMBALANCED):
        escape = (
            w[TriadState.IMBALANCED, TriadState.BALANCED]
            + w[TriadState.IMBALANCED, TriadState.OPEN]
        )
    closure = None
    if w.row_defined(TriadState.OPEN):
        closure = (
            w[TriadState.OPEN, TriadState.BALANCED] - w[TriadState.OPEN, TriadState.IMBALANCED]
        )
    persistence = None
    if w.row_defined(TriadState.BALANCED):
        persistence = w[TriadState.BALANCED, TriadState.BALANCED]
    return BalanceDynamicsStats(escape, closure, persistence)
