"""Null-model ensembles: static sign shuffles and transition-preserving growths.

Two randomizations are provided.  The static one permutes the signs of a
snapshot's edges over its fixed topology, so node set, dyad set, and the
positive/negative counts are all conserved.  The growth one randomizes *where*
one year's dyad-state changes land: dyads are partitioned by their year t-1
state, and within each class the observed destination states are reassigned
by a uniform random permutation, conserving the 3x3 edge-transition count
matrix exactly.

Per-sample generators are derived from ``(master_seed, year, sample index)``
through a seed-sequence split, so results do not depend on execution order or
worker count.  Ensemble scoring avoids materializing surrogate snapshots (the
statistics are computed straight from the permutation), but draws from the
same stream as :func:`shuffle_signs` / :func:`shuffle_growth`, with which it
agrees sample by sample.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .census import TriadState  # noqa: F401  (re-exported for callers)
from .errors import NoClosedTriadsError, NothingToRandomizeError
from .graph import EdgeState, SignedGraph, dyad
from .transitions import (
    BalanceDynamicsStats,
    GrowthContext,
    TriadTransitionCounts,
    _check_same_nodes,
    balance_dynamics_stats,
    triad_transition_probabilities,
)

__all__ = [
    "SurrogateConfig",
    "sample_seed",
    "shuffle_signs",
    "shuffle_growth",
    "sample_static",
    "sample_growth",
]


@dataclass(frozen=True)
class SurrogateConfig:
    """Ensemble size and master seed for surrogate sampling."""

    n_samples: int = 1000
    master_seed: int = 0

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")
        if self.master_seed < 0:
            raise ValueError("master_seed must be a non-negative integer")


def sample_seed(master_seed: int, year: int, k: int) -> np.random.SeedSequence:
    """Deterministic per-sample seed from (master seed, year, sample index)."""
    return np.random.SeedSequence([master_seed, year, k])


def _sorted_dyads(g: SignedGraph) -> list[tuple[int, int]]:
    return sorted(g.edges)


def _sign_vector(g: SignedGraph, dyads) -> np.ndarray:
    return np.fromiter((int(g.edges[d]) for d in dyads), dtype=np.int8, count=len(dyads))


def shuffle_signs(g: SignedGraph, seed) -> SignedGraph:
    """Sign-shuffle surrogate: same nodes and dyads, signs uniformly permuted."""
    dyads = _sorted_dyads(g)
    signs = _sign_vector(g, dyads)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(dyads))
    edges = {d: EdgeState(int(signs[perm[i]])) for i, d in enumerate(dyads)}
    return SignedGraph(g.year, g.nodes, edges)


def _triangle_edge_indices(g: SignedGraph, dyads) -> np.ndarray:
    """All closed triads as triples of indices into the sorted dyad list."""
    pk = g.packed()
    edge_idx = {d: i for i, d in enumerate(dyads)}
    rows = pk.both()
    order = pk.order
    tris: list[tuple[int, int, int]] = []
    for i, (a, b) in enumerate(dyads):
        ib = pk.index[b]
        masked = rows[pk.index[a]] & rows[ib]
        common = int.from_bytes(masked.astype("<u8").tobytes(), "little") >> (ib + 1)
        base = ib + 1
        while common:
            q = (common & -common).bit_length() - 1
            common &= common - 1
            c = int(order[base + q])
            tris.append((i, edge_idx[dyad(a, c)], edge_idx[dyad(b, c)]))
    if not tris:
        return np.empty((0, 3), dtype=np.int64)
    return np.array(tris, dtype=np.int64)


def sample_static(
    g: SignedGraph, cfg: SurrogateConfig, denominator: str = "closed"
) -> list[float]:
    """Balanced-triad fractions of ``cfg.n_samples`` sign-shuffle surrogates.

    Sample ``k`` uses the generator seeded by
    ``sample_seed(cfg.master_seed, g.year, k)`` and equals
    ``fraction_balanced(shuffle_signs(g, sample_seed(...)), denominator)``
    exactly.  Raises :class:`NoClosedTriadsError` when the topology has no
    closed triad (the statistic would be undefined for every sample).
    """
    dyads = _sorted_dyads(g)
    tri = _triangle_edge_indices(g, dyads)
    n_closed = len(tri)
    if n_closed == 0:
        raise NoClosedTriadsError(f"no closed triads in {g.year}; the shuffle null is undefined")
    if denominator == "closed":
        denom = n_closed
    elif denominator == "all":
        denom = comb(g.node_count(), 3)
    else:
        raise ValueError(f"denominator must be 'closed' or 'all', got {denominator!r}")
    neg = (_sign_vector(g, dyads) < 0).astype(np.uint8)
    m = len(dyads)
    values = []
    for k in range(cfg.n_samples):
        rng = np.random.default_rng(sample_seed(cfg.master_seed, g.year, k))
        neg_p = neg[rng.permutation(m)]
        odd = (neg_p[tri[:, 0]] + neg_p[tri[:, 1]] + neg_p[tri[:, 2]]) & 1
        values.append((n_closed - int(odd.sum())) / denom)
    return values


class _GrowthLayout:
    """Dyad-class partition of one year pair, shared by all growth samples.

    Classes are processed in the fixed order positive, negative, absent; each
    draw consumes exactly one permutation per class so that graph-building and
    direct-scoring paths stay on identical random streams.
    """

    def __init__(self, g_prev: SignedGraph, g_curr: SignedGraph, ctx: GrowthContext | None = None):
        _check_same_nodes(g_prev, g_curr)
        if ctx is not None:
            self.dyads = ctx.dyads
            index = ctx.index
            prev = ctx.prev_state
        else:
            nodes_sorted = sorted(g_prev.nodes)
            self.dyads = list(combinations(nodes_sorted, 2))
            index = {d: k for k, d in enumerate(self.dyads)}
            prev = np.zeros(len(self.dyads), dtype=np.int8)
            for d, s in g_prev.edges.items():
                prev[index[d]] = int(s)
        curr = np.zeros(len(self.dyads), dtype=np.int8)
        for d, s in g_curr.edges.items():
            curr[index[d]] = int(s)
        self.classes = []
        self.n_changes = 0
        for s in (1, -1, 0):
            members = np.nonzero(prev == s)[0]
            dests = curr[members]
            is_change = dests != s
            self.classes.append((members, dests, is_change))
            self.n_changes += int(is_change.sum())

    def draw(self, rng) -> tuple[np.ndarray, np.ndarray]:
        """One uniform reassignment; returns (changed dyad indices, new states)."""
        idx_parts, dest_parts = [], []
        for members, dests, is_change in self.classes:
            perm = rng.permutation(len(members))
            if not is_change.any():
                continue
            hits = np.nonzero(is_change[perm])[0]
            idx_parts.append(members[hits])
            dest_parts.append(dests[perm[hits]])
        if not idx_parts:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int8)
        return np.concatenate(idx_parts), np.concatenate(dest_parts)


def shuffle_growth(g_prev: SignedGraph, g_curr: SignedGraph, seed) -> SignedGraph:
    """Surrogate year-t snapshot conserving all dyad-state transition counts.

    Within each year t-1 state class the empirically observed destination
    states are kept as a multiset but reassigned to the class's dyads by a
    uniform permutation, so
    ``edge_transition_counts(g_prev, surrogate) == edge_transition_counts(g_prev, g_curr)``.
    """
    layout = _GrowthLayout(g_prev, g_curr)
    rng = np.random.default_rng(seed)
    idx, dest = layout.draw(rng)
    edges = dict(g_prev.edges)
    for k, d in zip(idx.tolist(), dest.tolist()):
        dy = layout.dyads[k]
        if d == 0:
            edges.pop(dy)
        else:
            edges[dy] = EdgeState(d)
    return SignedGraph(g_curr.year, g_prev.nodes, edges)


def sample_growth(
    g_prev: SignedGraph, g_curr: SignedGraph, cfg: SurrogateConfig
) -> list[BalanceDynamicsStats]:
    """Balance statistics of ``cfg.n_samples`` surrogate growths of one year.

    Sample ``k`` is the growth drawn with
    ``sample_seed(cfg.master_seed, g_curr.year, k)`` and matches scoring
    ``shuffle_growth`` output through the transition pipeline exactly.
    Raises :class:`NothingToRandomizeError` when the empirical year shows no
    dyad-state change at all.
    """
    ctx = GrowthContext(g_prev)
    layout = _GrowthLayout(g_prev, g_curr, ctx=ctx)
    if layout.n_changes == 0:
        raise NothingToRandomizeError(
            f"no dyad-state transitions into {g_curr.year}; growth surrogates are undefined"
        )
    n_triples = ctx.census_prev.n_triples
    out = []
    for k in range(cfg.n_samples):
        rng = np.random.default_rng(sample_seed(cfg.master_seed, g_curr.year, k))
        idx, dest = layout.draw(rng)
        counts = TriadTransitionCounts(ctx.joint_counts(idx, dest), n_triples)
        out.append(balance_dynamics_stats(triad_transition_probabilities(counts)))
    return out
