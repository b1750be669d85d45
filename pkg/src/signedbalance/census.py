"""Triad classification and per-snapshot balance censuses.

A node triple is *closed* when all three of its dyads carry an edge.  Closed
triads with an even number of negative edges (0 or 2) are balanced, the others
(1 or 3 negatives) are imbalanced, and triples with at least one absent dyad
are open -- including fully edge-free triples, so the three states partition
all C(n, 3) triples.

The census walks edges rather than triples: for every edge the common
neighbours of its endpoints are split by sign through bitset-row
intersections, which counts each closed triad once per edge (three times in
total).  Open triples are obtained by difference.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from math import comb

import numpy as np

from .errors import NoClosedTriadsError
from .graph import EdgeState, SignedGraph

__all__ = [
    "TriadState",
    "TriadCensus",
    "classify_triad",
    "census",
    "fraction_balanced",
]


class TriadState(IntEnum):
    IMBALANCED = -1
    OPEN = 0
    BALANCED = 1


def classify_triad(s_ab: EdgeState, s_bc: EdgeState, s_ac: EdgeState) -> TriadState:
    """Classify a triple from the states of its three dyads (order-free)."""
    states = (s_ab, s_bc, s_ac)
    if EdgeState.ABSENT in states:
        return TriadState.OPEN
    n_neg = sum(1 for s in states if s is EdgeState.NEGATIVE)
    return TriadState.BALANCED if n_neg % 2 == 0 else TriadState.IMBALANCED


@dataclass(frozen=True)
class TriadCensus:
    """Counts of balanced, imbalanced, and open triples of one snapshot."""

    n_balanced: int
    n_imbalanced: int
    n_open: int

    @property
    def n_closed(self) -> int:
        return self.n_balanced + self.n_imbalanced

    @property
    def n_triples(self) -> int:
        return self.n_balanced + self.n_imbalanced + self.n_open

    def fraction_balanced(self, denominator: str = "closed") -> float:
        """Balanced share, over closed triads (default) or all triples."""
        if denominator == "closed":
            if self.n_closed == 0:
                raise NoClosedTriadsError("no closed triads")
            return self.n_balanced / self.n_closed
        if denominator == "all":
            if self.n_triples == 0:
                raise NoClosedTriadsError("no triples at all")
            return self.n_balanced / self.n_triples
        raise ValueError(f"denominator must be 'closed' or 'all', got {denominator!r}")


def census(g: SignedGraph) -> TriadCensus:
    """Count balanced/imbalanced/open triples over all C(n, 3) node triples."""
    n = g.node_count()
    n_triples = comb(n, 3)
    if g.edge_count() == 0:
        return TriadCensus(0, 0, n_triples)

    pk = g.packed()
    dyads = sorted(g.edges)
    eu = np.fromiter((pk.index[a] for a, _ in dyads), dtype=np.int64, count=len(dyads))
    ev = np.fromiter((pk.index[b] for _, b in dyads), dtype=np.int64, count=len(dyads))
    is_pos = np.fromiter(
        (g.edges[d] is EdgeState.POSITIVE for d in dyads), dtype=bool, count=len(dyads)
    )

    cpp = np.bitwise_count(pk.pos[eu] & pk.pos[ev]).sum(axis=1, dtype=np.int64)
    cpn = np.bitwise_count(pk.pos[eu] & pk.neg[ev]).sum(axis=1, dtype=np.int64)
    cnp = np.bitwise_count(pk.neg[eu] & pk.pos[ev]).sum(axis=1, dtype=np.int64)
    cnn = np.bitwise_count(pk.neg[eu] & pk.neg[ev]).sum(axis=1, dtype=np.int64)

    # even total sign parity around the edge -> balanced; each closed triad is
    # seen from its three edges
    same = cpp + cnn
    cross = cpn + cnp
    bal3 = int(same[is_pos].sum() + cross[~is_pos].sum())
    imb3 = int(cross[is_pos].sum() + same[~is_pos].sum())
    assert bal3 % 3 == 0 and imb3 % 3 == 0
    n_bal, n_imb = bal3 // 3, imb3 // 3
    return TriadCensus(n_bal, n_imb, n_triples - n_bal - n_imb)


def fraction_balanced(g: SignedGraph, denominator: str = "closed") -> float:
    """Balanced fraction of a snapshot; see :meth:`TriadCensus.fraction_balanced`."""
    return census(g).fraction_balanced(denominator)
