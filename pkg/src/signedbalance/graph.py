"""Signed yearly network snapshots and their basic statistics.

A snapshot (:class:`SignedGraph`) is an immutable, simple, undirected graph
whose dyads carry one of three states: positive, negative, or absent.  Only
non-absent dyads are stored; looking up any other pair of known nodes yields
:attr:`EdgeState.ABSENT`.  Node identity is kept stable across years through a
:class:`NodeRegistry` owned by the :class:`TemporalNetwork`, so snapshots store
plain integer ids.

For triad-counting hot paths each snapshot exposes packed bitset adjacency
rows (one positive and one negative row per node, 64 nodes per machine word),
built lazily and cached.  Snapshots are immutable after construction and safe
to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import (
    EmptyGraphError,
    MissingNodeError,
    NoEdgesError,
    UnresolvedLabelError,
    YearMismatchError,
)

__all__ = [
    "EdgeState",
    "NodeId",
    "NodeRegistry",
    "SignedGraph",
    "TemporalNetwork",
    "dyad",
    "common_subgraphs",
]


class EdgeState(IntEnum):
    """State of a dyad: positive tie, negative tie, or no tie."""

    POSITIVE = 1
    NEGATIVE = -1
    ABSENT = 0


@dataclass(frozen=True)
class NodeId:
    """A registered node: opaque non-negative id plus a short text label."""

    id: int
    label: str

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"node id must be non-negative, got {self.id}")
        if not self.label:
            raise ValueError("node label must be non-empty")


class NodeRegistry:
    """Bidirectional id/label registry shared by all snapshots of a network."""

    def __init__(self) -> None:
        self._by_id: dict[int, NodeId] = {}
        self._by_label: dict[str, NodeId] = {}

    def add(self, label: str, node_id: int | None = None) -> NodeId:
        """Register ``label``, returning the existing entry if already known.

        When ``node_id`` is omitted the next free id is assigned.  Re-adding a
        label with a conflicting id (or an id with a conflicting label) is an
        error.
        """
        if label in self._by_label:
            node = self._by_label[label]
            if node_id is not None and node.id != node_id:
                raise ValueError(f"label {label!r} already registered with id {node.id}")
            return node
        if node_id is None:
            node_id = max(self._by_id, default=-1) + 1
        if node_id in self._by_id:
            raise ValueError(
                f"id {node_id} already registered for label {self._by_id[node_id].label!r}"
            )
        node = NodeId(node_id, label)
        self._by_id[node_id] = node
        self._by_label[label] = node
        return node

    def id_of(self, label: str) -> int:
        try:
            return self._by_label[label].id
        except KeyError:
            raise UnresolvedLabelError([label]) from None

    def label_of(self, node_id: int) -> str:
        return self._by_id[node_id].label

    def __contains__(self, label: str) -> bool:
        return label in self._by_label

    def __len__(self) -> int:
        return len(self._by_id)

    def __iter__(self) -> Iterator[NodeId]:
        return iter(sorted(self._by_id.values(), key=lambda n: n.id))


def dyad(a: int, b: int) -> tuple[int, int]:
    """Canonical unordered pair: distinct node ids sorted ascending."""
    if a == b:
        raise ValueError(f"self-loop dyad ({a}, {a})")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class PackedAdjacency:
    """Bitset adjacency rows of a snapshot, one bit per node position.

    ``order`` lists node ids ascending; bit ``p`` of row ``i`` (word ``p // 64``,
    bit ``p % 64``) is set when the node at position ``i`` has an edge of the
    row's sign to the node at position ``p``.
    """

    order: np.ndarray  # (n,) node ids, ascending
    index: dict  # node id -> position
    pos: np.ndarray  # (n, W) uint64
    neg: np.ndarray  # (n, W) uint64

    @property
    def n(self) -> int:
        return len(self.order)

    def both(self) -> np.ndarray:
        """Rows for edges of either sign."""
        return self.pos | self.neg


def _pack_rows(nodes: frozenset, edges: Mapping) -> PackedAdjacency:
    order = np.array(sorted(nodes), dtype=np.int64)
    index = {int(v): i for i, v in enumerate(order)}
    n = len(order)
    words = max(1, (n + 63) // 64)
    pos = np.zeros((n, words), dtype=np.uint64)
    neg = np.zeros((n, words), dtype=np.uint64)
    for (a, b), state in edges.items():
        ia, ib = index[a], index[b]
        rows = pos if state is EdgeState.POSITIVE else neg
        rows[ia, ib >> 6] |= np.uint64(1 << (ib & 63))
        rows[ib, ia >> 6] |= np.uint64(1 << (ia & 63))
    return PackedAdjacency(order, index, pos, neg)


class SignedGraph:
    """One yearly snapshot: a node set and a map of canonical dyads to signs.

    Parameters
    ----------
    year : int
        Calendar year the snapshot describes.
    nodes : iterable of int
        Node ids present in the year (isolated nodes included).
    edges : mapping
        ``(a, b) -> EdgeState`` with ``a < b``; only POSITIVE/NEGATIVE entries
        are allowed (absent dyads are simply not stored).
    """

    __slots__ = ("year", "_nodes", "_edges", "_packed")

    def __init__(self, year: int, nodes: Iterable[int], edges: Mapping[tuple[int, int], EdgeState]):
        node_set = frozenset(int(v) for v in nodes)
        stored: dict[tuple[int, int], EdgeState] = {}
        for (a, b), state in edges.items():
            state = EdgeState(state)
            if state is EdgeState.ABSENT:
                raise ValueError(f"absent dyad ({a}, {b}) must not be stored")
            if a == b:
                raise ValueError(f"self-loop ({a}, {a})")
            if a > b:
                raise ValueError(f"dyad ({a}, {b}) is not canonically ordered")
            if a not in node_set or b not in node_set:
                raise MissingNodeError(f"edge ({a}, {b}) has an endpoint outside the node set")
            stored[(int(a), int(b))] = state
        object.__setattr__(self, "year", int(year))
        object.__setattr__(self, "_nodes", node_set)
        object.__setattr__(self, "_edges", stored)
        object.__setattr__(self, "_packed", None)

    def __setattr__(self, name, value):
        raise AttributeError("SignedGraph is immutable")

    @property
    def nodes(self) -> frozenset:
        return self._nodes

    @property
    def edges(self) -> Mapping[tuple[int, int], EdgeState]:
        return MappingProxyType(self._edges)

    def edge_state(self, a: int, b: int) -> EdgeState:
        """Stored sign of the dyad ``{a, b}``, or ABSENT when unstored.

        Raises :class:`MissingNodeError` if either endpoint is not a node of
        this snapshot.
        """
        for v in (a, b):
            if v not in self._nodes:
                raise MissingNodeError(f"node {v} is not in the {self.year} snapshot")
        return self._edges.get(dyad(a, b), EdgeState.ABSENT)

    def node_count(self) -> int:
        return len(self._nodes)

    def edge_count(self) -> int:
        return len(self._edges)

    def edge_counts(self) -> tuple[int, int]:
        """(number of positive edges, number of negative edges)."""
        n_pos = sum(1 for s in self._edges.values() if s is EdgeState.POSITIVE)
        return n_pos, len(self._edges) - n_pos

    def average_degree(self) -> float:
        """Mean degree counting edges of both signs."""
        if not self._nodes:
            raise EmptyGraphError(f"average degree undefined for the empty {self.year} snapshot")
        return 2.0 * len(self._edges) / len(self._nodes)

    def fraction_positive_edges(self) -> float:
        n_pos, n_neg = self.edge_counts()
        if n_pos + n_neg == 0:
            raise NoEdgesError(f"no edges in {self.year}")
        return n_pos / (n_pos + n_neg)

    def packed(self) -> PackedAdjacency:
        """Bitset adjacency rows, built on first use and cached."""
        if self._packed is None:
            object.__setattr__(self, "_packed", _pack_rows(self._nodes, self._edges))
        return self._packed

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignedGraph):
            return NotImplemented
        return (
            self.year == other.year
            and self._nodes == other._nodes
            and self._edges == other._edges
        )

    def __hash__(self):
        return hash((self.year, self._nodes, frozenset(self._edges.items())))

    def __repr__(self) -> str:
        n_pos, n_neg = self.edge_counts()
        return f"SignedGraph(year={self.year}, nodes={len(self._nodes)}, +{n_pos}/-{n_neg})"

    # the packed cache is rebuilt on demand after unpickling
    def __getstate__(self):
        return (self.year, self._nodes, self._edges)

    def __setstate__(self, state):
        year, nodes, edges = state
        object.__setattr__(self, "year", year)
        object.__setattr__(self, "_nodes", nodes)
        object.__setattr__(self, "_edges", edges)
        object.__setattr__(self, "_packed", None)


def common_subgraphs(g_prev: SignedGraph, g_curr: SignedGraph) -> tuple[SignedGraph, SignedGraph]:
    """Restrict two consecutive snapshots to their shared node set.

    Edges with an endpoint outside the intersection are dropped; years are
    preserved.  Raises :class:`YearMismatchError` unless
    ``g_curr.year == g_prev.year + 1``.
    """
    if g_prev.year + 1 != g_curr.year:
        raise YearMismatchError(
            f"snapshots must cover consecutive years, got {g_prev.year} and {g_curr.year}"
        )
    shared = g_prev.nodes & g_curr.nodes

    def restrict(g: SignedGraph) -> SignedGraph:
        if g.nodes == shared:
            return g
        kept = {d: s for d, s in g.edges.items() if d[0] in shared and d[1] in shared}
        return SignedGraph(g.year, shared, kept)

    return restrict(g_prev), restrict(g_curr)


class TemporalNetwork:
    """Ordered yearly snapshots over a contiguous year range."""

    def __init__(self, registry: NodeRegistry, snapshots: Iterable[SignedGraph]):
        snaps = sorted(snapshots, key=lambda g: g.year)
        if not snaps:
            raise ValueError("a temporal network needs at least one snapshot")
        years = [g.year for g in snaps]
        expected = list(range(years[0], years[0] + len(years)))
        if years != expected:
            raise ValueError(f"snapshot years are not contiguous: {years}")
        for g in snaps:
            for v in g.nodes:
                registry.label_of(v)  # KeyError -> unregistered node
        self.registry = registry
        self._snapshots = {g.year: g for g in snaps}
        self.start_year = years[0]
        self.end_year = years[-1]

    def years(self) -> range:
        return range(self.start_year, self.end_year + 1)

    def snapshot(self, year: int) -> SignedGraph:
        try:
            return self._snapshots[year]
        except KeyError:
            raise KeyError(f"year {year} outside [{self.start_year}, {self.end_year}]") from None

    def __iter__(self) -> Iterator[SignedGraph]:
        return (self._snapshots[y] for y in self.years())

    def __len__(self) -> int:
        return len(self._snapshots)

    def __eq__(self, other) -> bool:
        """Label-level equality: same years, node labels, and signed edges."""
        if not isinstance(other, TemporalNetwork):
            return NotImplemented
        if (self.start_year, self.end_year) != (other.start_year, other.end_year):
            return False
        for year in self.years():
            a, b = self.snapshot(year), other.snapshot(year)
            if {self.registry.label_of(v) for v in a.nodes} != {
                other.registry.label_of(v) for v in b.nodes
            }:
                return False
            ea = {
                frozenset((self.registry.label_of(d[0]), self.registry.label_of(d[1]))): s
                for d, s in a.edges.items()
            }
            eb = {
                frozenset((other.registry.label_of(d[0]), other.registry.label_of(d[1]))): s
                for d, s in b.edges.items()
            }
            if ea != eb:
                return False
        return True
