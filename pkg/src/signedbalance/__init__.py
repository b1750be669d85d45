"""Structural balance of yearly signed networks of alliance and rivalry.

The library builds yearly signed snapshots from dyadic records, measures
how balanced each year is (triad census, balanced fraction) and how triads
move between balanced, imbalanced and open states, and tests both against
permutation null models: sign shuffles for single years and
transition-conserving growth randomizations for consecutive-year pairs.
"""

from .census import TriadCensus, TriadState, census, classify_triad, fraction_balanced
from .errors import (
    EmptyGraphError,
    MissingNodeError,
    NoClosedTriadsError,
    NodeSetMismatchError,
    NoEdgesError,
    NothingToRandomizeError,
    RowParseLimitError,
    SchemaError,
    SignedBalanceError,
    UnresolvedLabelError,
    YearMismatchError,
)
from .graph import (
    EdgeState,
    NodeRegistry,
    SignedGraph,
    TemporalNetwork,
    common_subgraphs,
    dyad,
)
from .ingest import (
    AllianceRecord,
    MembershipInterval,
    Obligation,
    RivalryInterval,
    build_yearly_networks,
    load_edgelist,
    parse_alliances,
    parse_rivalries,
    parse_states,
    write_edgelist,
)
from .stats import Significance, SurrogateSummary, significance, zscore
from .surrogates import (
    SurrogateConfig,
    sample_growth,
    sample_seed,
    sample_static,
    shuffle_growth,
    shuffle_signs,
)
from .transitions import (
    BalanceDynamicsStats,
    EdgeTransitionCounts,
    TriadTransitionCounts,
    TriadTransitionMatrix,
    balance_dynamics_stats,
    changed_dyads,
    edge_transition_counts,
    triad_transition_counts,
    triad_transition_probabilities,
)

__version__ = "0.1.0"

__all__ = [
    "EdgeState",
    "NodeRegistry",
    "SignedGraph",
    "TemporalNetwork",
    "common_subgraphs",
    "dyad",
    "TriadState",
    "TriadCensus",
    "census",
    "classify_triad",
    "fraction_balanced",
    "EdgeTransitionCounts",
    "TriadTransitionCounts",
    "TriadTransitionMatrix",
    "BalanceDynamicsStats",
    "changed_dyads",
    "edge_transition_counts",
    "triad_transition_counts",
    "triad_transition_probabilities",
    "balance_dynamics_stats",
    "SurrogateConfig",
    "sample_seed",
    "shuffle_signs",
    "sample_static",
    "shuffle_growth",
    "sample_growth",
    "SurrogateSummary",
    "Significance",
    "zscore",
    "significance",
    "Obligation",
    "MembershipInterval",
    "AllianceRecord",
    "RivalryInterval",
    "parse_states",
    "parse_alliances",
    "parse_rivalries",
    "build_yearly_networks",
    "write_edgelist",
    "load_edgelist",
    "SignedBalanceError",
    "MissingNodeError",
    "EmptyGraphError",
    "NoEdgesError",
    "NoClosedTriadsError",
    "YearMismatchError",
    "NodeSetMismatchError",
    "NothingToRandomizeError",
    "SchemaError",
    "RowParseLimitError",
    "UnresolvedLabelError",
]
