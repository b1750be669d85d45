"""Exception types shared across the package."""


class SignedBalanceError(Exception):
    """Base class for all errors raised by this package."""


class MissingNodeError(SignedBalanceError):
    """A dyad endpoint is not part of the graph's node set."""


class EmptyGraphError(SignedBalanceError):
    """An operation that needs at least one node was given an empty graph."""


class NoEdgesError(SignedBalanceError):
    """An operation that needs at least one edge was given an edgeless graph."""


class NoClosedTriadsError(SignedBalanceError):
    """The balance fraction is undefined because no triad is closed."""


class YearMismatchError(SignedBalanceError):
    """Two snapshots expected to cover consecutive years do not."""


class NodeSetMismatchError(SignedBalanceError):
    """Two snapshots expected to share a node set do not."""


class NothingToRandomizeError(SignedBalanceError):
    """No edge-state transitions occurred, so growth surrogates cannot be drawn.

    This is a signal rather than a failure: callers typically render the
    year with a dedicated marker instead of aborting.
    """


class SchemaError(SignedBalanceError):
    """An input file is missing a required column or is otherwise unreadable."""


class RowParseLimitError(SignedBalanceError):
    """More malformed rows were encountered than the parser tolerates."""


class UnresolvedLabelError(SignedBalanceError):
    """A record references a state that the membership data does not know."""

    def __init__(self, labels):
        self.labels = sorted(set(labels))
        super().__init__(f"unresolved state references: {', '.join(map(str, self.labels))}")
