"""Parsers for the raw dyadic datasets and the normalized edge-list format.

Three raw inputs feed the yearly network builder: a state-system membership
CSV (who is a sovereign state when), a dyadic alliance CSV with obligation
flags, and a rivalry CSV of antagonist pairs with year intervals.  Headers
are matched by name, extra columns are ignored, and malformed rows are
reported with line numbers and tolerated up to a limit -- silent skipping is
never allowed.

The normalized output is a pair of CSVs: an edge list
(``year,node_a,node_b,sign`` with sign ``+``/``-``) and a companion
membership file (``year,node``) that carries isolated nodes.  Writing and
re-loading them reproduces the network exactly.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from pathlib import Path

from .errors import RowParseLimitError, SchemaError, UnresolvedLabelError
from .graph import EdgeState, NodeRegistry, SignedGraph, TemporalNetwork, dyad

__all__ = [
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
    "default_nodes_path",
]

log = logging.getLogger(__name__)

#: Year at which open-ended membership or alliance records are truncated.
DATA_HORIZON_YEAR = 2016


class Obligation(Enum):
    OFFENSE = "offense"
    DEFENSE = "defense"
    NEUTRALITY = "neutrality"
    NONAGGRESSION = "nonaggression"
    CONSULTATION = "consultation"


_OBLIGATION_COLUMNS = {
    "offense": Obligation.OFFENSE,
    "defense": Obligation.DEFENSE,
    "neutral": Obligation.NEUTRALITY,
    "nonagg": Obligation.NONAGGRESSION,
    "consul": Obligation.CONSULTATION,
}


@dataclass(frozen=True)
class MembershipInterval:
    """One continuous stretch of state-system membership."""

    state_label: str
    state_number: int
    start_date: date
    end_date: date

    def overlaps_year(self, year: int) -> bool:
        return self.start_date.year <= year <= self.end_date.year

    def contains(self, day: date) -> bool:
        return self.start_date <= day <= self.end_date


@dataclass(frozen=True)
class AllianceRecord:
    """One dyadic alliance phase; ccodes are stored canonically ordered."""

    state_a: int
    state_b: int
    start_date: date
    end_date: date
    obligations: frozenset

    @property
    def is_positive_candidate(self) -> bool:
        """Only offense or defense obligations create positive edges."""
        return bool(self.obligations & {Obligation.OFFENSE, Obligation.DEFENSE})

    @property
    def inert(self) -> bool:
        return not self.is_positive_candidate


@dataclass(frozen=True)
class RivalryInterval:
    """A sustained antagonistic dyad, by state label, over inclusive years."""

    state_a: str
    state_b: str
    start_year: int
    end_year: int

    def active_in(self, year: int) -> bool:
        return self.start_year <= year <= self.end_year


class _RowErrors:
    """Collects malformed-row reports; raises once the limit is exceeded."""

    def __init__(self, path, limit: int):
        self.path = path
        self.limit = limit
        self.items: list[tuple[int, str]] = []

    def add(self, line_num: int, message: str) -> None:
        self.items.append((line_num, message))
        log.warning("%s:%d: %s", self.path, line_num, message)
        if len(self.items) > self.limit:
            raise RowParseLimitError(
                f"{self.path}: more than {self.limit} malformed rows; giving up"
            )


def _open_csv(path, required: set[str]):
    path = Path(path)
    try:
        handle = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    reader = csv.DictReader(handle)
    names = set(reader.fieldnames or [])
    missing = required - names
    if missing:
        handle.close()
        raise SchemaError(f"{path}: missing column(s) {', '.join(sorted(missing))}")
    return handle, reader


def _int_field(value, name: str, default=None) -> int:
    value = (value or "").strip()
    if not value:
        if default is None:
            raise ValueError(f"missing {name}")
        return default
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"bad {name}: {value!r}") from None


def parse_states(
    path, default_end_year: int = DATA_HORIZON_YEAR, max_bad_rows: int = 20
) -> list[MembershipInterval]:
    """Parse the state-system membership CSV.

    Blank exit dates are read as open intervals truncated at
    ``default_end_year``; missing entry month/day default to January 1 and
    missing exit month/day to December 31.
    """
    handle, reader = _open_csv(
        path, {"stateabb", "ccode", "styear", "stmonth", "stday", "endyear", "endmonth", "endday"}
    )
    errors = _RowErrors(path, max_bad_rows)
    out: list[MembershipInterval] = []
    with handle:
        for row in reader:
            try:
                label = (row["stateabb"] or "").strip()
                if not label:
                    raise ValueError("missing stateabb")
                ccode = _int_field(row["ccode"], "ccode")
                styear = _int_field(row["styear"], "styear")
                start = date(
                    styear,
                    _int_field(row["stmonth"], "stmonth", default=1),
                    _int_field(row["stday"], "stday", default=1),
                )
                endyear = _int_field(row["endyear"], "endyear", default=0)
                if endyear == 0:
                    end = date(default_end_year, 12, 31)
                else:
                    end = date(
                        endyear,
                        _int_field(row["endmonth"], "endmonth", default=12),
                        _int_field(row["endday"], "endday", default=31),
                    )
                if start > end:
                    raise ValueError(f"entry {start} after exit {end}")
                out.append(MembershipInterval(label, ccode, start, end))
            except ValueError as exc:
                errors.add(reader.line_num, str(exc))
    _check_interval_overlaps(out, path, errors)
    return out


def _check_interval_overlaps(intervals, path, errors) -> None:
    by_state: dict[int, list[MembershipInterval]] = {}
    for iv in intervals:
        by_state.setdefault(iv.state_number, []).append(iv)
    for ccode, ivs in by_state.items():
        ivs.sort(key=lambda iv: iv.start_date)
        for prev, curr in zip(ivs, ivs[1:]):
            if curr.start_date <= prev.end_date:
                log.warning(
                    "%s: overlapping membership intervals for state %d (%s)",
                    path,
                    ccode,
                    curr.state_label,
                )


def parse_alliances(
    path, default_end_year: int = DATA_HORIZON_YEAR, max_bad_rows: int = 20
) -> list[AllianceRecord]:
    """Parse the dyadic alliance CSV.

    All records are returned, including inert ones (no offense/defense
    obligation); the builder ignores those when creating positive edges.
    Reversed duplicates collapse onto the canonical dyad.
    """
    handle, reader = _open_csv(
        path, {"mem1", "mem2", "yrent", "yrexit"} | set(_OBLIGATION_COLUMNS)
    )
    errors = _RowErrors(path, max_bad_rows)
    seen: set = set()
    out: list[AllianceRecord] = []
    with handle:
        for row in reader:
            try:
                m1 = _int_field(row["mem1"], "mem1")
                m2 = _int_field(row["mem2"], "mem2")
                if m1 == m2:
                    raise ValueError(f"self-dyad {m1}")
                yrent = _int_field(row["yrent"], "yrent")
                yrexit = _int_field(row["yrexit"], "yrexit", default=0)
                if yrexit == 0:
                    yrexit = default_end_year
                if yrent > yrexit:
                    raise ValueError(f"yrent {yrent} after yrexit {yrexit}")
                obligations = set()
                for col, obligation in _OBLIGATION_COLUMNS.items():
                    flag = _int_field(row[col], col, default=0)
                    if flag not in (0, 1):
                        raise ValueError(f"bad {col} flag: {flag}")
                    if flag:
                        obligations.add(obligation)
                record = AllianceRecord(
                    min(m1, m2),
                    max(m1, m2),
                    date(yrent, 1, 1),
                    date(yrexit, 12, 31),
                    frozenset(obligations),
                )
                key = (record.state_a, record.state_b, record.start_date, record.end_date,
                       record.obligations)
                if key in seen:
                    log.debug("%s:%d: duplicate alliance record dropped", path, reader.line_num)
                    continue
                seen.add(key)
                out.append(record)
            except ValueError as exc:
                errors.add(reader.line_num, str(exc))
    return out


def parse_rivalries(path, known_labels=None, max_bad_rows: int = 20) -> list[RivalryInterval]:
    """Parse the normalized rivalry CSV (``state_a,state_b,start_year,end_year``).

    When ``known_labels`` is given, any label outside it raises
    :class:`UnresolvedLabelError` after the file has been read.
    """
    handle, reader = _open_csv(path, {"state_a", "state_b", "start_year", "end_year"})
    errors = _RowErrors(path, max_bad_rows)
    out: list[RivalryInterval] = []
    unresolved: set[str] = set()
    with handle:
        for row in reader:
            try:
                a = (row["state_a"] or "").strip()
                b = (row["state_b"] or "").strip()
                if not a or not b:
                    raise ValueError("missing state label")
                if a == b:
                    raise ValueError(f"self-rivalry {a}")
                start = _int_field(row["start_year"], "start_year")
                end = _int_field(row["end_year"], "end_year")
                if start > end:
                    raise ValueError(f"start_year {start} after end_year {end}")
                if known_labels is not None:
                    for lab in (a, b):
                        if lab not in known_labels:
                            unresolved.add(lab)
                out.append(RivalryInterval(min(a, b), max(a, b), start, end))
            except ValueError as exc:
                errors.add(reader.line_num, str(exc))
    if unresolved:
        raise UnresolvedLabelError(unresolved)
    return out


def build_yearly_networks(
    states: list[MembershipInterval],
    alliances: list[AllianceRecord],
    rivalries: list[RivalryInterval],
    start_year: int,
    end_year: int,
    convention: str = "overlap",
) -> TemporalNetwork:
    """Construct the yearly signed network from parsed records.

    For each year, nodes are the states whose membership touches the year; a
    dyad is negative when any rivalry is active (whether or not the pair is
    also allied), positive when at least one offense/defense alliance is
    active and no rivalry is, and absent otherwise.  Edges incident to
    non-member states are dropped.

    ``convention`` picks what "in the year" means: ``"overlap"`` (default,
    any overlap with the calendar year) or ``"jan1"`` (status on January 1).
    """
    if start_year > end_year:
        raise ValueError(f"empty year range {start_year}:{end_year}")
    if convention not in ("overlap", "jan1"):
        raise ValueError(f"convention must be 'overlap' or 'jan1', got {convention!r}")

    registry = NodeRegistry()
    label_by_ccode: dict[int, str] = {}
    for iv in states:
        existing = label_by_ccode.get(iv.state_number)
        if existing is not None and existing != iv.state_label:
            raise SchemaError(
                f"state number {iv.state_number} has conflicting labels "
                f"{existing!r} and {iv.state_label!r}"
            )
        label_by_ccode[iv.state_number] = iv.state_label
    for ccode in sorted(label_by_ccode):
        registry.add(label_by_ccode[ccode], ccode)

    unresolved: list = []
    for rec in alliances:
        for ccode in (rec.state_a, rec.state_b):
            if ccode not in label_by_ccode:
                unresolved.append(ccode)
    for riv in rivalries:
        for label in (riv.state_a, riv.state_b):
            if label not in registry:
                unresolved.append(label)
    if unresolved:
        raise UnresolvedLabelError(unresolved)

    def member_in(iv: MembershipInterval, year: int) -> bool:
        if convention == "overlap":
            return iv.overlaps_year(year)
        return iv.contains(date(year, 1, 1))

    def record_active(start: date, end: date, year: int) -> bool:
        if convention == "overlap":
            return start.year <= year <= end.year
        return start <= date(year, 1, 1) <= end

    snapshots = []
    for year in range(start_year, end_year + 1):
        members = {iv.state_number for iv in states if member_in(iv, year)}
        edges: dict[tuple[int, int], EdgeState] = {}
        for rec in alliances:
            if not rec.is_positive_candidate:
                continue
            if rec.state_a in members and rec.state_b in members and record_active(
                rec.start_date, rec.end_date, year
            ):
                edges[dyad(rec.state_a, rec.state_b)] = EdgeState.POSITIVE
        for riv in rivalries:
            if not riv.active_in(year):
                continue
            a = registry.id_of(riv.state_a)
            b = registry.id_of(riv.state_b)
            if a in members and b in members:
                edges[dyad(a, b)] = EdgeState.NEGATIVE  # rivalry overrides alliance
        if not members:
            log.warning("no member states in %d; snapshot is empty", year)
        snapshots.append(SignedGraph(year, members, edges))
    return TemporalNetwork(registry, snapshots)


def default_nodes_path(edges_path) -> Path:
    """Companion membership CSV path for an edge-list file."""
    p = Path(edges_path)
    return p.with_name(p.stem + ".nodes" + (p.suffix or ".csv"))


_SIGN_TOKEN = {EdgeState.POSITIVE: "+", EdgeState.NEGATIVE: "-"}
_TOKEN_SIGN = {"+": EdgeState.POSITIVE, "-": EdgeState.NEGATIVE}


def write_edgelist(net: TemporalNetwork, path, nodes_path=None) -> None:
    """Write the normalized edge-list CSV and its membership companion.

    Rows are fully sorted, so the output is byte-deterministic for a given
    network.
    """
    path = Path(path)
    nodes_path = Path(nodes_path) if nodes_path is not None else default_nodes_path(path)
    reg = net.registry
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["year", "node_a", "node_b", "sign"])
        for g in net:
            rows = []
            for (a, b), state in g.edges.items():
                la, lb = sorted((reg.label_of(a), reg.label_of(b)))
                rows.append((la, lb, _SIGN_TOKEN[state]))
            for la, lb, token in sorted(rows):
                writer.writerow([g.year, la, lb, token])
    with nodes_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["year", "node"])
        for g in net:
            for label in sorted(reg.label_of(v) for v in g.nodes):
                writer.writerow([g.year, label])


def load_edgelist(path, nodes_path=None, years=None, max_bad_rows: int = 20) -> TemporalNetwork:
    """Load a normalized edge-list CSV (plus membership companion) back.

    ``years`` declares the (start, end) range; when omitted it is inferred
    from the files, which then must not be empty.  A missing companion file
    degrades gracefully: node sets are inferred from edge endpoints.
    """
    path = Path(path)
    nodes_path = Path(nodes_path) if nodes_path is not None else default_nodes_path(path)

    members: dict[int, set[str]] = {}
    if nodes_path.exists():
        handle, reader = _open_csv(nodes_path, {"year", "node"})
        errors = _RowErrors(nodes_path, max_bad_rows)
        with handle:
            for row in reader:
                try:
                    year = _int_field(row["year"], "year")
                    label = (row["node"] or "").strip()
                    if not label:
                        raise ValueError("missing node label")
                    members.setdefault(year, set()).add(label)
                except ValueError as exc:
                    errors.add(reader.line_num, str(exc))
    else:
        log.warning("%s not found; node sets will be inferred from edges", nodes_path)

    handle, reader = _open_csv(path, {"year", "node_a", "node_b", "sign"})
    errors = _RowErrors(path, max_bad_rows)
    edge_rows: dict[int, dict[frozenset, EdgeState]] = {}
    with handle:
        for row in reader:
            try:
                year = _int_field(row["year"], "year")
                a = (row["node_a"] or "").strip()
                b = (row["node_b"] or "").strip()
                if not a or not b:
                    raise ValueError("missing node label")
                if a == b:
                    raise ValueError(f"self-loop on {a}")
                token = (row["sign"] or "").strip()
                if token not in _TOKEN_SIGN:
                    raise ValueError(f"bad sign token {token!r} (expected '+' or '-')")
                key = frozenset((a, b))
                year_edges = edge_rows.setdefault(year, {})
                if key in year_edges:
                    raise ValueError(f"duplicate edge {a}-{b} in {year}")
                year_edges[key] = _TOKEN_SIGN[token]
            except ValueError as exc:
                errors.add(reader.line_num, str(exc))

    seen_years = set(members) | set(edge_rows)
    if years is None:
        if not seen_years:
            raise SchemaError(f"{path}: no rows and no declared year range")
        start_year, end_year = min(seen_years), max(seen_years)
    else:
        start_year, end_year = years
        if start_year > end_year:
            raise ValueError(f"empty year range {start_year}:{end_year}")

    labels = set()
    for year_members in members.values():
        labels |= year_members
    for year_edges in edge_rows.values():
        for key in year_edges:
            labels |= key
    registry = NodeRegistry()
    for label in sorted(labels):
        registry.add(label)

    snapshots = []
    for year in range(start_year, end_year + 1):
        node_labels = set(members.get(year, set()))
        for key in edge_rows.get(year, {}):
            for label in key:
                if label not in node_labels:
                    if year in members:
                        log.warning(
                            "%s: %d edge endpoint %s missing from membership file", path, year, label
                        )
                    node_labels.add(label)
        nodes = {registry.id_of(lab) for lab in node_labels}
        edges = {}
        for key, state in edge_rows.get(year, {}).items():
            a, b = sorted(key)
            edges[dyad(registry.id_of(a), registry.id_of(b))] = state
        snapshots.append(SignedGraph(year, nodes, edges))
    return TemporalNetwork(registry, snapshots)
