"""Per-year report assembly: CSV rows, parallel execution, deterministic IO.

Everything here is plumbing around the measurement modules.  Rows are built
year by year, optionally fanned out over worker processes, and written with
a fixed column order and fixed float formatting ("%.6g"), so output bytes
depend only on the inputs, the configuration, and the master seed -- never
on worker count or scheduling.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .census import fraction_balanced
from .errors import NoClosedTriadsError, NothingToRandomizeError
from .graph import SignedGraph, TemporalNetwork, common_subgraphs
from .ingest import (
    build_yearly_networks,
    load_edgelist,
    parse_alliances,
    parse_rivalries,
    parse_states,
)
from .stats import zscore
from .surrogates import SurrogateConfig, sample_growth, sample_static
from .transitions import (
    BalanceDynamicsStats,
    balance_dynamics_stats,
    triad_transition_counts,
    triad_transition_probabilities,
)

__all__ = [
    "RunConfig",
    "load_network",
    "summary_rows",
    "static_z_rows",
    "growth_z_rows",
    "write_csv",
    "write_run_config",
    "dot_description",
    "SUMMARY_HEADER",
    "STATIC_Z_HEADER",
    "GROWTH_Z_HEADER",
    "FLAG_NOTHING_TO_RANDOMIZE",
    "FLAG_UNDEFINED",
    "FLAG_DEGENERATE",
]

log = logging.getLogger(__name__)

SUMMARY_HEADER = ["year", "n_nodes", "avg_degree", "frac_positive", "frac_balanced"]
STATIC_Z_HEADER = ["year", "empirical", "mean", "std", "z", "degenerate"]
GROWTH_Z_HEADER = ["year", "stat_name", "empirical", "mean", "std", "z", "flag"]

FLAG_NOTHING_TO_RANDOMIZE = "nothing_to_randomize"
FLAG_UNDEFINED = "undefined"
FLAG_DEGENERATE = "degenerate"

DEFAULT_YEARS = (1816, 2009)


@dataclass
class RunConfig:
    """Resolved run configuration; the CLI fills this from flags and file."""

    edgelist: Path | None = None
    nodes: Path | None = None
    states: Path | None = None
    alliances: Path | None = None
    rivalries: Path | None = None
    years: tuple[int, int] | None = None
    samples: int = 1000
    seed: int = 0
    out: Path = field(default_factory=lambda: Path("out"))
    denominator: str = "closed"
    std: str = "population"
    jobs: int = 1
    figures: bool = True
    convention: str = "overlap"

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")
        if self.denominator not in ("closed", "all"):
            raise ValueError(f"denominator must be 'closed' or 'all', got {self.denominator!r}")
        if self.std not in ("population", "sample"):
            raise ValueError(f"std must be 'population' or 'sample', got {self.std!r}")
        if self.years is not None and self.years[0] > self.years[1]:
            raise ValueError(f"empty year range {self.years[0]}:{self.years[1]}")

    def as_mapping(self) -> dict:
        """Flag-style key=value view, reusable as a config file."""
        out = {
            "samples": self.samples,
            "seed": self.seed,
            "out": str(self.out),
            "denominator": self.denominator,
            "std": self.std,
            "jobs": self.jobs,
            "figures": "true" if self.figures else "false",
            "convention": self.convention,
        }
        if self.years is not None:
            out["years"] = f"{self.years[0]}:{self.years[1]}"
        for name in ("edgelist", "nodes", "states", "alliances", "rivalries"):
            value = getattr(self, name)
            if value is not None:
                out[name] = str(value)
        return out


def load_network(cfg: RunConfig) -> TemporalNetwork:
    """Load the yearly network from either the normalized or the raw inputs.

    The normalized edge-list path wins when both are given.  Building from
    raw datasets defaults to the 1816-2009 window; loading an edge list
    without an explicit range infers it from the file.
    """
    if cfg.edgelist is not None:
        return load_edgelist(cfg.edgelist, nodes_path=cfg.nodes, years=cfg.years)
    if cfg.states is None or cfg.alliances is None or cfg.rivalries is None:
        raise ValueError(
            "need either an edge-list path or all three raw dataset paths "
            "(states, alliances, rivalries)"
        )
    years = cfg.years if cfg.years is not None else DEFAULT_YEARS
    states = parse_states(cfg.states)
    alliances = parse_alliances(cfg.alliances)
    rivalries = parse_rivalries(cfg.rivalries)
    return build_yearly_networks(
        states, alliances, rivalries, years[0], years[1], convention=cfg.convention
    )


# ---------------------------------------------------------------------------
# row builders


def summary_row(g: SignedGraph, denominator: str = "closed") -> list:
    n = g.node_count()
    avg_degree = g.average_degree() if n > 0 else None
    frac_positive = g.fraction_positive_edges() if g.edge_count() > 0 else None
    try:
        frac_balanced = fraction_balanced(g, denominator)
    except NoClosedTriadsError:
        frac_balanced = None
    return [g.year, n, avg_degree, frac_positive, frac_balanced]


def static_z_row(
    g: SignedGraph, n_samples: int, master_seed: int, denominator: str, std: str
) -> list:
    try:
        empirical = fraction_balanced(g, denominator)
        samples = sample_static(g, SurrogateConfig(n_samples, master_seed), denominator)
    except NoClosedTriadsError:
        return [g.year, None, None, None, None, True]
    s = zscore(empirical, samples, std=std)
    return [g.year, empirical, s.mean, s.std, s.z, s.degenerate]


def growth_z_rows_for_pair(
    g_prev: SignedGraph, g_curr: SignedGraph, n_samples: int, master_seed: int, std: str
) -> list[list]:
    """Three stat rows for one consecutive-year pair, labeled by the later year.

    Both snapshots are first restricted to their shared node set.  Flags, in
    priority order: the whole year is ``nothing_to_randomize`` when no dyad
    changed state; a single statistic is ``undefined`` when its source row
    had no triads in year t-1, and ``degenerate`` when the surrogate spread
    is zero.
    """
    gp, gc = common_subgraphs(g_prev, g_curr)
    year = gc.year
    try:
        samples = sample_growth(gp, gc, SurrogateConfig(n_samples, master_seed))
    except NothingToRandomizeError:
        samples = None
    empirical = balance_dynamics_stats(
        triad_transition_probabilities(triad_transition_counts(gp, gc))
    )
    rows = []
    for name in BalanceDynamicsStats.FIELDS:
        value = empirical.get(name)
        if samples is None:
            rows.append([year, name, value, None, None, None, FLAG_NOTHING_TO_RANDOMIZE])
        elif value is None:
            rows.append([year, name, None, None, None, None, FLAG_UNDEFINED])
        else:
            s = zscore(value, [b.get(name) for b in samples], std=std)
            flag = FLAG_DEGENERATE if s.degenerate else ""
            rows.append([year, name, value, s.mean, s.std, s.z, flag])
    return rows


# ---------------------------------------------------------------------------
# parallel drivers (workers are module-level so they pickle)


def _chunks(items: list, k: int) -> list[list]:
    k = max(1, min(k, len(items)))
    bounds = np.linspace(0, len(items), k + 1).astype(int)
    return [items[a:b] for a, b in zip(bounds, bounds[1:]) if b > a]


def _static_chunk(args) -> list[list]:
    graphs, n_samples, master_seed, denominator, std = args
    return [static_z_row(g, n_samples, master_seed, denominator, std) for g in graphs]


def _growth_chunk(args) -> list[list]:
    pairs, n_samples, master_seed, std = args
    rows = []
    for g_prev, g_curr in pairs:
        rows.extend(growth_z_rows_for_pair(g_prev, g_curr, n_samples, master_seed, std))
    return rows


def _run_chunked(worker, payloads: list, jobs: int) -> list[list]:
    if jobs <= 1 or len(payloads) <= 1:
        mapped = map(worker, payloads)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            mapped = list(pool.map(worker, payloads))
    rows = []
    for part in mapped:
        rows.extend(part)
    return rows


def summary_rows(net: TemporalNetwork, denominator: str = "closed") -> list[list]:
    return [summary_row(g, denominator) for g in net]


def static_z_rows(net: TemporalNetwork, cfg: RunConfig) -> list[list]:
    graphs = list(net)
    payloads = [
        (chunk, cfg.samples, cfg.seed, cfg.denominator, cfg.std)
        for chunk in _chunks(graphs, cfg.jobs)
    ]
    return _run_chunked(_static_chunk, payloads, cfg.jobs)


def growth_z_rows(net: TemporalNetwork, cfg: RunConfig) -> list[list]:
    graphs = list(net)
    pairs = list(zip(graphs, graphs[1:]))
    payloads = [(chunk, cfg.samples, cfg.seed, cfg.std) for chunk in _chunks(pairs, cfg.jobs)]
    return _run_chunked(_growth_chunk, payloads, cfg.jobs)


# ---------------------------------------------------------------------------
# deterministic CSV / config output


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.6g" % value
    return str(value)


def write_csv(path, header: list[str], rows: list[list]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])


def dot_description(net: TemporalNetwork, year: int) -> str:
    """One year as an undirected DOT graph for external renderers.

    Nodes (including isolated ones) carry state labels; positive edges are
    solid, negative dashed.  Statements are sorted, so output is stable.
    """
    g = net.snapshot(year)
    reg = net.registry

    def quoted(label: str) -> str:
        return '"%s"' % label.replace("\\", "\\\\").replace('"', '\\"')

    lines = [f"graph year_{year} {{"]
    for label in sorted(reg.label_of(v) for v in g.nodes):
        lines.append(f"  {quoted(label)};")
    styled = []
    for (a, b), state in g.edges.items():
        la, lb = sorted((reg.label_of(a), reg.label_of(b)))
        styled.append((la, lb, "solid" if int(state) > 0 else "dashed"))
    for la, lb, style in sorted(styled):
        lines.append(f"  {quoted(la)} -- {quoted(lb)} [style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_run_config(out_dir, mapping: dict) -> Path:
    """Echo the resolved configuration for provenance, one key=value per line."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "run_config.txt"
    lines = [f"{key}={mapping[key]}" for key in sorted(mapping)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
