"""Command-line entry points.

Subcommands: ``build`` (raw datasets -> normalized edge list), ``summary``,
``static-z`` and ``growth-z`` (per-year CSV reports plus SVG charts), and
``export-dot`` (one year as a DOT file).  Configuration precedence is CLI
flags > config file > defaults; the resolved configuration is echoed to
``run_config.txt`` in the output directory and can itself be fed back via
``--config``.  Warnings go to stderr; output CSVs carry data only.
"""

from __future__ import annotations

import functools
import logging
import sys
from pathlib import Path

import click

from .errors import SignedBalanceError
from .ingest import default_nodes_path, write_edgelist
from .pipeline import (
    GROWTH_Z_HEADER,
    STATIC_Z_HEADER,
    SUMMARY_HEADER,
    RunConfig,
    dot_description,
    growth_z_rows,
    load_network,
    static_z_rows,
    summary_rows,
    write_csv,
    write_run_config,
)

_PATH_KEYS = ("edgelist", "nodes", "states", "alliances", "rivalries", "out")
_INT_KEYS = ("samples", "seed", "jobs")
_CHOICE_KEYS = {
    "denominator": ("closed", "all"),
    "std": ("population", "sample"),
    "convention": ("overlap", "jan1"),
}
_ALL_KEYS = set(_PATH_KEYS) | set(_INT_KEYS) | set(_CHOICE_KEYS) | {"years", "figures"}


def parse_years(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        start, end = int(a), int(b)
    except ValueError:
        raise click.UsageError(f"--years expects A:B, got {text!r}") from None
    if start > end:
        raise click.UsageError(f"empty year range {start}:{end}")
    return start, end


def _parse_bool(value: str, key: str) -> bool:
    low = value.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise click.UsageError(f"config key {key} expects a boolean, got {value!r}")


def read_config_file(path: Path) -> dict[str, str]:
    """Parse a key=value config file; '#' starts a comment."""
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise click.UsageError(f"cannot read config file: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip().replace("-", "_")
        if key not in _ALL_KEYS:
            raise click.UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def resolve_config(config_path: Path | None, **cli_values) -> RunConfig:
    """Merge CLI flags over config-file values over defaults."""
    merged: dict = {}
    if config_path is not None:
        for key, raw in read_config_file(config_path).items():
            if key in _INT_KEYS:
                try:
                    merged[key] = int(raw)
                except ValueError:
                    raise click.UsageError(f"config key {key} expects an integer, got {raw!r}")
            elif key in _PATH_KEYS:
                merged[key] = Path(raw)
            elif key == "years":
                merged[key] = parse_years(raw)
            elif key == "figures":
                merged[key] = _parse_bool(raw, key)
            else:
                if raw not in _CHOICE_KEYS[key]:
                    raise click.UsageError(
                        f"config key {key} expects one of {_CHOICE_KEYS[key]}, got {raw!r}"
                    )
                merged[key] = raw
    for key, value in cli_values.items():
        if value is not None:
            merged[key] = value
    try:
        return RunConfig(**merged)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


def network_options(fn):
    options = [
        click.option("--edgelist", type=click.Path(path_type=Path), default=None,
                     help="Normalized edge-list CSV (preferred input when present)."),
        click.option("--nodes", type=click.Path(path_type=Path), default=None,
                     help="Companion membership CSV (default: <edgelist>.nodes.csv)."),
        click.option("--states", type=click.Path(path_type=Path), default=None,
                     help="State-system membership CSV."),
        click.option("--alliances", type=click.Path(path_type=Path), default=None,
                     help="Dyadic alliance CSV."),
        click.option("--rivalries", type=click.Path(path_type=Path), default=None,
                     help="Rivalry CSV."),
        click.option("--years", default=None, metavar="A:B",
                     help="Inclusive year range (default 1816:2009 when building raw)."),
        click.option("--out", type=click.Path(path_type=Path), default=None,
                     help="Output directory (default: out)."),
        click.option("--config", "config_path", type=click.Path(path_type=Path), default=None,
                     help="key=value config file; CLI flags win."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def sampling_options(fn):
    options = [
        click.option("--samples", type=int, default=None, help="Surrogates per year (default 1000)."),
        click.option("--seed", type=int, default=None, help="Master seed (default 0)."),
        click.option("--denominator", type=click.Choice(["closed", "all"]), default=None,
                     help="Balanced-fraction denominator (default closed)."),
        click.option("--std", type=click.Choice(["population", "sample"]), default=None,
                     help="Surrogate std flavor for z (default population)."),
        click.option("--jobs", type=int, default=None, help="Worker processes (default 1)."),
        click.option("--figures/--no-figures", "figures", default=None,
                     help="Render SVG charts next to the CSV (default on)."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SignedBalanceError as exc:
            raise click.ClickException(str(exc))
        except OSError as exc:
            raise click.ClickException(str(exc))

    return wrapper


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for info, -vv for debug diagnostics.")
def main(verbose: int) -> None:
    """Structural balance of yearly signed interstate networks."""
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s"
    )


def _resolved(config_path, years, **kwargs) -> RunConfig:
    if isinstance(years, str):
        years = parse_years(years)
    return resolve_config(config_path, years=years, **kwargs)


@main.command()
@network_options
@click.option("--convention", type=click.Choice(["overlap", "jan1"]), default=None,
              help="Activity convention: any overlap with the year, or January 1 status.")
@handle_errors
def build(config_path, years, **kwargs) -> None:
    """Build the normalized edge list from the raw datasets."""
    cfg = _resolved(config_path, years, **kwargs)
    if cfg.states is None or cfg.alliances is None or cfg.rivalries is None:
        raise click.UsageError("build needs --states, --alliances and --rivalries")
    if cfg.years is None:
        cfg.years = (1816, 2009)
    edgelist_out = cfg.edgelist  # in build, --edgelist names the destination
    cfg.edgelist = None  # force the raw-dataset path in load_network
    net = load_network(cfg)
    dest = edgelist_out if edgelist_out is not None else cfg.out / "edges.csv"
    nodes_dest = cfg.nodes if cfg.nodes is not None else default_nodes_path(dest)
    Path(dest).parent.mkdir(parents=True, exist_ok=True)
    write_edgelist(net, dest, nodes_dest)
    cfg.edgelist = Path(dest)
    cfg.nodes = Path(nodes_dest)
    write_run_config(cfg.out, cfg.as_mapping())
    for g in net:
        click.echo(f"{g.year} nodes={g.node_count()} edges={g.edge_count()}")


@main.command()
@network_options
@click.option("--denominator", type=click.Choice(["closed", "all"]), default=None)
@click.option("--figures/--no-figures", "figures", default=None)
@handle_errors
def summary(config_path, years, **kwargs) -> None:
    """Per-year size, degree, sign and balance overview."""
    cfg = _resolved(config_path, years, **kwargs)
    net = load_network(cfg)
    rows = summary_rows(net, cfg.denominator)
    out_csv = cfg.out / "summary.csv"
    write_csv(out_csv, SUMMARY_HEADER, rows)
    if cfg.figures:
        from . import plots

        plots.plot_summary(rows, cfg.out / "summary.svg")
    write_run_config(cfg.out, cfg.as_mapping())
    click.echo(str(out_csv))


@main.command(name="static-z")
@network_options
@sampling_options
@handle_errors
def static_z(config_path, years, **kwargs) -> None:
    """Yearly balanced-fraction z-scores against sign-shuffle surrogates."""
    cfg = _resolved(config_path, years, **kwargs)
    net = load_network(cfg)
    rows = static_z_rows(net, cfg)
    out_csv = cfg.out / "static_z.csv"
    write_csv(out_csv, STATIC_Z_HEADER, rows)
    if cfg.figures:
        from . import plots

        plots.plot_static_z(rows, cfg.out / "static_z.svg")
    write_run_config(cfg.out, cfg.as_mapping())
    click.echo(str(out_csv))


@main.command(name="growth-z")
@network_options
@sampling_options
@handle_errors
def growth_z(config_path, years, **kwargs) -> None:
    """Yearly transition-statistic z-scores against growth surrogates."""
    cfg = _resolved(config_path, years, **kwargs)
    net = load_network(cfg)
    if len(net) < 2:
        raise click.UsageError("growth-z needs at least two consecutive years")
    rows = growth_z_rows(net, cfg)
    out_csv = cfg.out / "growth_z.csv"
    write_csv(out_csv, GROWTH_Z_HEADER, rows)
    if cfg.figures:
        from . import plots

        plots.plot_growth_z(rows, cfg.out / "growth_z.svg")
    write_run_config(cfg.out, cfg.as_mapping())
    click.echo(str(out_csv))


@main.command(name="export-dot")
@click.argument("year", type=int)
@network_options
@handle_errors
def export_dot(year: int, config_path, years, **kwargs) -> None:
    """Write one year as a DOT graph (positive solid, negative dashed)."""
    cfg = _resolved(config_path, years, **kwargs)
    net = load_network(cfg)
    try:
        text = dot_description(net, year)
    except KeyError as exc:
        raise click.ClickException(str(exc.args[0]) if exc.args else str(exc))
    cfg.out.mkdir(parents=True, exist_ok=True)
    out_path = cfg.out / f"network_{year}.dot"
    out_path.write_text(text, encoding="utf-8")
    click.echo(str(out_path))


if __name__ == "__main__":
    main()
