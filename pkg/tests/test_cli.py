import csv
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from signedbalance.cli import main
from signedbalance.graph import NodeRegistry, TemporalNetwork
from signedbalance.ingest import write_edgelist

from oracles import brute_census, make_graph, perturb_graph, random_signed_graph

DATA = Path(__file__).parent / "data"


@pytest.fixture()
def runner():
    return CliRunner()


def _raw_args(out):
    return [
        "--states", str(DATA / "states.csv"),
        "--alliances", str(DATA / "alliances.csv"),
        "--rivalries", str(DATA / "rivalries.csv"),
        "--years", "1900:1907",
        "--out", str(out),
    ]


def _toy_network(seed=1234, n=16, n_years=10, start=1950):
    rng = np.random.default_rng(seed)
    reg = NodeRegistry()
    for i in range(n):
        reg.add(f"S{i:02d}", i)
    snaps = [random_signed_graph(rng, n, 0.5, 0.55, year=start)]
    for _ in range(n_years - 1):
        snaps.append(perturb_graph(rng, snaps[-1], 0.3))
    return TemporalNetwork(reg, snaps)


@pytest.fixture()
def edgelist(tmp_path):
    path = tmp_path / "toy.csv"
    write_edgelist(_toy_network(), path)
    return path


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestBuild:
    def test_matches_golden_files(self, runner, tmp_path):
        result = runner.invoke(main, ["build", *_raw_args(tmp_path / "out")])
        assert result.exit_code == 0, result.output
        out = tmp_path / "out"
        assert (out / "edges.csv").read_bytes() == (DATA / "golden_edges.csv").read_bytes()
        assert (out / "edges.nodes.csv").read_bytes() == (
            DATA / "golden_edges.nodes.csv"
        ).read_bytes()
        assert "1903 nodes=5 edges=4" in result.output

    def test_missing_inputs_usage_error(self, runner, tmp_path):
        result = runner.invoke(main, ["build", "--out", str(tmp_path)])
        assert result.exit_code == 2
        assert "--rivalries" in result.output

    def test_missing_rivalry_file_named(self, runner, tmp_path):
        args = _raw_args(tmp_path / "out")
        args[5] = str(tmp_path / "absent.csv")
        result = runner.invoke(main, ["build", *args])
        assert result.exit_code == 1
        assert "absent.csv" in result.output

    def test_empty_year_range_usage_error(self, runner, tmp_path):
        args = _raw_args(tmp_path / "out")
        args[7] = "1910:1900"
        result = runner.invoke(main, ["build", *args])
        assert result.exit_code == 2
        assert "year range" in result.output

    def test_bad_years_format(self, runner, tmp_path):
        args = _raw_args(tmp_path / "out")
        args[7] = "1900"
        result = runner.invoke(main, ["build", *args])
        assert result.exit_code == 2


class TestSummary:
    def test_values_match_bruteforce_reference(self, runner, tmp_path, edgelist):
        out = tmp_path / "out"
        result = runner.invoke(
            main, ["summary", "--edgelist", str(edgelist), "--out", str(out), "--no-figures"]
        )
        assert result.exit_code == 0, result.output
        rows = _read_csv(out / "summary.csv")
        assert rows[0] == ["year", "n_nodes", "avg_degree", "frac_positive", "frac_balanced"]
        net = _toy_network()
        assert len(rows) == 1 + len(net)
        for row in rows[1:]:
            g = net.snapshot(int(row[0]))
            n_bal, n_imb, _ = brute_census(g)
            n_pos, n_neg = g.edge_counts()
            assert row[1] == str(g.node_count())
            assert row[2] == "%.6g" % (2 * g.edge_count() / g.node_count())
            assert row[3] == "%.6g" % (n_pos / (n_pos + n_neg))
            assert row[4] == "%.6g" % (n_bal / (n_bal + n_imb))

    def test_edgeless_year_gives_empty_cells(self, runner, tmp_path):
        edges = tmp_path / "e.csv"
        edges.write_text("year,node_a,node_b,sign\n1901,AAA,BBB,+\n")
        (tmp_path / "e.nodes.csv").write_text(
            "year,node\n1900,AAA\n1900,BBB\n1901,AAA\n1901,BBB\n"
        )
        out = tmp_path / "out"
        result = runner.invoke(
            main, ["summary", "--edgelist", str(edges), "--out", str(out), "--no-figures"]
        )
        assert result.exit_code == 0, result.output
        rows = _read_csv(out / "summary.csv")
        assert rows[1] == ["1900", "2", "0", "", ""]

    def test_figures_toggle(self, runner, tmp_path, edgelist):
        out_with = tmp_path / "with"
        out_without = tmp_path / "without"
        assert runner.invoke(
            main, ["summary", "--edgelist", str(edgelist), "--out", str(out_with)]
        ).exit_code == 0
        assert (out_with / "summary.svg").exists()
        head = (out_with / "summary.svg").read_text()[:200]
        assert "<?xml" in head
        assert runner.invoke(
            main,
            ["summary", "--edgelist", str(edgelist), "--out", str(out_without), "--no-figures"],
        ).exit_code == 0
        assert not (out_without / "summary.svg").exists()


class TestZCommands:
    def test_static_z_runs_and_echoes_config(self, runner, tmp_path, edgelist):
        out = tmp_path / "out"
        result = runner.invoke(
            main,
            [
                "static-z", "--edgelist", str(edgelist), "--out", str(out),
                "--samples", "60", "--seed", "5", "--no-figures",
            ],
        )
        assert result.exit_code == 0, result.output
        rows = _read_csv(out / "static_z.csv")
        assert rows[0] == ["year", "empirical", "mean", "std", "z", "degenerate"]
        assert len(rows) == 11
        config = (out / "run_config.txt").read_text()
        assert "samples=60" in config and "seed=5" in config

    def test_growth_z_runs(self, runner, tmp_path, edgelist):
        out = tmp_path / "out"
        result = runner.invoke(
            main,
            [
                "growth-z", "--edgelist", str(edgelist), "--out", str(out),
                "--samples", "60", "--seed", "5", "--no-figures",
            ],
        )
        assert result.exit_code == 0, result.output
        rows = _read_csv(out / "growth_z.csv")
        assert rows[0] == ["year", "stat_name", "empirical", "mean", "std", "z", "flag"]
        assert len(rows) == 1 + 9 * 3
        assert [r[1] for r in rows[1:4]] == [
            "escape_from_imbalance", "closure_bias", "balanced_persistence",
        ]

    def test_growth_z_single_year_rejected(self, runner, tmp_path):
        edges = tmp_path / "e.csv"
        edges.write_text("year,node_a,node_b,sign\n1901,AAA,BBB,+\n")
        result = runner.invoke(
            main, ["growth-z", "--edgelist", str(edges), "--out", str(tmp_path / "o")]
        )
        assert result.exit_code == 2

    def test_static_z_jobs_byte_identical(self, runner, tmp_path, edgelist):
        outs = []
        for jobs in (1, 2):
            out = tmp_path / f"jobs{jobs}"
            result = runner.invoke(
                main,
                [
                    "static-z", "--edgelist", str(edgelist), "--out", str(out),
                    "--samples", "40", "--seed", "8", "--jobs", str(jobs), "--no-figures",
                ],
            )
            assert result.exit_code == 0, result.output
            outs.append((out / "static_z.csv").read_bytes())
        assert outs[0] == outs[1]


class TestConfigFile:
    def test_file_values_applied_and_cli_wins(self, runner, tmp_path, edgelist):
        config = tmp_path / "run.cfg"
        config.write_text(
            "# comment line\n"
            f"edgelist = {edgelist}\n"
            "samples = 33\n"
            "seed = 21\n"
            "figures = false\n"
        )
        out = tmp_path / "out"
        result = runner.invoke(
            main,
            ["static-z", "--config", str(config), "--out", str(out), "--seed", "99"],
        )
        assert result.exit_code == 0, result.output
        text = (out / "run_config.txt").read_text()
        assert "samples=33" in text  # from the file
        assert "seed=99" in text  # CLI overrides
        assert not (out / "static_z.svg").exists()

    def test_unknown_key_rejected(self, runner, tmp_path, edgelist):
        config = tmp_path / "run.cfg"
        config.write_text("samples = 10\nbananas = 7\n")
        result = runner.invoke(
            main, ["summary", "--edgelist", str(edgelist), "--config", str(config)]
        )
        assert result.exit_code == 2
        assert "bananas" in result.output

    def test_malformed_line_rejected(self, runner, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("samples 10\n")
        result = runner.invoke(main, ["summary", "--config", str(config)])
        assert result.exit_code == 2


class TestExportDot:
    def test_writes_styled_file(self, runner, tmp_path, edgelist):
        out = tmp_path / "out"
        result = runner.invoke(
            main, ["export-dot", "1952", "--edgelist", str(edgelist), "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        text = (out / "network_1952.dot").read_text()
        assert text.startswith("graph year_1952 {")
        assert "[style=solid]" in text and "[style=dashed]" in text

    def test_out_of_range_year_fails(self, runner, tmp_path, edgelist):
        result = runner.invoke(
            main,
            ["export-dot", "1800", "--edgelist", str(edgelist), "--out", str(tmp_path / "o")],
        )
        assert result.exit_code == 1
        assert "1800" in result.output

    def test_empty_year_lists_nodes_only(self, runner, tmp_path):
        edges = tmp_path / "e.csv"
        edges.write_text("year,node_a,node_b,sign\n1901,AAA,BBB,+\n")
        (tmp_path / "e.nodes.csv").write_text("year,node\n1900,AAA\n1901,AAA\n1901,BBB\n")
        out = tmp_path / "o"
        result = runner.invoke(
            main, ["export-dot", "1900", "--edgelist", str(edges), "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        text = (out / "network_1900.dot").read_text()
        assert '"AAA";' in text and "--" not in text
