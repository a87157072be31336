"""Tests for the command-line interface."""

from __future__ import annotations

import argparse
import json
import math
from collections.abc import Callable
from pathlib import Path

import pytest

from metric_graph_ops.artifacts import parse_wave_trace_csv
from metric_graph_ops.cli import (
    EXIT_INPUT,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFICATION_FAILED,
    InitialData,
    _frame_times,
    main,
    parse_initial_data,
)
from metric_graph_ops.network import load_network

pytestmark = pytest.mark.usefixtures("isolated_logging")


Runner = Callable[..., int]
Capture = pytest.CaptureFixture[str]


@pytest.fixture
def run(tmp_path: Path) -> Runner:
    """Call main() with an isolated config file."""
    config = tmp_path / "config.toml"

    def _run(*argv: str) -> int:
        return main(["--config", str(config), *argv])

    return _run


# --- Selectors ---


class TestParseInitialData:
    """Tests for --init / --velocity selectors."""

    def test_eigen(self) -> None:
        assert parse_initial_data("eigen:2:1") == InitialData("eigen", 2, 1)

    def test_keywords(self) -> None:
        assert parse_initial_data("constant") == InitialData("constant")
        assert parse_initial_data("zero", allow_zero=True) == InitialData("zero")

    @pytest.mark.parametrize("text", ["zero", "eigen:1", "eigen:a:0", "eigen:-1:0", "sine"])
    def test_malformed(self, text: str) -> None:
        with pytest.raises(argparse.ArgumentTypeError):
            parse_initial_data(text)


class TestFrameTimes:
    """Tests for wave frame selection."""

    def test_stride_and_last_frame(self) -> None:
        assert _frame_times(32, 0.5, 16) == [s / 32 for s in range(0, 17, 2)]

    def test_unaligned_end_is_appended(self) -> None:
        times = _frame_times(8, 0.9, 2)

        assert times == [0.0, 0.5, 0.875]


# --- Commands ---


class TestCommands:
    """Tests for main() with the bundled network files."""

    def test_version(self, run: Runner, capsys: Capture) -> None:
        assert run("--version") == EXIT_OK
        assert "metric-graph-ops" in capsys.readouterr().out

    def test_info(self, run: Runner, data_dir: Path, capsys: Capture) -> None:
        assert run("info", "--graph", str(data_dir / "path3.json")) == EXIT_OK
        report = json.loads(capsys.readouterr().out)

        assert report["vertex_measures"] == {"a": 1.0, "b": 3.0, "c": 2.0}
        assert report["bipartite"] is True
        assert report["is_tree"] is True

    def test_loop_edge_is_input_error(self, run: Runner, data_dir: Path, capsys: Capture) -> None:
        assert run("info", "--graph", str(data_dir / "loop.json")) == EXIT_INPUT
        assert "loop edge" in capsys.readouterr().err

    def test_missing_file_is_input_error(self, run: Runner, tmp_path: Path) -> None:
        assert run("info", "--graph", str(tmp_path / "absent.json")) == EXIT_INPUT

    def test_spectrum_triangle(self, run: Runner, data_dir: Path, capsys: Capture) -> None:
        """Should list (2 pi / 3)^2 twice in band 0 of the unit triangle."""
        assert run("spectrum", "--graph", str(data_dir / "triangle.json"), "--bands", "2") == 0
        report = json.loads(capsys.readouterr().out)
        band0 = sorted(pair["lambda"] for pair in report["bands"][0]["pairs"])

        assert band0 == pytest.approx([0.0, (2 * math.pi / 3) ** 2, (2 * math.pi / 3) ** 2])
        assert report["predicates"]["dirichlet_dimensions"] == {"1": 0, "2": 2}

    def test_spectrum_to_file(self, run: Runner, data_dir: Path, tmp_path: Path) -> None:
        out = tmp_path / "spectrum.json"

        assert run("spectrum", "--graph", str(data_dir / "edge.json"), "--out", str(out)) == 0
        assert json.loads(out.read_text())["n_max"] == 3

    def test_verify_single_edge(self, run: Runner, data_dir: Path, tmp_path: Path) -> None:
        out = tmp_path / "report.json"
        graph = str(data_dir / "edge.json")

        assert run("verify", "--graph", graph, "--suite", "all", "--out", str(out)) == EXIT_OK
        report = json.loads(out.read_text())
        assert report["all_passed"] is True
        assert len(report["checks"]) == 31

    def test_verify_bad_suite_is_usage_error(self, run: Runner, data_dir: Path) -> None:
        graph = str(data_dir / "edge.json")

        assert run("verify", "--graph", graph, "--suite", "none") == EXIT_USAGE

    def test_wave_trace(self, run: Runner, data_dir: Path, tmp_path: Path) -> None:
        graph = data_dir / "triangle.json"
        out = tmp_path / "wave.csv"
        argv = ["wave", "--graph", str(graph), "--init", "eigen:0:1", "--grid", "32"]

        assert run(*argv, "--tau-max", "0.5", "--out", str(out)) == EXIT_OK
        frames = parse_wave_trace_csv(load_network(graph), out.read_text())
        assert [tau for tau, _ in frames] == [s / 32 for s in range(0, 17, 2)]
        start, end = frames[0][1], frames[-1][1]
        ratio = math.cos(0.5 * 2 * math.pi / 3)
        assert end.values == pytest.approx(ratio * start.values, abs=1e-9)

    def test_wave_index_out_of_range(self, run: Runner, data_dir: Path, tmp_path: Path) -> None:
        argv = ["wave", "--graph", str(data_dir / "triangle.json"), "--init", "eigen:0:7"]

        assert run(*argv, "--grid", "16", "--out", str(tmp_path / "w.csv")) == EXIT_INPUT
        assert not (tmp_path / "w.csv").exists()

    def test_wave_requires_init(self, run: Runner, data_dir: Path, tmp_path: Path) -> None:
        argv = ["wave", "--graph", str(data_dir / "edge.json"), "--out", str(tmp_path / "w.csv")]

        assert run(*argv) == EXIT_USAGE

    def test_config_prints_toml(self, run: Runner, capsys: Capture) -> None:
        assert run("config") == EXIT_OK
        out = capsys.readouterr().out

        assert "[numerics]" in out
        assert "grid_size = 256" in out

    def test_config_reset_writes_file(self, tmp_path: Path) -> None:
        config = tmp_path / "config.toml"
        config.write_text("[numerics]\nbands = 9\n")

        assert main(["--config", str(config), "config", "--reset"]) == EXIT_OK
        assert "bands = 3" in config.read_text()


class TestNumericFlags:
    """Tests for validation of --grid, --bands and --tau-max."""

    @pytest.mark.parametrize(
        "flags",
        [
            ["--grid", "3"],
            ["--grid", "0"],
            ["--grid", "many"],
            ["--bands", "-1"],
            ["--tau-max", "-1"],
            ["--tau-max", "nan"],
            ["--tau-max", "inf"],
        ],
    )
    def test_verify_rejects_bad_values(
        self, run: Runner, data_dir: Path, capsys: Capture, flags: list[str]
    ) -> None:
        """Should stop with a usage error before running any check."""
        graph = str(data_dir / "edge.json")

        assert run("verify", "--graph", graph, "--suite", "dalembert", *flags) == EXIT_USAGE
        assert capsys.readouterr().out == ""

    def test_spectrum_rejects_negative_bands(self, run: Runner, data_dir: Path) -> None:
        assert run("spectrum", "--graph", str(data_dir / "edge.json"), "--bands", "-1") == 2

    @pytest.mark.parametrize("tau_max", ["nan", "-0.5"])
    def test_wave_rejects_bad_final_time(
        self, run: Runner, data_dir: Path, tmp_path: Path, tau_max: str
    ) -> None:
        out = tmp_path / "w.csv"
        argv = ["wave", "--graph", str(data_dir / "edge.json"), "--init", "constant"]

        assert run(*argv, "--tau-max", tau_max, "--out", str(out)) == EXIT_USAGE
        assert not out.exists()

    def test_wave_rejects_odd_grid(self, run: Runner, data_dir: Path, tmp_path: Path) -> None:
        argv = ["wave", "--graph", str(data_dir / "edge.json"), "--init", "constant"]

        assert run(*argv, "--grid", "7", "--out", str(tmp_path / "w.csv")) == EXIT_USAGE

    def test_zero_tau_max_is_accepted(self, run: Runner, data_dir: Path, tmp_path: Path) -> None:
        out = tmp_path / "report.json"
        argv = ["verify", "--graph", str(data_dir / "edge.json"), "--suite", "dalembert"]

        assert run(*argv, "--tau-max", "0", "--out", str(out)) == EXIT_OK
        assert json.loads(out.read_text())["all_passed"] is True

    @pytest.mark.parametrize(
        "numerics", ["grid_size = 3", "bands = -2", "tau_max = -1.0", "tau_max = nan"]
    )
    def test_bad_config_values_are_input_errors(
        self, run: Runner, data_dir: Path, tmp_path: Path, numerics: str
    ) -> None:
        """Should report out-of-range config values as invalid input."""
        (tmp_path / "config.toml").write_text(f"[numerics]\n{numerics}\n")
        graph = str(data_dir / "edge.json")

        assert run("verify", "--graph", graph, "--suite", "discrete") == EXIT_INPUT

    def test_bad_config_time_fails_wave(self, run: Runner, data_dir: Path, tmp_path: Path) -> None:
        (tmp_path / "config.toml").write_text("[numerics]\ntau_max = nan\n")
        out = tmp_path / "w.csv"
        argv = ["wave", "--graph", str(data_dir / "edge.json"), "--init", "constant"]

        assert run(*argv, "--out", str(out)) == EXIT_INPUT
        assert not out.exists()


class TestReportDeterminism:
    """Tests for reproducible verify output."""

    def test_same_seed_gives_identical_bytes(
        self, run: Runner, data_dir: Path, tmp_path: Path
    ) -> None:
        """Should write byte-identical reports for two runs with the same seed."""
        graph = str(data_dir / "triangle.json")
        first, second = tmp_path / "first.json", tmp_path / "second.json"
        argv = ["verify", "--graph", graph, "--suite", "all", "--grid", "64", "--seed", "7"]

        assert run(*argv, "--out", str(first)) in (EXIT_OK, EXIT_VERIFICATION_FAILED)
        assert run(*argv, "--out", str(second)) in (EXIT_OK, EXIT_VERIFICATION_FAILED)
