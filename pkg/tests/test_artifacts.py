"""Tests for JSON rendering, atomic writes and the CSV formats."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from metric_graph_ops.artifacts import (
    edge_function_csv,
    parse_edge_function_csv,
    parse_wave_trace_csv,
    read_edge_function_csv,
    render_json,
    wave_trace_csv,
    write_edge_function_csv,
    write_json,
    write_text_atomic,
    write_wave_trace_csv,
)
from metric_graph_ops.edge_function import constant_function, random_sampled_function
from metric_graph_ops.errors import GridMismatchError, SchemaError
from metric_graph_ops.network import Network


class TestRenderJson:
    """Tests for render_json."""

    def test_float_format(self) -> None:
        text = render_json({"lam": 1.0, "count": 3, "ok": True})

        assert '"lam": 1.000000000000e+00' in text
        assert '"count": 3' in text
        assert '"ok": true' in text

    def test_non_finite_is_null(self) -> None:
        assert json.loads(render_json([float("nan"), float("inf")])) == [None, None]

    def test_complex_as_pair(self) -> None:
        assert json.loads(render_json({"z": 1 - 2j})) == {"z": [1.0, -2.0]}

    def test_numpy_scalars_and_arrays(self) -> None:
        document = {"a": np.arange(3), "b": np.float64(0.5), "c": np.bool_(False)}

        assert json.loads(render_json(document)) == {"a": [0, 1, 2], "b": 0.5, "c": False}

    def test_deterministic(self) -> None:
        """Should render the same document to the same bytes."""
        document = {"b": [1.5, {"x": []}], "a": {}, "c": "text"}

        assert render_json(document) == render_json(document)
        assert list(json.loads(render_json(document))) == ["b", "a", "c"]

    def test_unrenderable_rejected(self) -> None:
        with pytest.raises(TypeError):
            render_json({"s": {1, 2}})


class TestAtomicWrite:
    """Tests for write_text_atomic and write_json."""

    def test_leaves_no_temporary(self, tmp_path: Path) -> None:
        target = write_json(tmp_path / "out.json", {"x": 1})

        assert json.loads(target.read_text()) == {"x": 1}
        assert not (tmp_path / "out.json.tmp").exists()

    def test_replaces_existing(self, tmp_path: Path) -> None:
        target = tmp_path / "out.txt"
        target.write_text("old")
        write_text_atomic(target, "new")

        assert target.read_text() == "new"

    def test_missing_directory_raises(self, tmp_path: Path) -> None:
        with pytest.raises(OSError):
            write_text_atomic(tmp_path / "missing" / "out.txt", "x")


class TestEdgeFunctionCsv:
    """Tests for the edge-function CSV."""

    def test_header_and_rows(self, edge_net: Network) -> None:
        lines = edge_function_csv(constant_function(edge_net, 2)).splitlines()

        assert lines[0] == "edge_u,edge_v,k,t,re,im"
        assert lines[1] == "x,y,0,0.000000000000e+00,1.000000000000e+00,0.000000000000e+00"
        assert len(lines) == 4

    def test_file_round_trip(self, triangle: Network, tmp_path: Path) -> None:
        f = random_sampled_function(triangle, 16, np.random.default_rng(0))
        path = write_edge_function_csv(tmp_path / "f.csv", f)
        loaded = read_edge_function_csv(path, triangle)

        assert np.max(np.abs(loaded.values - f.values)) <= 1e-11 * np.max(np.abs(f.values))

    def test_bad_header_rejected(self, edge_net: Network) -> None:
        with pytest.raises(SchemaError):
            parse_edge_function_csv(edge_net, "u,v,k,t,re,im\nx,y,0,0,1,0\n")

    def test_unknown_edge_rejected(self, edge_net: Network) -> None:
        text = "edge_u,edge_v,k,t,re,im\ny,x,0,0,1,0\n"

        with pytest.raises(SchemaError, match="unknown edge"):
            parse_edge_function_csv(edge_net, text)

    def test_malformed_number_rejected(self, edge_net: Network) -> None:
        text = "edge_u,edge_v,k,t,re,im\nx,y,0,0,one,0\n"

        with pytest.raises(SchemaError):
            parse_edge_function_csv(edge_net, text)

    def test_missing_samples_rejected(self, edge_net: Network) -> None:
        """Should refuse rows that do not cover a full grid."""
        text = "edge_u,edge_v,k,t,re,im\nx,y,0,0,1,0\nx,y,2,1,1,0\n"

        with pytest.raises(GridMismatchError):
            parse_edge_function_csv(edge_net, text)


class TestWaveTraceCsv:
    """Tests for the wave-trace CSV."""

    def test_frames_parse_back(self, path3: Network, tmp_path: Path) -> None:
        frames = [(0.0, constant_function(path3, 4)), (0.5, constant_function(path3, 4, 2.0))]
        path = write_wave_trace_csv(tmp_path / "wave.csv", frames)
        parsed = parse_wave_trace_csv(path3, path.read_text())

        assert [tau for tau, _ in parsed] == [0.0, 0.5]
        assert np.array_equal(parsed[1][1].values, frames[1][1].values)

    def test_header(self, edge_net: Network) -> None:
        text = wave_trace_csv([(0.25, constant_function(edge_net, 2))])

        assert text.splitlines()[0] == "tau,edge_u,edge_v,k,re,im"
        assert text.splitlines()[1].startswith("2.500000000000e-01,x,y,0,")
