"""Tests for network ingestion, validation, serialization and structure reports."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metric_graph_ops.errors import (
    DisconnectedNetworkError,
    DuplicateEdgeError,
    DuplicateVertexError,
    LoopEdgeError,
    NetworkValidationError,
    NonPositiveConductanceError,
    SchemaError,
    UnknownVertexError,
)
from metric_graph_ops.network import (
    Network,
    bipartite_coloring,
    load_network,
    parse_network,
    serialize_network,
    structure_report,
    vertex_measure,
)

from .conftest import build_random_network


def _document(vertices: list[str], edges: list[tuple[str, str, float]]) -> str:
    return json.dumps(
        {"vertices": vertices, "edges": [{"u": u, "v": v, "c": c} for u, v, c in edges]}
    )


# --- Parsing ---


class TestParseNetwork:
    """Tests for parse_network and the Network constructor."""

    def test_triangle(self) -> None:
        """Should parse a triangle with three edges and cycle rank 1."""
        net = parse_network(
            _document(["x", "y", "z"], [("x", "y", 1.0), ("y", "z", 1.0), ("x", "z", 1.0)])
        )

        assert net.n_vertices == 3
        assert net.n_edges == 3
        assert structure_report(net).cycle_rank == 1

    def test_edges_stored_in_canonical_orientation(self) -> None:
        """Should store every edge from the smaller vertex id to the larger."""
        net = parse_network(_document(["y", "x"], [("y", "x", 2.5)]))

        assert (net.edges[0].u, net.edges[0].v) == ("x", "y")
        assert net.edges[0].conductance == 2.5
        assert net.vertices == ("y", "x")

    def test_adjacency_and_measures(self, path3: Network) -> None:
        """Should index neighbours by (neighbour, edge) and sum incident conductances."""
        b = path3.index_of("b")

        assert sorted(nbr for nbr, _ in path3.adjacency[b]) == [0, 2]
        assert path3.measures.tolist() == [1.0, 3.0, 2.0]

    def test_loop_edge_rejected(self) -> None:
        """Should reject an edge from a vertex to itself, naming the vertex."""
        with pytest.raises(LoopEdgeError, match="loop edge"):
            parse_network(_document(["x", "y"], [("x", "y", 1.0), ("y", "y", 1.0)]))

    def test_duplicate_edge_rejected_in_either_orientation(self) -> None:
        """Should reject the same unordered pair given twice."""
        with pytest.raises(DuplicateEdgeError):
            parse_network(_document(["x", "y"], [("x", "y", 1.0), ("y", "x", 2.0)]))

    def test_unknown_vertex_rejected(self) -> None:
        with pytest.raises(UnknownVertexError, match="'w'"):
            parse_network(_document(["x", "y"], [("x", "w", 1.0)]))

    def test_duplicate_vertex_rejected(self) -> None:
        with pytest.raises(DuplicateVertexError):
            parse_network(_document(["x", "x"], [("x", "x", 1.0)]))

    @pytest.mark.parametrize("conductance", [0.0, -1.0])
    def test_nonpositive_conductance_rejected(self, conductance: float) -> None:
        """Should reject zero and negative conductances."""
        with pytest.raises(NonPositiveConductanceError):
            parse_network(_document(["x", "y"], [("x", "y", conductance)]))

    def test_disconnected_rejected(self) -> None:
        """Should reject a network whose vertices are not all reachable."""
        with pytest.raises(DisconnectedNetworkError, match="'z'"):
            parse_network(_document(["x", "y", "z"], [("x", "y", 1.0)]))

    @pytest.mark.parametrize(
        "text",
        [
            "not json",
            '{"vertices": ["x"]}',
            '{"vertices": ["x", "y"], "edges": [{"u": "x", "v": "y"}]}',
            '{"vertices": ["x", "y"], "edges": [], "extra": 1}',
            '{"vertices": [], "edges": []}',
        ],
    )
    def test_schema_violations(self, text: str) -> None:
        """Should raise SchemaError for documents that violate the file schema."""
        with pytest.raises(SchemaError):
            parse_network(text)

    def test_network_without_edges_rejected(self) -> None:
        with pytest.raises(NetworkValidationError):
            parse_network(_document(["x"], []))

    def test_validation_errors_share_a_base(self) -> None:
        """Should derive every validation failure from NetworkValidationError."""
        for cls in (LoopEdgeError, DuplicateEdgeError, SchemaError, DisconnectedNetworkError):
            assert issubclass(cls, NetworkValidationError)


# --- Serialization ---


class TestSerialization:
    """Tests for serialize_network and load_network."""

    def test_round_trip(self, path3: Network) -> None:
        """Should parse its own serialization back to an equal network."""
        assert parse_network(serialize_network(path3)) == path3

    def test_load_network_from_file(self, tmp_path: Path, triangle: Network) -> None:
        path = tmp_path / "triangle.json"
        path.write_text(serialize_network(triangle), encoding="utf-8")

        assert load_network(path) == triangle

    def test_load_missing_file_raises_oserror(self, tmp_path: Path) -> None:
        with pytest.raises(OSError):
            load_network(tmp_path / "missing.json")

    def test_bundled_loop_file_rejected(self, data_dir: Path) -> None:
        with pytest.raises(LoopEdgeError):
            load_network(data_dir / "loop.json")


# --- Structure ---


class TestStructureReport:
    """Tests for vertex measures and structural predicates."""

    def test_vertex_measure_triangle(self, triangle: Network) -> None:
        """Should give every triangle vertex measure 2."""
        assert [vertex_measure(triangle, x) for x in "xyz"] == [2.0, 2.0, 2.0]

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 50), st.integers(0, 2**32 - 1))
    def test_vertex_measure_independent_of_order(self, net_seed: int, order_seed: int) -> None:
        """Should agree to 1e-14 when edges are listed, oriented or summed in another order."""
        net = build_random_network(net_seed)
        rng = np.random.default_rng(order_seed)
        edges = [(e.u, e.v, e.conductance) for e in net.edges]
        shuffled = [edges[i] for i in rng.permutation(len(edges)).tolist()]
        flipped = [(v, u, c) if rng.random() < 0.5 else (u, v, c) for u, v, c in shuffled]
        vertices = [net.vertices[i] for i in rng.permutation(net.n_vertices).tolist()]
        other = Network(vertices, flipped)

        for x in net.vertices:
            expected = vertex_measure(net, x)
            incident = [c for u, v, c in flipped if x in (u, v)]
            assert vertex_measure(other, x) == pytest.approx(expected, rel=1e-14)
            assert sum(reversed(incident)) == pytest.approx(expected, rel=1e-14)

    def test_triangle_predicates(self, triangle: Network) -> None:
        report = structure_report(triangle)

        assert report.bipartite is False
        assert report.coloring is None
        assert report.is_tree is False
        assert report.cycle_rank == 1
        assert report.single_odd_cycle is True

    def test_path_predicates(self, path3: Network) -> None:
        """Should report a bipartite tree with the first vertex coloured 0."""
        report = structure_report(path3)

        assert report.is_tree is True
        assert report.bipartite is True
        assert report.coloring == {"a": 0, "b": 1, "c": 0}
        assert report.alpha["b"] == pytest.approx(1.0 + math.sqrt(2.0))

    def test_square_is_bipartite_cycle(self, square: Network) -> None:
        report = structure_report(square)

        assert report.bipartite is True
        assert report.cycle_rank == 1
        assert report.single_odd_cycle is False

    def test_coloring_is_proper(self, square: Network) -> None:
        coloring = bipartite_coloring(square)

        assert coloring is not None
        assert all(coloring[e.u] != coloring[e.v] for e in square.edges)

    def test_to_dict_field_order(self, triangle: Network) -> None:
        """Should emit fields in a fixed order."""
        assert list(structure_report(triangle).to_dict()) == [
            "vertex_measures",
            "alpha",
            "total_measure",
            "bipartite",
            "coloring",
            "is_tree",
            "cycle_rank",
            "single_odd_cycle",
        ]

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(0.1, 10.0), min_size=3, max_size=8))
    def test_total_measure_is_twice_total_conductance(self, conductances: list[float]) -> None:
        """Should satisfy m0(X) = 2 * sum of conductances on any cycle."""
        size = len(conductances)
        vertices = [f"v{i}" for i in range(size)]
        edges = [(vertices[i], vertices[(i + 1) % size], c) for i, c in enumerate(conductances)]
        report = structure_report(Network(vertices, edges))

        assert report.total_measure == pytest.approx(2.0 * math.fsum(conductances), rel=1e-12)
        assert report.bipartite is (size % 2 == 0)
