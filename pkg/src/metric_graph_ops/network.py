"""Finite weighted networks: vertices, conductance-weighted edges and vertex measures.

Each edge is stored once, oriented from the lexicographically smaller vertex id to the
larger one. The point (xy, t) of the metric graph is identified with (yx, 1 - t); all
edge-indexed data in this package follows that storage convention.
"""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any

import networkx as nx
import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import (
    DisconnectedNetworkError,
    DuplicateEdgeError,
    DuplicateVertexError,
    LoopEdgeError,
    NonPositiveConductanceError,
    SchemaError,
    UnknownVertexError,
)

logger = logging.getLogger(__name__)


# --- File schema ---


class EdgeDocument(BaseModel):
    """One entry of the ``edges`` array of a network file."""

    model_config = ConfigDict(extra="forbid")

    u: str
    v: str
    c: float = Field(allow_inf_nan=False)


class NetworkDocument(BaseModel):
    """Top-level network file: ``{"vertices": [...], "edges": [...]}``."""

    model_config = ConfigDict(extra="forbid")

    vertices: list[str] = Field(min_length=1)
    edges: list[EdgeDocument]


# --- Model ---


@dataclass(frozen=True)
class Edge:
    """An undirected edge in canonical orientation (``u < v``)."""

    u: str
    v: str
    conductance: float


class Network:
    """Finite connected network with positive conductances.

    Instances are immutable after construction. Vertices keep file order and get dense
    indices in that order; edges keep file order and are stored in canonical orientation.

    Attributes:
        vertices: Vertex identifiers in file order.
        edges: Edges in file order, canonical orientation.
        tail: Index of each edge's start vertex (``u``).
        head: Index of each edge's end vertex (``v``).
        conductances: Conductance of each edge.
        adjacency: Per vertex, ``(neighbor index, edge index)`` pairs in edge order.
        measures: Vertex measure m0(x) = sum of incident conductances.
    """

    def __init__(self, vertices: Sequence[str], edges: Iterable[tuple[str, str, float]]) -> None:
        index: dict[str, int] = {}
        for vertex in vertices:
            if vertex in index:
                raise DuplicateVertexError(vertex)
            index[vertex] = len(index)

        canonical: list[Edge] = []
        seen: set[tuple[str, str]] = set()
        for u, v, c in edges:
            for endpoint in (u, v):
                if endpoint not in index:
                    raise UnknownVertexError(endpoint)
            if u == v:
                raise LoopEdgeError(u)
            conductance = float(c)
            if not math.isfinite(conductance):
                raise SchemaError(f"non-finite conductance {c!r} on edge {u!r}-{v!r}")
            if conductance <= 0.0:
                raise NonPositiveConductanceError(u, v, conductance)
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise DuplicateEdgeError(*key)
            seen.add(key)
            canonical.append(Edge(key[0], key[1], conductance))

        if not canonical:
            raise SchemaError("network needs at least one edge")

        self.vertices: tuple[str, ...] = tuple(vertices)
        self.edges: tuple[Edge, ...] = tuple(canonical)
        self._index = index

        self.tail = _frozen(np.array([index[e.u] for e in canonical], dtype=np.intp))
        self.head = _frozen(np.array([index[e.v] for e in canonical], dtype=np.intp))
        self.conductances = _frozen(np.array([e.conductance for e in canonical], dtype=float))

        adjacency: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        for k, (i, j) in enumerate(zip(self.tail.tolist(), self.head.tolist(), strict=True)):
            adjacency[i].append((j, k))
            adjacency[j].append((i, k))
        self.adjacency: tuple[tuple[tuple[int, int], ...], ...] = tuple(
            tuple(entries) for entries in adjacency
        )

        graph = self.graph
        if not nx.is_connected(graph):
            reached = nx.node_connected_component(graph, self.vertices[0])
            raise DisconnectedNetworkError([x for x in self.vertices if x not in reached])

        self.measures = _frozen(
            np.array(
                [math.fsum(self.conductances[k] for _, k in entries) for entries in adjacency]
            )
        )
        logger.debug(f"Built network with {self.n_vertices} vertices, {self.n_edges} edges")

    # --- Basic accessors ---

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def index_of(self, vertex: str) -> int:
        """Dense index of a vertex id."""
        try:
            return self._index[vertex]
        except KeyError:
            raise UnknownVertexError(vertex) from None

    def edge_label(self, k: int) -> str:
        """Human-readable ``u-v`` label of edge ``k``."""
        edge = self.edges[k]
        return f"{edge.u}-{edge.v}"

    @cached_property
    def graph(self) -> nx.Graph:
        """networkx view with conductances stored as the ``c`` edge attribute."""
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_weighted_edges_from(((e.u, e.v, e.conductance) for e in self.edges), weight="c")
        return g

    @cached_property
    def conductance_matrix(self) -> NDArray[np.float64]:
        """Dense symmetric matrix C with C[x, y] = c(xy)."""
        matrix = np.zeros((self.n_vertices, self.n_vertices))
        matrix[self.tail, self.head] = self.conductances
        matrix[self.head, self.tail] = self.conductances
        return _frozen(matrix)

    # --- Equality (round-trip comparisons) ---

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self) -> str:
        return f"Network(vertices={self.n_vertices}, edges={self.n_edges})"


def _frozen(array: NDArray[Any]) -> NDArray[Any]:
    array.setflags(write=False)
    return array


# --- Ingestion and serialization ---


def parse_network(text: str | bytes) -> Network:
    """Parse and validate a network document.

    Args:
        text: UTF-8 JSON document following the network file schema.

    Returns:
        A validated Network.

    Raises:
        SchemaError: The document is not valid JSON or violates the schema.
        NetworkValidationError: A structural invariant fails (loop, duplicate edge,
            nonpositive conductance, unknown vertex, disconnected graph).
    """
    try:
        document = NetworkDocument.model_validate_json(text)
    except ValidationError as e:
        details = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}"
            for err in e.errors()
        )
        raise SchemaError(f"schema violation: {details}") from e
    return Network(document.vertices, ((e.u, e.v, e.c) for e in document.edges))


def load_network(path: str | Path) -> Network:
    """Read a network file from disk."""
    data = Path(path).read_bytes()
    net = parse_network(data)
    logger.info(f"Loaded {net} from {path}")
    return net


def serialize_network(net: Network) -> str:
    """Render a network in the file schema (canonical orientation, file order)."""
    document = {
        "vertices": list(net.vertices),
        "edges": [{"u": e.u, "v": e.v, "c": e.conductance} for e in net.edges],
    }
    return json.dumps(document, indent=2)


# --- Measures and structure ---


def vertex_measure(net: Network, x: str) -> float:
    """m0(x): the sum of conductances of edges incident to ``x``."""
    i = net.index_of(x)
    return math.fsum(float(net.conductances[k]) for _, k in net.adjacency[i])


@dataclass(frozen=True)
class StructureReport:
    """Measures and structural predicates of a network.

    Attributes:
        vertex_measures: m0(x) per vertex id.
        alpha: Sum of square roots of incident conductances per vertex id.
        total_measure: m0 of the whole vertex set.
        bipartite: Whether the graph admits a proper 2-colouring.
        coloring: The 2-colouring (first vertex gets colour 0) when bipartite.
        is_tree: Whether the graph has no cycles.
        cycle_rank: |E| - |V| + 1.
        single_odd_cycle: Exactly one cycle, and it is odd.
    """

    vertex_measures: dict[str, float]
    alpha: dict[str, float]
    total_measure: float
    bipartite: bool
    coloring: dict[str, int] | None
    is_tree: bool
    cycle_rank: int
    single_odd_cycle: bool = field(default=False)

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-ready dictionary in fixed field order."""
        return {
            "vertex_measures": dict(self.vertex_measures),
            "alpha": dict(self.alpha),
            "total_measure": self.total_measure,
            "bipartite": self.bipartite,
            "coloring": None if self.coloring is None else dict(self.coloring),
            "is_tree": self.is_tree,
            "cycle_rank": self.cycle_rank,
            "single_odd_cycle": self.single_odd_cycle,
        }


def bipartite_coloring(net: Network) -> dict[str, int] | None:
    """Proper 2-colouring with the first vertex coloured 0, or None for odd cycles."""
    if not nx.is_bipartite(net.graph):
        return None
    raw = nx.bipartite.color(net.graph)
    flip = raw[net.vertices[0]]
    return {x: int(raw[x] ^ flip) for x in net.vertices}


def structure_report(net: Network) -> StructureReport:
    """Compute measures and the tree / bipartite / cycle predicates of a network."""
    measures = {x: float(net.measures[i]) for i, x in enumerate(net.vertices)}
    alpha = {
        x: math.fsum(math.sqrt(net.conductances[k]) for _, k in net.adjacency[i])
        for i, x in enumerate(net.vertices)
    }
    coloring = bipartite_coloring(net)
    cycle_rank = net.n_edges - net.n_vertices + 1
    return StructureReport(
        vertex_measures=measures,
        alpha=alpha,
        total_measure=math.fsum(measures.values()),
        bipartite=coloring is not None,
        coloring=coloring,
        is_tree=cycle_rank == 0,
        cycle_rank=cycle_rank,
        single_odd_cycle=cycle_rank == 1 and coloring is None,
    )
