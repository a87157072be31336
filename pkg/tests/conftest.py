"""Shared fixtures: the standard small networks and a seeded random network builder."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Iterator
from pathlib import Path

import numpy as np
import pytest

from metric_graph_ops.network import Network

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

RandomNetworkFactory = Callable[[int], Network]


def build_random_network(seed: int, max_vertices: int = 8) -> Network:
    """Random connected network: a random spanning tree plus extra edges, c in [0.5, 2]."""
    rng = np.random.default_rng(seed)
    size = int(rng.integers(2, max_vertices + 1))
    vertices = [f"v{i}" for i in range(size)]
    pairs: set[tuple[int, int]] = set()
    for i in range(1, size):
        pairs.add((int(rng.integers(0, i)), i))
    candidates = [p for p in itertools.combinations(range(size), 2) if p not in pairs]
    extra = int(rng.integers(0, len(candidates) + 1)) if candidates else 0
    for idx in rng.permutation(len(candidates))[:extra].tolist():
        pairs.add(candidates[idx])
    edges = [
        (vertices[i], vertices[j], float(rng.uniform(0.5, 2.0))) for i, j in sorted(pairs)
    ]
    return Network(vertices, edges)


@pytest.fixture
def isolated_logging() -> Iterator[None]:
    """Remove root handlers installed during the test and restore the root level."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    for handler in list(root.handlers):
        if handler not in handlers:
            root.removeHandler(handler)
            handler.close()
    root.setLevel(level)


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def edge_net() -> Network:
    """The single unit edge x-y."""
    return Network(["x", "y"], [("x", "y", 1.0)])


@pytest.fixture
def triangle() -> Network:
    """Triangle x, y, z with unit conductances."""
    return Network(["x", "y", "z"], [("x", "y", 1.0), ("y", "z", 1.0), ("x", "z", 1.0)])


@pytest.fixture
def path3() -> Network:
    """Path a-b-c with conductances 1 and 2."""
    return Network(["a", "b", "c"], [("a", "b", 1.0), ("b", "c", 2.0)])


@pytest.fixture
def square() -> Network:
    """4-cycle a-b-c-d with unit conductances."""
    return Network(
        ["a", "b", "c", "d"],
        [("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 1.0), ("a", "d", 1.0)],
    )


@pytest.fixture
def star() -> Network:
    """Star with centre o and three unit leaves."""
    return Network(["o", "p", "q", "r"], [("o", "p", 1.0), ("o", "q", 1.0), ("o", "r", 1.0)])


@pytest.fixture
def random_network() -> RandomNetworkFactory:
    """Builder of seeded random connected networks with at most 8 vertices."""
    return build_random_network
