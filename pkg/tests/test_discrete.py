"""Tests for the transition operator P and its eigendecomposition."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metric_graph_ops.discrete import (
    VertexFunction,
    apply_transition,
    as_vertex_function,
    canonical_basis,
    discrete_spectrum,
    ell2_inner,
    ell2_norm,
    random_vertex_function,
    spectral_projector,
    transition_matrix,
)
from metric_graph_ops.errors import GridMismatchError
from metric_graph_ops.network import Network, structure_report

from .conftest import RandomNetworkFactory, build_random_network


class TestTransition:
    """Tests for P h(x) = sum c(xy) h(y) / m0(x)."""

    def test_triangle_example(self, triangle: Network) -> None:
        """Should average the two neighbours on the unit triangle."""
        h = as_vertex_function(triangle, [1.0, -1.0, 0.0])

        assert apply_transition(triangle, h).values == pytest.approx([-0.5, 0.5, 0.0])

    def test_constants_are_fixed(self, path3: Network) -> None:
        one = as_vertex_function(path3, np.ones(3))

        assert apply_transition(path3, one).values == pytest.approx([1.0, 1.0, 1.0], abs=1e-15)

    def test_matrix_rows_are_stochastic(self, path3: Network) -> None:
        matrix = transition_matrix(path3)

        assert matrix.sum(axis=1) == pytest.approx([1.0, 1.0, 1.0])
        assert matrix[1].tolist() == pytest.approx([1.0 / 3.0, 0.0, 2.0 / 3.0])

    def test_foreign_function_rejected(self, triangle: Network, path3: Network) -> None:
        with pytest.raises(GridMismatchError):
            apply_transition(triangle, as_vertex_function(path3, np.ones(3)))

    def test_wrong_length_rejected(self, triangle: Network) -> None:
        with pytest.raises(GridMismatchError):
            VertexFunction(triangle, np.ones(2))

    def test_from_mapping(self, triangle: Network) -> None:
        h = VertexFunction.from_mapping(triangle, {"y": 2.0})

        assert h.values.tolist() == [0.0, 2.0, 0.0]
        assert h.to_dict()["y"] == [2.0, 0.0]

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(0, 100))
    def test_self_adjoint_in_weighted_space(self, seed: int, net_seed: int) -> None:
        """Should satisfy <Pf, g> = <f, Pg> in l2(m0)."""
        net = build_random_network(net_seed)
        rng = np.random.default_rng(seed)
        f = random_vertex_function(net, rng)
        g = random_vertex_function(net, rng)
        lhs = ell2_inner(apply_transition(net, f), g)
        rhs = ell2_inner(f, apply_transition(net, g))

        assert abs(lhs - rhs) <= 1e-12 * ell2_norm(f) * ell2_norm(g)


class TestDiscreteSpectrum:
    """Tests for discrete_spectrum."""

    def test_triangle_values(self, triangle: Network) -> None:
        """Should give {1, -1/2, -1/2} for the unit triangle."""
        values = [pair.value for pair in discrete_spectrum(triangle)]

        assert values == pytest.approx([1.0, -0.5, -0.5], abs=1e-12)

    def test_single_edge_values(self, edge_net: Network) -> None:
        values = [pair.value for pair in discrete_spectrum(edge_net)]

        assert values == pytest.approx([1.0, -1.0], abs=1e-12)

    def test_top_eigenvector_is_positive_constant(self, path3: Network) -> None:
        """Should normalize the constant eigenvector to unit norm with positive sign."""
        top = discrete_spectrum(path3)[0]
        total = structure_report(path3).total_measure

        assert top.vector.values.real == pytest.approx([1.0 / math.sqrt(total)] * 3)

    def test_minus_one_iff_bipartite(self, path3: Network, triangle: Network) -> None:
        assert discrete_spectrum(path3)[-1].value == pytest.approx(-1.0, abs=1e-12)
        assert discrete_spectrum(triangle)[-1].value > -1.0 + 1e-6

    @pytest.mark.parametrize("seed", range(10))
    def test_orthonormal_eigenpairs(self, random_network: RandomNetworkFactory, seed: int) -> None:
        """Should return an l2(m0)-orthonormal eigenbasis with small residuals."""
        net = random_network(seed)
        pairs = discrete_spectrum(net)
        gram = np.array([[ell2_inner(p.vector, q.vector) for q in pairs] for p in pairs])

        assert np.max(np.abs(gram - np.eye(len(pairs)))) <= 1e-10
        for pair in pairs:
            image = apply_transition(net, pair.vector).values
            assert np.max(np.abs(image - pair.value * pair.vector.values)) <= 1e-10

    def test_values_descending_and_bounded(self, random_network: RandomNetworkFactory) -> None:
        values = [pair.value for pair in discrete_spectrum(random_network(3))]

        assert values == sorted(values, reverse=True)
        assert all(-1.0 <= v <= 1.0 for v in values)

    def test_deterministic(self, triangle: Network) -> None:
        first = discrete_spectrum(triangle)
        second = discrete_spectrum(triangle)

        for a, b in zip(first, second, strict=True):
            assert np.array_equal(a.vector.values, b.vector.values)

    @pytest.mark.parametrize("seed", range(5))
    def test_spectral_reconstruction(self, random_network: RandomNetworkFactory, seed: int) -> None:
        """Should rebuild P h from the eigenpairs."""
        net = random_network(seed)
        pairs = discrete_spectrum(net)
        h = random_vertex_function(net, np.random.default_rng(seed))
        rebuilt = spectral_projector(pairs, h).values

        assert np.max(np.abs(rebuilt - apply_transition(net, h).values)) <= 1e-10


class TestCanonicalBasis:
    """Tests for the representation-independent rotation of degenerate clusters."""

    def test_preserves_span_and_orthonormality(self) -> None:
        rng = np.random.default_rng(11)
        q, _ = np.linalg.qr(rng.standard_normal((6, 3)))
        basis = canonical_basis(q)

        assert basis.T @ basis == pytest.approx(np.eye(3), abs=1e-12)
        projector = q @ q.T

        assert projector @ basis == pytest.approx(basis, abs=1e-12)

    def test_first_significant_entries_positive(self) -> None:
        rng = np.random.default_rng(12)
        q, _ = np.linalg.qr(rng.standard_normal((5, 2)))
        basis = canonical_basis(q)

        for j in range(basis.shape[1]):
            column = basis[:, j]
            first = column[np.flatnonzero(np.abs(column) > 1e-12)[0]]
            assert first > 0

    def test_empty_basis(self) -> None:
        assert canonical_basis(np.zeros((4, 0))).shape == (4, 0)
