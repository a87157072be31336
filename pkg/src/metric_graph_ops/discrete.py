"""The transition operator P on l2(X0, m0) and its spectral decomposition."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from .errors import EigensolverError, GridMismatchError
from .network import Network

logger = logging.getLogger(__name__)

CLUSTER_GAP = 1e-9


@dataclass(frozen=True, eq=False)
class VertexFunction:
    """A complex function on the vertex set of a network."""

    network: Network
    values: NDArray[np.complex128]

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.complex128)
        if values.shape != (self.network.n_vertices,):
            raise GridMismatchError(
                f"expected {self.network.n_vertices} vertex values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("vertex function has non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_mapping(cls, net: Network, mapping: dict[str, complex]) -> VertexFunction:
        """Build from ``{vertex id: value}``; missing vertices are 0."""
        values = np.zeros(net.n_vertices, dtype=complex)
        for vertex, value in mapping.items():
            values[net.index_of(vertex)] = value
        return cls(net, values)

    def to_dict(self) -> dict[str, list[float]]:
        return {x: [v.real, v.imag] for x, v in zip(self.network.vertices, self.values.tolist())}


def ell2_inner(h: VertexFunction, g: VertexFunction) -> complex:
    """<h, g> in l2(X0, m0), conjugate-linear in ``h``."""
    if h.network != g.network:
        raise GridMismatchError("vertex functions live on different networks")
    return complex(np.sum(h.network.measures * np.conj(h.values) * g.values))


def ell2_norm(h: VertexFunction) -> float:
    return math.sqrt(max(ell2_inner(h, h).real, 0.0))


def transition_matrix(net: Network) -> NDArray[np.float64]:
    """Dense matrix of P: row x holds c(xy) / m0(x)."""
    return net.conductance_matrix / net.measures[:, None]


def apply_transition(net: Network, h: VertexFunction) -> VertexFunction:
    """(P h)(x) = (1 / m0(x)) * sum over y ~ x of c(xy) h(y)."""
    if h.network != net:
        raise GridMismatchError("vertex function does not live on this network")
    return VertexFunction(net, (net.conductance_matrix @ h.values) / net.measures)


@dataclass(frozen=True, eq=False)
class DiscreteEigenpair:
    """Eigenvalue of P with an eigenvector of unit l2(X0, m0) norm."""

    value: float
    vector: VertexFunction

    def to_dict(self) -> dict[str, Any]:
        return {"value": self.value, "vector": self.vector.to_dict()}


def canonical_basis(basis: NDArray[Any]) -> NDArray[Any]:
    """Rotate an orthonormal basis of a subspace into a representation-independent one.

    Pivoted QR of the transposed basis makes basis vector i vanish on the pivot entries of
    the vectors before it; the pivots depend only on the subspace. Columns come back
    sorted by the index of their largest-magnitude entry, each with its first
    significant entry positive.
    """
    if basis.shape[1] == 0:
        return basis
    z, _, _ = linalg.qr(basis.T, pivoting=True, mode="economic")
    rotated = basis @ z
    leading = np.argmax(np.abs(rotated), axis=0)
    rotated = rotated[:, np.argsort(leading, kind="stable")]
    return normalize_signs(rotated)


def normalize_signs(basis: NDArray[Any], rel_tol: float = 1e-12) -> NDArray[Any]:
    """Flip each column so its first significant entry has positive real part."""
    out = np.array(basis, copy=True)
    for j in range(out.shape[1]):
        column = out[:, j]
        scale = float(np.max(np.abs(column))) if column.size else 0.0
        significant = np.flatnonzero(np.abs(column) > rel_tol * scale)
        if significant.size and column[significant[0]].real < 0:
            out[:, j] = -column
    return out


def _clusters(values: NDArray[np.float64], gap: float) -> list[slice]:
    bounds = [0, *(np.flatnonzero(np.abs(np.diff(values)) > gap) + 1).tolist(), len(values)]
    return [slice(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]


def discrete_spectrum(net: Network, cluster_gap: float = CLUSTER_GAP) -> list[DiscreteEigenpair]:
    """Full spectral decomposition of P, values descending.

    Uses the symmetric matrix M = D^(-1/2) C D^(-1/2), which is similar to P, and maps
    eigenvectors back through D^(-1/2). Degenerate clusters (consecutive gaps <=
    ``cluster_gap``) are rotated into a canonical orthonormal basis.

    Raises:
        EigensolverError: The dense symmetric eigensolver did not converge.
    """
    scale = 1.0 / np.sqrt(net.measures)
    symmetric = scale[:, None] * net.conductance_matrix * scale[None, :]
    try:
        values, vectors = linalg.eigh(symmetric)
    except linalg.LinAlgError as e:
        raise EigensolverError(f"eigh failed on {net!r}: {e}") from e

    order = np.argsort(-values, kind="stable")
    values = np.clip(values[order], -1.0, 1.0)
    vectors = vectors[:, order]

    for cluster in _clusters(values, cluster_gap):
        size = cluster.stop - cluster.start
        if size > 1:
            logger.debug(
                f"Degenerate P-eigenvalue {values[cluster.start]:.12g} with multiplicity {size}"
            )
        vectors[:, cluster] = canonical_basis(vectors[:, cluster])

    return [
        DiscreteEigenpair(float(values[j]), VertexFunction(net, scale * vectors[:, j]))
        for j in range(len(values))
    ]


def spectral_projector(pairs: Sequence[DiscreteEigenpair], h: VertexFunction) -> VertexFunction:
    """sum of value_i <v_i, h> v_i: the spectral reconstruction of P h."""
    total = np.zeros(h.network.n_vertices, dtype=complex)
    for pair in pairs:
        total += pair.value * ell2_inner(pair.vector, h) * pair.vector.values
    return VertexFunction(h.network, total)


def random_vertex_function(net: Network, rng: np.random.Generator) -> VertexFunction:
    """Complex standard normal entries."""
    n = net.n_vertices
    return VertexFunction(net, rng.standard_normal(n) + 1j * rng.standard_normal(n))


def as_vertex_function(net: Network, values: ArrayLike) -> VertexFunction:
    return VertexFunction(net, np.asarray(values, dtype=complex))
