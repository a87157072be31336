"""Functions on the metric graph: uniform samples per edge and closed-form trig per edge.

A SampledEdgeFunction stores one array of N+1 samples per edge (t_k = k/N, canonical
orientation); the reversed view F(yx, t_k) = F(xy, t_{N-k}) is index reflection.

A TrigEdgeFunction stores the coefficients of

    F(xy, t) = b(x) cos(sqrt(lam) t) + a(xy) Phi(sqrt(lam), t)

with one ``b`` per vertex and one ``a`` per directed edge. This is the form taken by every
eigenfunction of the Kirchhoff Laplacian.

All scalars are complex. Reductions over edges run in edge order.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import simpson

from .errors import GridMismatchError
from .network import Network

logger = logging.getLogger(__name__)

DEFAULT_GRID = 256

ComplexArray = NDArray[np.complex128]


def phi(z: ArrayLike, t: ArrayLike = 1.0) -> Any:
    """Phi(z, t) = sin(z t) / z, extended by t at z = 0. Vectorised over z and t."""
    z_b, t_b = np.broadcast_arrays(np.asarray(z, dtype=float), np.asarray(t, dtype=float))
    zero = z_b == 0.0
    safe = np.where(zero, 1.0, z_b)
    out = np.where(zero, t_b, np.sin(z_b * t_b) / safe)
    return float(out) if out.ndim == 0 else out


def grid_nodes(grid_size: int) -> NDArray[np.float64]:
    """Uniform nodes t_k = k/N, k = 0..N."""
    return np.linspace(0.0, 1.0, grid_size + 1)


def check_grid_size(grid_size: int) -> None:
    if grid_size < 2 or grid_size % 2:
        raise GridMismatchError(f"grid size must be even and >= 2, got {grid_size}")


# --- Sampled representation ---


@dataclass(frozen=True, eq=False)
class SampledEdgeFunction:
    """Per-edge uniform samples of a function in L2(X1, m1).

    Attributes:
        network: The network the function lives on.
        values: Complex array of shape (|E|, N + 1), canonical orientation.
    """

    network: Network
    values: ComplexArray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.complex128)
        if values.ndim != 2 or values.shape[0] != self.network.n_edges:
            raise GridMismatchError(
                f"expected {self.network.n_edges} sample rows, got shape {values.shape}"
            )
        check_grid_size(values.shape[1] - 1)
        if not np.all(np.isfinite(values)):
            raise ValueError("sampled edge function has non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def grid_size(self) -> int:
        return int(self.values.shape[1] - 1)

    @property
    def step(self) -> float:
        return 1.0 / self.grid_size

    def oriented(self, k: int, reverse: bool = False) -> ComplexArray:
        """Samples of edge ``k`` from its tail (or from its head when ``reverse``)."""
        row = self.values[k]
        return row[::-1] if reverse else row

    def directed(self, x: str, y: str) -> ComplexArray:
        """Samples of F(xy, t_k), k = 0..N."""
        net = self.network
        i, j = net.index_of(x), net.index_of(y)
        for neighbor, k in net.adjacency[i]:
            if neighbor == j:
                return self.oriented(k, reverse=int(net.tail[k]) != i)
        raise KeyError(f"{x!r} and {y!r} are not adjacent")

    def compatible_with(self, other: SampledEdgeFunction) -> bool:
        return self.network == other.network and self.grid_size == other.grid_size

    def _require_compatible(self, other: SampledEdgeFunction) -> None:
        if not self.compatible_with(other):
            raise GridMismatchError("edge functions differ in network or grid size")

    def __add__(self, other: SampledEdgeFunction) -> SampledEdgeFunction:
        self._require_compatible(other)
        return SampledEdgeFunction(self.network, self.values + other.values)

    def __sub__(self, other: SampledEdgeFunction) -> SampledEdgeFunction:
        self._require_compatible(other)
        return SampledEdgeFunction(self.network, self.values - other.values)

    def __mul__(self, scalar: complex) -> SampledEdgeFunction:
        return SampledEdgeFunction(self.network, self.values * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> SampledEdgeFunction:
        return SampledEdgeFunction(self.network, -self.values)


def constant_function(
    net: Network, grid_size: int = DEFAULT_GRID, value: complex = 1.0
) -> SampledEdgeFunction:
    """The constant function on every edge."""
    return SampledEdgeFunction(net, np.full((net.n_edges, grid_size + 1), value, dtype=complex))


def sampled_from_callable(
    net: Network,
    grid_size: int,
    func: Callable[[int, NDArray[np.float64]], ArrayLike],
) -> SampledEdgeFunction:
    """Sample ``func(edge_index, t)`` on each canonical edge."""
    t = grid_nodes(grid_size)
    rows = [
        np.broadcast_to(np.asarray(func(k, t), dtype=complex), t.shape)
        for k in range(net.n_edges)
    ]
    return SampledEdgeFunction(net, np.vstack(rows))


def random_sampled_function(
    net: Network,
    grid_size: int,
    rng: np.random.Generator,
    smooth: bool = False,
    modes: int = 4,
) -> SampledEdgeFunction:
    """Seeded random function with a shared value at each vertex.

    The vertex traces are one complex normal per vertex, shared by all incident edges.
    Interior samples are independent complex normals, or (``smooth=True``) a linear
    interpolation of the vertex values plus ``modes`` random sine modes with 1/m decay.
    """
    n = grid_size
    vertex = rng.standard_normal(net.n_vertices) + 1j * rng.standard_normal(net.n_vertices)
    start = vertex[net.tail][:, None]
    end = vertex[net.head][:, None]
    if smooth:
        t = grid_nodes(n)[None, :]
        values = start * (1.0 - t) + end * t
        for m in range(1, modes + 1):
            amp = rng.standard_normal(net.n_edges) + 1j * rng.standard_normal(net.n_edges)
            values = values + (amp / m)[:, None] * np.sin(math.pi * m * t)
    else:
        values = rng.standard_normal((net.n_edges, n + 1)) + 1j * rng.standard_normal(
            (net.n_edges, n + 1)
        )
        values[:, :1] = start
        values[:, -1:] = end
    return SampledEdgeFunction(net, values)


def _simpson(values: ComplexArray, dx: float) -> ComplexArray:
    return simpson(values.real, dx=dx, axis=-1) + 1j * simpson(values.imag, dx=dx, axis=-1)


def inner_product(f: SampledEdgeFunction, g: SampledEdgeFunction) -> complex:
    """<F, G> in L2(X1, m1): sum over edges of c(xy) * Simpson(conj(F_xy) G_xy).

    Conjugate-linear in the first argument.

    Raises:
        GridMismatchError: The functions live on different networks or grids.
    """
    f._require_compatible(g)
    per_edge = _simpson(np.conj(f.values) * g.values, f.step)
    return complex(np.sum(f.network.conductances * per_edge))


def norm(f: SampledEdgeFunction) -> float:
    return math.sqrt(max(inner_product(f, f).real, 0.0))


def stacked_norms(net: Network, values: ComplexArray, step: float) -> NDArray[np.float64]:
    """L2(X1, m1) norms of a stack of sample arrays with shape (..., |E|, N + 1)."""
    energy = simpson(np.abs(values) ** 2, dx=step, axis=-1)
    return np.sqrt(np.maximum(energy @ net.conductances, 0.0))


# --- Closed-form trigonometric representation ---


@dataclass(frozen=True, eq=False)
class TrigEdgeFunction:
    """Edgewise b(x) cos(w t) + a(xy) Phi(w, t) with w = sqrt(lam).

    Attributes:
        network: The network the function lives on.
        lam: Spectral parameter, >= 0.
        b: Per-vertex coefficient of cos(w t), shape (|V|,).
        a: Per-directed-edge coefficient of Phi(w, t), shape (|E|, 2); column 0 holds
            a(uv) for canonical (u, v), column 1 holds a(vu).
        eigenfunction: Whether the function is meant to satisfy the Kirchhoff conditions.
    """

    network: Network
    lam: float
    b: ComplexArray
    a: ComplexArray
    eigenfunction: bool = False

    def __post_init__(self) -> None:
        if self.lam < 0.0 or not math.isfinite(self.lam):
            raise ValueError(f"spectral parameter must be finite and >= 0, got {self.lam}")
        b = np.array(self.b, dtype=np.complex128).reshape(self.network.n_vertices)
        a = np.array(self.a, dtype=np.complex128).reshape(self.network.n_edges, 2)
        b.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a", a)

    @property
    def omega(self) -> float:
        return math.sqrt(self.lam)

    def edge_values(self, t: ArrayLike) -> ComplexArray:
        """Values on every canonical edge at parameters ``t``; shape (|E|, len(t))."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        w = self.omega
        cos_part = np.cos(w * t_arr)[None, :]
        phi_part = np.asarray(phi(w, t_arr))[None, :]
        return self.b[self.network.tail][:, None] * cos_part + self.a[:, :1] * phi_part

    def reversed_edge_values(self, t: ArrayLike) -> ComplexArray:
        """Values computed from the head-side coefficients at parameters 1 - t."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        s = 1.0 - t_arr
        w = self.omega
        cos_part = np.cos(w * s)[None, :]
        phi_part = np.asarray(phi(w, s))[None, :]
        return self.b[self.network.head][:, None] * cos_part + self.a[:, 1:] * phi_part

    def second_derivative_values(self, t: ArrayLike) -> ComplexArray:
        """Exact second derivative of the canonical-edge expressions."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        w = self.omega
        tail_b = self.b[self.network.tail][:, None]
        return -(w**2) * tail_b * np.cos(w * t_arr)[None, :] - w * self.a[:, :1] * np.sin(
            w * t_arr
        )[None, :]

    def directed_a(self, x: str, y: str) -> complex:
        """The coefficient a(xy)."""
        net = self.network
        i, j = net.index_of(x), net.index_of(y)
        for neighbor, k in net.adjacency[i]:
            if neighbor == j:
                return complex(self.a[k, 0] if int(net.tail[k]) == i else self.a[k, 1])
        raise KeyError(f"{x!r} and {y!r} are not adjacent")

    def scaled(self, factor: complex) -> TrigEdgeFunction:
        return TrigEdgeFunction(
            self.network, self.lam, self.b * factor, self.a * factor, self.eigenfunction
        )

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready coefficients: ``b`` per vertex id, ``a`` per ``"x->y"`` key."""
        net = self.network
        a: dict[str, list[float]] = {}
        for k, edge in enumerate(net.edges):
            a[f"{edge.u}->{edge.v}"] = [self.a[k, 0].real, self.a[k, 0].imag]
            a[f"{edge.v}->{edge.u}"] = [self.a[k, 1].real, self.a[k, 1].imag]
        return {
            "b": {x: [self.b[i].real, self.b[i].imag] for i, x in enumerate(net.vertices)},
            "a": a,
        }


def sample_trig(func: TrigEdgeFunction, grid_size: int = DEFAULT_GRID) -> SampledEdgeFunction:
    """Evaluate a closed-form edge function on the uniform grid."""
    check_grid_size(grid_size)
    return SampledEdgeFunction(func.network, func.edge_values(grid_nodes(grid_size)))


@lru_cache(maxsize=16)
def _gauss_legendre(order: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1.0) / 2.0, w / 2.0


def trig_inner_product(f: TrigEdgeFunction, g: TrigEdgeFunction) -> complex:
    """<F, G> in L2(X1, m1) by Gauss-Legendre quadrature on each edge.

    The node count grows with the frequencies so that the trigonometric integrands are
    integrated to rounding accuracy.
    """
    if f.network != g.network:
        raise GridMismatchError("edge functions live on different networks")
    order = 48 + 2 * int(math.ceil(f.omega + g.omega))
    t, w = _gauss_legendre(order)
    per_edge = (np.conj(f.edge_values(t)) * g.edge_values(t)) @ w
    return complex(np.sum(f.network.conductances * per_edge))


def trig_norm(f: TrigEdgeFunction) -> float:
    return math.sqrt(max(trig_inner_product(f, f).real, 0.0))


def kirchhoff_coefficients(func: TrigEdgeFunction) -> ComplexArray:
    """Per-vertex sum of c(xy) a(xy): the weighted derivative sum at each vertex."""
    net = func.network
    out = np.zeros(net.n_vertices, dtype=complex)
    np.add.at(out, net.tail, net.conductances * func.a[:, 0])
    np.add.at(out, net.head, net.conductances * func.a[:, 1])
    return out


def orientation_defect(func: TrigEdgeFunction, samples: int = 33) -> float:
    """Max mismatch between the tail-side and head-side expressions, relative to scale."""
    t = np.linspace(0.0, 1.0, samples)
    forward = func.edge_values(t)
    backward = func.reversed_edge_values(t)
    scale = max(1.0, float(np.max(np.abs(forward))))
    return float(np.max(np.abs(forward - backward))) / scale


def second_derivative_defect(func: TrigEdgeFunction, grid_size: int = DEFAULT_GRID) -> float:
    """Max |F'' + lam F| on the grid, relative to max(1, lam) * max |F|."""
    t = grid_nodes(grid_size)
    values = func.edge_values(t)
    scale = max(1.0, func.lam) * max(1.0, float(np.max(np.abs(values))))
    return float(np.max(np.abs(func.second_derivative_values(t) + func.lam * values))) / scale


# --- Vertex conditions ---


@dataclass(frozen=True)
class VertexResidual:
    """Continuity spread and weighted derivative sum at one vertex."""

    vertex: str
    continuity_spread: float
    kirchhoff: complex


def vertex_residuals(func: SampledEdgeFunction | TrigEdgeFunction) -> list[VertexResidual]:
    """Continuity and Kirchhoff residuals at every vertex.

    For sampled functions the derivative at a vertex is the one-sided stencil
    (-3 F0 + 4 F1 - F2) / (2h). For trig functions it is the exact coefficient a(xy),
    and the vertex values are read from the canonical expression at t = 0 and t = 1.
    """
    net = func.network
    if isinstance(func, SampledEdgeFunction):
        h = func.step

        def trace(k: int, reverse: bool) -> tuple[complex, complex]:
            row = func.oriented(k, reverse)
            slope = (-3.0 * row[0] + 4.0 * row[1] - row[2]) / (2.0 * h)
            return complex(row[0]), complex(slope)

    else:
        ends = func.edge_values(np.array([0.0, 1.0]))

        def trace(k: int, reverse: bool) -> tuple[complex, complex]:
            value = ends[k, 1] if reverse else ends[k, 0]
            return complex(value), complex(func.a[k, 1] if reverse else func.a[k, 0])

    residuals: list[VertexResidual] = []
    for i, x in enumerate(net.vertices):
        values: list[complex] = []
        flux = 0j
        for _, k in net.adjacency[i]:
            value, slope = trace(k, reverse=int(net.tail[k]) != i)
            values.append(value)
            flux += float(net.conductances[k]) * slope
        mean = sum(values) / len(values)
        spread = max(abs(v - mean) for v in values)
        residuals.append(VertexResidual(x, float(spread), complex(flux)))
    return residuals
