"""Exception hierarchy for metric-graph-ops."""

from __future__ import annotations


class MetricGraphError(Exception):
    """Base class for all errors raised by this package."""


# --- Input validation (CLI exit status 3) ---


class NetworkValidationError(MetricGraphError):
    """A network document or network construction request is invalid."""


class SchemaError(NetworkValidationError):
    """The network document does not conform to the file schema."""


class UnknownVertexError(NetworkValidationError):
    """An edge or query names a vertex that is not declared."""

    def __init__(self, vertex: str) -> None:
        super().__init__(f"unknown vertex: {vertex!r}")
        self.vertex = vertex


class DuplicateVertexError(NetworkValidationError):
    """A vertex identifier is declared twice."""

    def __init__(self, vertex: str) -> None:
        super().__init__(f"duplicate vertex: {vertex!r}")
        self.vertex = vertex


class LoopEdgeError(NetworkValidationError):
    """An edge joins a vertex to itself."""

    def __init__(self, vertex: str) -> None:
        super().__init__(f"loop edge at vertex {vertex!r}")
        self.vertex = vertex


class DuplicateEdgeError(NetworkValidationError):
    """The same unordered vertex pair appears twice."""

    def __init__(self, u: str, v: str) -> None:
        super().__init__(f"duplicate edge {u!r}-{v!r}")
        self.u = u
        self.v = v


class NonPositiveConductanceError(NetworkValidationError):
    """An edge has conductance <= 0."""

    def __init__(self, u: str, v: str, conductance: float) -> None:
        super().__init__(f"nonpositive conductance {conductance!r} on edge {u!r}-{v!r}")
        self.u = u
        self.v = v
        self.conductance = conductance


class DisconnectedNetworkError(NetworkValidationError):
    """The network is not connected."""

    def __init__(self, unreachable: list[str]) -> None:
        preview = ", ".join(repr(v) for v in unreachable[:5])
        more = "" if len(unreachable) <= 5 else f" (+{len(unreachable) - 5} more)"
        super().__init__(f"disconnected graph: unreachable vertices {preview}{more}")
        self.unreachable = unreachable


# --- Numerical preconditions ---


class GridMismatchError(MetricGraphError):
    """Two edge functions live on different networks or grids."""


class MisalignedTauError(MetricGraphError):
    """A time shift is not an integer multiple of the grid step."""

    def __init__(self, tau: float, grid_size: int) -> None:
        super().__init__(f"tau={tau!r} is not a multiple of 1/{grid_size}")
        self.tau = tau
        self.grid_size = grid_size


class HorizonError(MetricGraphError):
    """A requested shift exceeds the computed extension horizon."""


class SpectralParameterError(MetricGraphError):
    """A spectral parameter is outside the domain of the requested map."""


class EigensolverError(MetricGraphError):
    """The dense eigensolver failed to converge."""


class InitialDataError(MetricGraphError):
    """A wave initial-data selector names an eigenpair that does not exist."""


class RunParameterError(MetricGraphError):
    """A run parameter (band index, time bound) is outside its range."""
