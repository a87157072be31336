"""Spectrum and eigenfunctions of the Kirchhoff Laplacian L, assembled from the spectrum of P.

Away from the Dirichlet values (pi n)^2, eigenvalues of L come in bands: each eigenvalue
t of P in the band interval I(n) lifts to lam = kappa(t, n), with eigenfunctions given by
the gamma lift of the P-eigenvector. At lam = (pi n)^2 the kernel of L - lam is computed
directly as a vertex part (cos(pi n t) on sign vectors) plus a flow part (sin(pi n t) on
divergence-free edge flows).
"""

from __future__ import annotations

import dataclasses
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
from scipy import linalg

from .discrete import DiscreteEigenpair, VertexFunction, canonical_basis, discrete_spectrum
from .edge_function import TrigEdgeFunction, phi, trig_inner_product, trig_norm
from .errors import SpectralParameterError
from .network import Network, StructureReport, structure_report

logger = logging.getLogger(__name__)

# Distance from +-1 below which a P-eigenvalue is treated as exactly +-1.
SNAP_TOL = 1e-9
# Distance from (pi n)^2 below which a spectral parameter counts as a Dirichlet value.
BOUNDARY_TOL = 1e-9
# Relative singular value cutoff for nullspace ranks.
NULLSPACE_RCOND = 1e-10


class EigenKind(str, Enum):
    """Where an eigenpair of L comes from."""

    BAND = "band"
    DIRICHLET_VERTEX = "dirichlet_vertex"
    DIRICHLET_FLOW = "dirichlet_flow"


# --- Bands and kappa ---


@dataclass(frozen=True)
class SpectralBand:
    """Band n: kappa(., n) maps the P-interval I onto the L-interval J.

    Attributes:
        n: Band number.
        lam_interval: J = [0, pi^2) for n = 0, ((pi n)^2, (pi (n+1))^2) otherwise.
        p_interval: I = (-1, 1] for n = 0, (-1, 1) otherwise.
    """

    n: int
    lam_interval: tuple[float, float]
    p_interval: tuple[float, float]

    def contains_p_value(self, t: float, snap: float = SNAP_TOL) -> bool:
        """Whether a P-eigenvalue belongs to I(n), with +-1 snapping."""
        if t <= -1.0 + snap:
            return False
        if t >= 1.0 - snap:
            return self.n == 0
        return True

    def contains_lambda(self, lam: float) -> bool:
        lo, hi = self.lam_interval
        if self.n == 0:
            return lo <= lam < hi
        return lo < lam < hi


def spectral_band(n: int) -> SpectralBand:
    if n < 0:
        raise SpectralParameterError(f"band number must be >= 0, got {n}")
    return SpectralBand(
        n=n,
        lam_interval=((math.pi * n) ** 2, (math.pi * (n + 1)) ** 2),
        p_interval=(-1.0, 1.0),
    )


def kappa(t: float, n: int) -> float:
    """Inverse of lam -> cos(sqrt(lam)) on band n.

    Args:
        t: A value in [-1, 1].
        n: Band number, >= 0.

    Returns:
        (pi n + arccos t)^2 for even n, (pi (n + 1) - arccos t)^2 for odd n.

    Raises:
        SpectralParameterError: ``t`` is outside [-1, 1] or ``n`` is negative.
    """
    if not -1.0 <= t <= 1.0:
        raise SpectralParameterError(f"kappa needs t in [-1, 1], got {t!r}")
    if n < 0:
        raise SpectralParameterError(f"band number must be >= 0, got {n}")
    angle = math.acos(t)
    if n % 2 == 0:
        return (math.pi * n + angle) ** 2
    return (math.pi * (n + 1) - angle) ** 2


def nearest_dirichlet_index(lam: float, tol: float = BOUNDARY_TOL) -> int | None:
    """n >= 1 with |lam - (pi n)^2| <= tol, or None."""
    if lam <= 0.0:
        return None
    n = round(math.sqrt(lam) / math.pi)
    if n >= 1 and abs(lam - (math.pi * n) ** 2) <= tol:
        return n
    return None


# --- Gamma lift ---


def gamma_lift(
    net: Network, lam: float, h: VertexFunction, tol: float = BOUNDARY_TOL
) -> TrigEdgeFunction:
    """Lift a vertex function to the solution of -F'' = lam F with vertex values h.

    On each edge the result interpolates h(x) at t = 0 and h(y) at t = 1:
    b(x) = h(x) and a(xy) = (h(y) - h(x) cos w) / Phi(w) with w = sqrt(lam).

    Raises:
        SpectralParameterError: ``lam`` is negative or a Dirichlet value (pi n)^2.
    """
    if lam < 0.0:
        raise SpectralParameterError(f"gamma lift needs lam >= 0, got {lam!r}")
    n = nearest_dirichlet_index(lam, tol)
    if n is not None:
        raise SpectralParameterError(f"gamma lift undefined at lam={lam!r} ~ (pi*{n})^2")
    w = math.sqrt(lam)
    cos_w = math.cos(w)
    phi_w = phi(w)
    values = h.values
    a = np.empty((net.n_edges, 2), dtype=complex)
    a[:, 0] = (values[net.head] - values[net.tail] * cos_w) / phi_w
    a[:, 1] = (values[net.tail] - values[net.head] * cos_w) / phi_w
    return TrigEdgeFunction(net, lam, values, a)


# --- Eigenpairs ---


@dataclass(frozen=True, eq=False)
class ContinuousEigenpair:
    """Eigenvalue of L with a unit-norm eigenfunction in closed form.

    Attributes:
        lam: The eigenvalue.
        eigenfunction: Unit-norm eigenfunction.
        kind: Band lift, Dirichlet vertex part or Dirichlet flow part.
        n: Band number, or the Dirichlet index for Dirichlet kinds.
        index: Position within its (kind, n) block.
        source_p_value: The P-eigenvalue a band pair was lifted from.
    """

    lam: float
    eigenfunction: TrigEdgeFunction
    kind: EigenKind
    n: int
    index: int
    source_p_value: float | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"lambda": self.lam, "kind": self.kind.value, "n": self.n}
        if self.source_p_value is not None:
            out["source_p_value"] = self.source_p_value
        out.update(self.eigenfunction.to_dict())
        return out


@dataclass(frozen=True)
class _BandCandidate:
    pair: DiscreteEigenpair
    lam: float
    rejected: bool


def _band_candidates(
    spectrum: Sequence[DiscreteEigenpair], n: int, tol: float
) -> list[_BandCandidate]:
    band = spectral_band(n)
    out: list[_BandCandidate] = []
    for pair in spectrum:
        if not band.contains_p_value(pair.value):
            continue
        t = 1.0 if pair.value >= 1.0 - SNAP_TOL else pair.value
        lam = kappa(t, n)
        out.append(_BandCandidate(pair, lam, nearest_dirichlet_index(lam, tol) is not None))
    return out


def band_eigenpairs(
    net: Network,
    n: int,
    spectrum: Sequence[DiscreteEigenpair] | None = None,
    tol: float = BOUNDARY_TOL,
) -> list[ContinuousEigenpair]:
    """Lift every P-eigenpair with value in I(n) to an eigenpair of L in band n.

    Each eigenfunction is sqrt(2) times the gamma lift, rescaled to unit norm. P-values
    whose lifted lam falls within ``tol`` of a Dirichlet value are skipped with a
    warning; those belong to the Dirichlet kernels. Pairs come in increasing lam.
    """
    if spectrum is None:
        spectrum = discrete_spectrum(net)
    pairs: list[ContinuousEigenpair] = []
    # kappa decreases in t on odd bands; index follows lam
    candidates = sorted(_band_candidates(spectrum, n, tol), key=lambda c: c.lam)
    for candidate in candidates:
        if candidate.rejected:
            logger.warning(
                f"Skipping P-value {candidate.pair.value:.15g} in band {n}: "
                f"lam={candidate.lam:.15g} is within {tol:g} of a Dirichlet value"
            )
            continue
        lifted = gamma_lift(net, candidate.lam, candidate.pair.vector, tol).scaled(math.sqrt(2.0))
        unit = dataclasses.replace(lifted.scaled(1.0 / trig_norm(lifted)), eigenfunction=True)
        pairs.append(
            ContinuousEigenpair(
                lam=candidate.lam,
                eigenfunction=unit,
                kind=EigenKind.BAND,
                n=n,
                index=len(pairs),
                source_p_value=candidate.pair.value,
            )
        )
    logger.debug(f"Band {n}: {len(pairs)} eigenpairs")
    return pairs


def orthonormalize(functions: Sequence[TrigEdgeFunction]) -> list[TrigEdgeFunction]:
    """Modified Gram-Schmidt in L2(X1, m1); drops numerically dependent members."""
    basis: list[TrigEdgeFunction] = []
    for func in functions:
        b, a = func.b.copy(), func.a.copy()
        for q in basis:
            current = TrigEdgeFunction(func.network, func.lam, b, a)
            coeff = trig_inner_product(q, current)
            b = b - coeff * q.b
            a = a - coeff * q.a
        residual = TrigEdgeFunction(func.network, func.lam, b, a, eigenfunction=True)
        size = trig_norm(residual)
        if size <= NULLSPACE_RCOND * max(1.0, trig_norm(func)):
            logger.debug(f"Dropping dependent basis function (norm {size:.3e})")
            continue
        basis.append(residual.scaled(1.0 / size))
    return basis


# --- Dirichlet kernels ---


def predicted_dirichlet_dims(report: StructureReport, n: int) -> tuple[int, int]:
    """(dim vertex part, dim flow part) from the bipartite and cycle-rank predicates."""
    if n % 2 == 0:
        return 1, report.cycle_rank
    return int(report.bipartite), report.cycle_rank - 1 + int(report.bipartite)


@dataclass(frozen=True)
class DirichletBlock:
    """ker(L - (pi n)^2) with computed and predicted dimensions."""

    n: int
    dim_vertex: int
    dim_flow: int
    predicted_vertex: int
    predicted_flow: int
    basis: list[ContinuousEigenpair] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return self.dim_vertex + self.dim_flow

    @property
    def mismatch(self) -> bool:
        return (self.dim_vertex, self.dim_flow) != (self.predicted_vertex, self.predicted_flow)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "dim_vertex": self.dim_vertex,
            "dim_flow": self.dim_flow,
            "predicted_vertex": self.predicted_vertex,
            "predicted_flow": self.predicted_flow,
            "mismatch": self.mismatch,
            "basis": [pair.to_dict() for pair in self.basis],
        }


def _vertex_kernel(net: Network, n: int, report: StructureReport) -> np.ndarray:
    """Basis of {h : h(x) = (-1)^n h(y) on every edge}, as columns."""
    sign = -1.0 if n % 2 else 1.0
    system = np.zeros((net.n_edges, net.n_vertices))
    system[np.arange(net.n_edges), net.tail] = 1.0
    system[np.arange(net.n_edges), net.head] = -sign
    basis = linalg.null_space(system, rcond=NULLSPACE_RCOND)
    if basis.shape[1] == 1:
        # Replace by the exact constant or sign vector when it spans the same line.
        if n % 2 == 0:
            exact = np.ones(net.n_vertices)
        elif report.coloring is not None:
            exact = np.array([1.0 - 2.0 * report.coloring[x] for x in net.vertices])
        else:
            return basis
        if np.allclose(system @ exact, 0.0):
            return exact[:, None] / np.linalg.norm(exact)
    return basis


def _flow_kernel(net: Network, n: int) -> np.ndarray:
    """Basis of symmetric (odd n) or antisymmetric (even n) divergence-free flows.

    Unknown 2k is a(uv) and 2k + 1 is a(vu) for canonical edge k = (u, v).
    """
    e, v = net.n_edges, net.n_vertices
    sign = 1.0 if n % 2 else -1.0  # (-1)^(n+1)
    system = np.zeros((e + v, 2 * e))
    rows = np.arange(e)
    system[rows, 2 * rows + 1] = 1.0
    system[rows, 2 * rows] = -sign
    system[e + net.tail, 2 * rows] = net.conductances
    system[e + net.head, 2 * rows + 1] = net.conductances
    return canonical_basis(linalg.null_space(system, rcond=NULLSPACE_RCOND))


def dirichlet_block(net: Network, n: int, report: StructureReport | None = None) -> DirichletBlock:
    """Compute ker(L - (pi n)^2) and compare its dimensions with the structural prediction.

    Raises:
        SpectralParameterError: ``n`` < 1.
    """
    if n < 1:
        raise SpectralParameterError(f"Dirichlet index must be >= 1, got {n}")
    report = report or structure_report(net)
    lam = (math.pi * n) ** 2
    vertex = _vertex_kernel(net, n, report)
    flows = _flow_kernel(net, n)

    vertex_funcs = [
        TrigEdgeFunction(net, lam, vertex[:, j], np.zeros((net.n_edges, 2)))
        for j in range(vertex.shape[1])
    ]
    flow_funcs = [
        TrigEdgeFunction(
            net, lam, np.zeros(net.n_vertices), math.pi * n * flows[:, j].reshape(net.n_edges, 2)
        )
        for j in range(flows.shape[1])
    ]
    vertex_basis = orthonormalize(vertex_funcs)
    flow_basis = orthonormalize(flow_funcs)

    basis = [
        ContinuousEigenpair(lam, func, EigenKind.DIRICHLET_VERTEX, n, j)
        for j, func in enumerate(vertex_basis)
    ] + [
        ContinuousEigenpair(lam, func, EigenKind.DIRICHLET_FLOW, n, j)
        for j, func in enumerate(flow_basis)
    ]
    predicted_vertex, predicted_flow = predicted_dirichlet_dims(report, n)
    block = DirichletBlock(
        n=n,
        dim_vertex=len(vertex_basis),
        dim_flow=len(flow_basis),
        predicted_vertex=predicted_vertex,
        predicted_flow=predicted_flow,
        basis=basis,
    )
    logger.debug(f"Dirichlet n={n}: vertex rank {block.dim_vertex}, flow rank {block.dim_flow}")
    if block.mismatch:
        logger.warning(
            f"Dirichlet n={n}: computed dims ({block.dim_vertex}, {block.dim_flow}) differ "
            f"from predicted ({predicted_vertex}, {predicted_flow})"
        )
    return block


def dirichlet_kernel(net: Network, n: int) -> list[ContinuousEigenpair]:
    """Orthonormal basis of ker(L - (pi n)^2): vertex part first, then flows."""
    return dirichlet_block(net, n).basis


# --- Report ---


@dataclass(frozen=True)
class RejectedPValue:
    """A P-eigenvalue whose band lift landed on a Dirichlet value."""

    n: int
    p_value: float
    lam: float

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "p_value": self.p_value, "lambda": self.lam}


@dataclass(frozen=True)
class BandBlock:
    n: int
    pairs: list[ContinuousEigenpair]

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "pairs": [pair.to_dict() for pair in self.pairs]}


_KIND_ORDER = {EigenKind.BAND: 0, EigenKind.DIRICHLET_VERTEX: 1, EigenKind.DIRICHLET_FLOW: 2}


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenpairs of L for bands 0..n_max and Dirichlet values 1..n_max.

    Attributes:
        n_max: Highest band and Dirichlet index covered.
        discrete: The P-spectrum the bands were lifted from.
        structure: Structural predicates of the network.
        bands: One block per band n = 0..n_max.
        dirichlet: One block per n = 1..n_max.
        rejected: P-values skipped because their lift hit a Dirichlet value.
    """

    n_max: int
    discrete: list[DiscreteEigenpair]
    structure: StructureReport
    bands: list[BandBlock]
    dirichlet: list[DirichletBlock]
    rejected: list[RejectedPValue]

    @property
    def eigenpairs(self) -> list[ContinuousEigenpair]:
        """All eigenpairs sorted by lam, then kind, n and index."""
        pairs = [p for block in self.bands for p in block.pairs]
        pairs += [p for block in self.dirichlet for p in block.basis]
        return sorted(pairs, key=lambda p: (p.lam, _KIND_ORDER[p.kind], p.n, p.index))

    @property
    def eigenvalues(self) -> list[float]:
        return [pair.lam for pair in self.eigenpairs]

    def predicates(self) -> dict[str, Any]:
        dims = [block.dimension for block in self.dirichlet]
        return {
            "bipartite": self.structure.bipartite,
            "is_tree": self.structure.is_tree,
            "cycle_rank": self.structure.cycle_rank,
            "single_odd_cycle": self.structure.single_odd_cycle,
            "band_counts": {str(block.n): len(block.pairs) for block in self.bands},
            "dirichlet_dimensions": {str(b.n): b.dimension for b in self.dirichlet},
            "all_dirichlet_kernels_trivial": all(d == 0 for d in dims),
            "dimension_mismatch": [b.n for b in self.dirichlet if b.mismatch],
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_max": self.n_max,
            "p_spectrum": [pair.value for pair in self.discrete],
            "bands": [block.to_dict() for block in self.bands],
            "dirichlet": [block.to_dict() for block in self.dirichlet],
            "rejected": [item.to_dict() for item in self.rejected],
            "predicates": self.predicates(),
        }


def spectrum_report(
    net: Network, n_max: int, spectrum: Sequence[DiscreteEigenpair] | None = None
) -> SpectrumReport:
    """Assemble every band and Dirichlet eigenpair of L up to index ``n_max``.

    Raises:
        SpectralParameterError: ``n_max`` is negative.
    """
    if n_max < 0:
        raise SpectralParameterError(f"n_max must be >= 0, got {n_max}")
    spectrum = list(spectrum) if spectrum is not None else discrete_spectrum(net)
    structure = structure_report(net)
    bands: list[BandBlock] = []
    rejected: list[RejectedPValue] = []
    for n in range(n_max + 1):
        bands.append(BandBlock(n, band_eigenpairs(net, n, spectrum)))
        rejected += [
            RejectedPValue(n, c.pair.value, c.lam)
            for c in _band_candidates(spectrum, n, BOUNDARY_TOL)
            if c.rejected
        ]
    dirichlet = [dirichlet_block(net, n, structure) for n in range(1, n_max + 1)]
    report = SpectrumReport(n_max, spectrum, structure, bands, dirichlet, rejected)
    logger.info(
        f"Spectrum up to n={n_max}: {len(report.eigenpairs)} eigenpairs "
        f"({len(rejected)} rejected)"
    )
    return report


# --- Predictions from the discrete spectrum alone ---


def predicted_eigenvalues(
    net: Network, n_max: int, spectrum: Sequence[DiscreteEigenpair] | None = None
) -> list[float]:
    """Sorted multiset {kappa(t, n) : t in the P-spectrum within I(n)} plus (pi n)^2 per predicted
    Dirichlet dimension, for n up to ``n_max``."""
    spectrum = list(spectrum) if spectrum is not None else discrete_spectrum(net)
    structure = structure_report(net)
    lams: list[float] = []
    for n in range(n_max + 1):
        lams += [c.lam for c in _band_candidates(spectrum, n, BOUNDARY_TOL) if not c.rejected]
    for n in range(1, n_max + 1):
        lams += [(math.pi * n) ** 2] * sum(predicted_dirichlet_dims(structure, n))
    return sorted(lams)


def predicted_averaging_spectrum(
    net: Network, n_max: int, spectrum: Sequence[DiscreteEigenpair] | None = None
) -> list[float]:
    """Sorted multiset {Phi(sqrt(lam))} over :func:`predicted_eigenvalues`.

    Dirichlet values contribute exact zeros.
    """
    values = [
        0.0 if nearest_dirichlet_index(lam) is not None else float(phi(math.sqrt(lam)))
        for lam in predicted_eigenvalues(net, n_max, spectrum)
    ]
    return sorted(values)
