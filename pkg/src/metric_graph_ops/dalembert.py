"""Extension of edge functions beyond [0, 1], d'Alembert operators and waves.

F is continued along each directed edge xy past its endpoints: past y the continuation
is 2/m0(y) * sum over v ~ y of c(yv) F(yv, t - 1) - F(yx, t - 1), and symmetrically past
x. On the uniform grid every unit shift is an index shift by N, so the continuation is
a sequence of exact linear recursions between layers of N samples. The d'Alembert
operator C(tau) F is the half-sum of the continuation shifted by +tau and -tau.

Storage: row 2k holds the directed edge (u, v) of canonical edge k, row 2k + 1 holds
(v, u); column ``offset + g`` holds the value at t = g / N.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from numpy.typing import NDArray
from scipy.integrate import cumulative_trapezoid

from .edge_function import ComplexArray, SampledEdgeFunction, norm
from .errors import GridMismatchError, HorizonError, MisalignedTauError, SpectralParameterError
from .network import Network

logger = logging.getLogger(__name__)

ALIGN_TOL = 1e-9


def tau_steps(tau: float, grid_size: int, tol: float = ALIGN_TOL) -> int:
    """tau * N as an integer.

    Raises:
        MisalignedTauError: tau is not an integer multiple of 1/N.
    """
    steps = tau * grid_size
    rounded = round(steps)
    if not math.isfinite(steps) or abs(steps - rounded) > tol * max(1.0, abs(steps)):
        raise MisalignedTauError(tau, grid_size)
    return int(rounded)


def _directed_index(net: Network, k: int, start: int) -> int:
    """Row of edge ``k`` traversed away from vertex ``start``."""
    return 2 * k if int(net.tail[k]) == start else 2 * k + 1


@lru_cache(maxsize=8)
def transfer_matrices(net: Network) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Layer maps (forward, backward) acting on stacked directed-edge rows.

    forward[d(xy)] continues past y, backward[d(xy)] continues past x.
    """
    rows = 2 * net.n_edges
    forward = np.zeros((rows, rows))
    backward = np.zeros((rows, rows))
    weight = 2.0 * net.conductances
    for k in range(net.n_edges):
        u, v = int(net.tail[k]), int(net.head[k])
        for d, x, y in ((2 * k, u, v), (2 * k + 1, v, u)):
            for _, j in net.adjacency[y]:
                forward[d, _directed_index(net, j, y)] += weight[j] / net.measures[y]
            for _, j in net.adjacency[x]:
                # edge j entering x
                backward[d, _directed_index(net, j, x) ^ 1] += weight[j] / net.measures[x]
            forward[d, d ^ 1] -= 1.0
            backward[d, d ^ 1] -= 1.0
    forward.setflags(write=False)
    backward.setflags(write=False)
    return forward, backward


@dataclass(frozen=True, eq=False)
class Extension:
    """Continuation of a sampled function to t in [-T, T + 1].

    Attributes:
        network: The network.
        grid_size: N.
        horizon: T.
        values: Shape (2|E|, (2T + 1) N + 1); see the module docstring for the layout.
    """

    network: Network
    grid_size: int
    horizon: int
    values: ComplexArray

    @property
    def offset(self) -> int:
        return self.horizon * self.grid_size

    def _check_reach(self, steps: int) -> None:
        if abs(steps) > self.offset:
            raise HorizonError(
                f"shift of {steps}/{self.grid_size} exceeds horizon {self.horizon}"
            )

    def window(self, steps: int) -> ComplexArray:
        """Canonical-edge samples of the continuation at t_k + steps/N, shape (|E|, N + 1)."""
        self._check_reach(steps)
        start = self.offset + steps
        return self.values[0::2, start : start + self.grid_size + 1]

    def cosine_values(self, steps: int) -> ComplexArray:
        """Samples of C(steps/N) F on canonical edges."""
        return 0.5 * (self.window(steps) + self.window(-steps))

    def cosine_stack(self, max_steps: int) -> NDArray[np.complex128] | NDArray[np.float64]:
        """C(j/N) F for j = 0..max_steps, shape (max_steps + 1, |E|, N + 1).

        Real continuations give a real stack.
        """
        if max_steps < 0:
            raise ValueError(f"max_steps must be >= 0, got {max_steps}")
        self._check_reach(max_steps)
        rows = self.values[0::2]
        if not np.any(rows.imag):
            rows = rows.real
        windows = sliding_window_view(rows, self.grid_size + 1, axis=-1)
        ahead = windows[:, self.offset : self.offset + max_steps + 1]
        behind = windows[:, self.offset - max_steps : self.offset + 1][:, ::-1]
        stack = ahead + behind
        stack *= 0.5
        return np.moveaxis(stack, 1, 0)

    @cached_property
    def _antiderivative(self) -> ComplexArray:
        """Cumulative trapezoid of the continuation along each canonical edge."""
        rows = self.values[0::2]
        dx = 1.0 / self.grid_size
        real = cumulative_trapezoid(rows.real, dx=dx, axis=-1, initial=0.0)
        imag = cumulative_trapezoid(rows.imag, dx=dx, axis=-1, initial=0.0)
        return real + 1j * imag

    def sine_values(self, steps: int) -> ComplexArray:
        """Trapezoid rule for the integral of C(sigma) F over sigma in [0, steps/N].

        On the nodes j/N this is half the trapezoid integral of the continuation over
        [t - tau, t + tau], read off one cumulative integral.
        """
        self._check_reach(steps)
        total = self._antiderivative
        n, offset = self.grid_size, self.offset
        upper = total[:, offset + steps : offset + steps + n + 1]
        lower = total[:, offset - steps : offset - steps + n + 1]
        return 0.5 * (upper - lower)

    def cosine(self, tau: float) -> SampledEdgeFunction:
        return SampledEdgeFunction(self.network, self.cosine_values(tau_steps(tau, self.grid_size)))

    def shifted(self, tau: float) -> SampledEdgeFunction:
        """F^tau: the continuation shifted by tau, restricted to [0, 1]."""
        return SampledEdgeFunction(self.network, self.window(tau_steps(tau, self.grid_size)))

    def directed(self, x: str, y: str) -> ComplexArray:
        """All stored values of the continuation along the directed edge xy."""
        net = self.network
        i, j = net.index_of(x), net.index_of(y)
        for neighbor, k in net.adjacency[i]:
            if neighbor == j:
                return self.values[_directed_index(net, k, i)]
        raise KeyError(f"{x!r} and {y!r} are not adjacent")

    def reflection_defect(self) -> float:
        """max |F~(xy, g/N) - F~(yx, 1 - g/N)| over every stored node."""
        return float(np.max(np.abs(self.values[0::2] - self.values[1::2, ::-1])))


def extend(net: Network, f: SampledEdgeFunction, horizon: int) -> Extension:
    """Continue ``f`` layer by layer to t in [-horizon, horizon + 1].

    Raises:
        GridMismatchError: ``f`` lives on another network.
        ValueError: ``horizon`` < 1.
    """
    if f.network != net:
        raise GridMismatchError("edge function does not live on this network")
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    n = f.grid_size
    offset = horizon * n
    out = np.zeros((2 * net.n_edges, (2 * horizon + 1) * n + 1), dtype=complex)
    out[0::2, offset : offset + n + 1] = f.values
    out[1::2, offset : offset + n + 1] = f.values[:, ::-1]

    forward, backward = transfer_matrices(net)
    for m in range(1, horizon + 1):
        # forward layer (m, m + 1] from (m - 1, m]
        lo = offset + m * n + 1
        out[:, lo : lo + n] = forward @ out[:, lo - n : lo]
        # backward layer [-m, -m + 1) from [-m + 1, -m + 2)
        hi = offset - (m - 1) * n
        out[:, hi - n : hi] = backward @ out[:, hi : hi + n]
    out.setflags(write=False)
    logger.debug(f"Extended {net} to horizon {horizon} at N={n}")
    return Extension(net, n, horizon, out)


def _horizon_for(steps: int, grid_size: int) -> int:
    return max(1, -(-abs(steps) // grid_size))


def dalembert(net: Network, f: SampledEdgeFunction, tau: float) -> SampledEdgeFunction:
    """C(tau) F = (F~(., t + tau) + F~(., t - tau)) / 2 for grid-aligned tau.

    Raises:
        MisalignedTauError: tau * N is not an integer.
    """
    steps = tau_steps(tau, f.grid_size)
    ext = extend(net, f, _horizon_for(steps, f.grid_size))
    return SampledEdgeFunction(net, ext.cosine_values(steps))


def shift(net: Network, f: SampledEdgeFunction, tau: float) -> SampledEdgeFunction:
    """F^tau(xy, t) = F~(xy, t + tau) for t in [0, 1]."""
    steps = tau_steps(tau, f.grid_size)
    ext = extend(net, f, _horizon_for(steps, f.grid_size))
    return SampledEdgeFunction(net, ext.window(steps))


# --- Waves ---


def wave_solution(
    net: Network, f0: SampledEdgeFunction, f1: SampledEdgeFunction, tau: float
) -> SampledEdgeFunction:
    """G(tau) = C(tau) F0 + integral over sigma in [0, tau] of C(sigma) F1.

    The sigma integral is the composite trapezoid rule on the nodes j/N; for negative
    tau the integral changes sign.

    Raises:
        GridMismatchError: F0 and F1 differ in network or grid.
        MisalignedTauError: tau * N is not an integer.
    """
    f0._require_compatible(f1)
    n = f0.grid_size
    steps = tau_steps(tau, n)
    horizon = _horizon_for(steps, n)
    position = extend(net, f0, horizon).cosine_values(steps)
    if steps == 0:
        return SampledEdgeFunction(net, position)
    return SampledEdgeFunction(net, position + extend(net, f1, horizon).sine_values(steps))


def wave_trace(
    net: Network,
    f0: SampledEdgeFunction,
    f1: SampledEdgeFunction,
    taus: Sequence[float],
) -> list[tuple[float, SampledEdgeFunction]]:
    """Evaluate :func:`wave_solution` at many tau from one extension of each datum."""
    f0._require_compatible(f1)
    n = f0.grid_size
    steps = [tau_steps(tau, n) for tau in taus]
    horizon = _horizon_for(max((abs(s) for s in steps), default=0), n)
    ext0 = extend(net, f0, horizon)
    ext1 = extend(net, f1, horizon)
    return [
        (tau, SampledEdgeFunction(net, ext0.cosine_values(s) + ext1.sine_values(s)))
        for tau, s in zip(taus, steps)
    ]


# --- Identity residuals ---


@dataclass(frozen=True)
class IdentityResiduals:
    """Normalized defects of the functional identities of C(tau).

    Attributes:
        cc2: ||C(tau+1)F + C(tau-1)F - 2 C(1) C(tau) F|| / ||F||.
        half_angle: ||C(2 tau)F + F - 2 C(tau)^2 F|| / ||F||, None when not evaluated.
        wave: Defect of the wave equation (second differences in tau and t) / ||F||.
    """

    cc2: float
    half_angle: float | None
    wave: float


def _five_point_second_derivative(values: ComplexArray, h: float) -> ComplexArray:
    """Fourth-order central second difference in t at interior nodes k = 2..N-2."""
    return (
        -values[:, :-4]
        + 16.0 * values[:, 1:-3]
        - 30.0 * values[:, 2:-2]
        + 16.0 * values[:, 3:-1]
        - values[:, 4:]
    ) / (12.0 * h * h)


def wave_defect(net: Network, f: SampledEdgeFunction, tau: float, dtau_steps: int) -> float:
    """||d2/dtau2 C(tau)F - d2/dt2 C(tau)F|| on interior nodes, normalized by ||F||.

    The tau derivative is the central difference with step dtau_steps / N.
    """
    n = f.grid_size
    steps = tau_steps(tau, n)
    if dtau_steps < 1:
        raise ValueError(f"dtau_steps must be >= 1, got {dtau_steps}")
    ext = extend(net, f, _horizon_for(abs(steps) + dtau_steps, n))
    centre = ext.cosine_values(steps)
    dtau = dtau_steps / n
    ahead = ext.cosine_values(steps + dtau_steps)
    behind = ext.cosine_values(steps - dtau_steps)
    d_tau = (ahead - 2.0 * centre + behind) / (dtau * dtau)
    defect = d_tau[:, 2:-2] - _five_point_second_derivative(centre, 1.0 / n)
    energy = np.sum(np.abs(defect) ** 2, axis=1) / n
    scale = norm(f)
    return math.sqrt(float(np.sum(net.conductances * energy))) / scale if scale else 0.0


def identity_residuals(
    net: Network,
    f: SampledEdgeFunction,
    tau: float,
    dtau_steps: int | None = None,
    half_angle: bool | None = None,
) -> IdentityResiduals:
    """Residuals of C(tau+1) + C(tau-1) = 2 C(1) C(tau), C(2 tau) + 1 = 2 C(tau)^2 and
    the wave equation, each normalized by ||F||.

    Args:
        net: The network.
        f: Sampled function.
        tau: Grid-aligned time.
        dtau_steps: Second-difference step in units of 1/N (default N/16).
        half_angle: True to require the half-angle residual, False to skip it, None to
            evaluate it only for tau in [0, 1/2].

    Raises:
        SpectralParameterError: The half-angle residual is required with tau outside [0, 1/2].
    """
    n = f.grid_size
    steps = tau_steps(tau, n)
    in_range = 0 <= steps <= n // 2
    if half_angle and not in_range:
        raise SpectralParameterError(f"half-angle identity needs tau in [0, 1/2], got {tau!r}")
    scale = norm(f)
    if scale == 0.0:
        return IdentityResiduals(0.0, 0.0 if in_range else None, 0.0)

    ext = extend(net, f, _horizon_for(abs(steps) + n, n))
    c_tau = SampledEdgeFunction(net, ext.cosine_values(steps))
    c_ext = extend(net, c_tau, 1)
    once = c_ext.cosine_values(n)
    cc2_defect = ext.cosine_values(steps + n) + ext.cosine_values(steps - n) - 2.0 * once
    cc2 = norm(SampledEdgeFunction(net, cc2_defect)) / scale

    half: float | None = None
    if half_angle or (half_angle is None and in_range):
        twice = c_ext.cosine_values(steps)
        half_defect = ext.cosine_values(2 * steps) + f.values - 2.0 * twice
        half = norm(SampledEdgeFunction(net, half_defect)) / scale

    step = dtau_steps if dtau_steps is not None else max(1, n // 16)
    wave = wave_defect(net, f, tau, step)
    return IdentityResiduals(cc2, half, wave)
