"""The averaging operator A over unit balls.

(AF)(xy, t) averages F over the unit ball around the point (xy, t): the part of the ball
behind x is weighted by the transition probabilities out of x, the part beyond y by those
out of y. On eigenfunctions of L it acts as multiplication by Phi(sqrt(lam)).
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .continuous import ContinuousEigenpair, EigenKind
from .edge_function import ComplexArray, SampledEdgeFunction, phi
from .errors import GridMismatchError
from .network import Network

logger = logging.getLogger(__name__)


def _prefix(values: ComplexArray, dx: float) -> ComplexArray:
    """Cumulative trapezoid integral from t = 0 along each row, starting at 0."""
    real = cumulative_trapezoid(values.real, dx=dx, axis=-1, initial=0.0)
    imag = cumulative_trapezoid(values.imag, dx=dx, axis=-1, initial=0.0)
    return real + 1j * imag


def vertex_ball_integrals(net: Network, f: SampledEdgeFunction) -> ComplexArray:
    """Q[x, k] = (1 / m0(x)) sum over u ~ x of c(xu) * integral of F(xu, .) over [0, t_k]."""
    from_tail = _prefix(f.values, f.step)
    from_head = _prefix(f.values[:, ::-1], f.step)
    weights = net.conductances[:, None]
    q = np.zeros((net.n_vertices, f.grid_size + 1), dtype=complex)
    np.add.at(q, net.tail, weights * from_tail)
    np.add.at(q, net.head, weights * from_head)
    return q / net.measures[:, None]


def apply_averaging(net: Network, f: SampledEdgeFunction) -> SampledEdgeFunction:
    """Apply A by trapezoid prefix integrals on the sampling grid.

    AF(xy, t_k) = Q[x, N - k] + Q[y, k], with Q from :func:`vertex_ball_integrals`.
    F may be discontinuous at vertices.

    Raises:
        GridMismatchError: ``f`` lives on another network.
    """
    if f.network != net:
        raise GridMismatchError("edge function does not live on this network")
    q = vertex_ball_integrals(net, f)
    return SampledEdgeFunction(net, q[net.tail][:, ::-1] + q[net.head])


def averaging_eigen_action(pair: ContinuousEigenpair) -> float:
    """Phi(sqrt(lam)): the eigenvalue of A on this eigenfunction (0 on Dirichlet kernels)."""
    if pair.kind is not EigenKind.BAND:
        return 0.0
    return float(phi(math.sqrt(pair.lam)))
