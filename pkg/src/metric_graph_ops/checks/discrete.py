"""Checks on the transition operator P and its eigendecomposition."""

from __future__ import annotations

import logging

import numpy as np

from ..discrete import (
    VertexFunction,
    apply_transition,
    ell2_inner,
    ell2_norm,
    random_vertex_function,
    spectral_projector,
)
from .base import CheckContext, CheckDefinition, CheckOutcome, Suite, register_check

logger = logging.getLogger(__name__)

TRIALS = 10


def _eigen_residual(ctx: CheckContext) -> CheckOutcome:
    net = ctx.network
    worst = 0.0
    for pair in ctx.spectrum:
        image = apply_transition(net, pair.vector).values
        worst = max(worst, ell2_norm(VertexFunction(net, image - pair.value * pair.vector.values)))
    return CheckOutcome(worst)


def _orthonormality(ctx: CheckContext) -> CheckOutcome:
    vectors = [pair.vector for pair in ctx.spectrum]
    gram = np.array([[ell2_inner(u, v) for v in vectors] for u in vectors])
    return CheckOutcome(float(np.max(np.abs(gram - np.eye(len(vectors))))))


def _self_adjoint(ctx: CheckContext) -> CheckOutcome:
    net = ctx.network
    rng = ctx.rng("discrete.self_adjoint")
    worst = 0.0
    for _ in range(TRIALS):
        f = random_vertex_function(net, rng)
        g = random_vertex_function(net, rng)
        lhs = ell2_inner(apply_transition(net, f), g)
        rhs = ell2_inner(f, apply_transition(net, g))
        worst = max(worst, abs(lhs - rhs) / (ell2_norm(f) * ell2_norm(g)))
    return CheckOutcome(worst, {"trials": TRIALS})


def _reconstruction(ctx: CheckContext) -> CheckOutcome:
    net = ctx.network
    rng = ctx.rng("discrete.reconstruction")
    worst = 0.0
    for _ in range(TRIALS):
        h = random_vertex_function(net, rng)
        rebuilt = spectral_projector(ctx.spectrum, h).values
        direct = apply_transition(net, h).values
        worst = max(worst, ell2_norm(VertexFunction(net, rebuilt - direct)) / ell2_norm(h))
    return CheckOutcome(worst, {"trials": TRIALS})


def _extremal_values(ctx: CheckContext) -> CheckOutcome:
    """1 is the top eigenvalue with constant eigenvector; -1 occurs iff bipartite."""
    top = ctx.spectrum[0]
    values = top.vector.values
    spread = float(np.max(np.abs(values - values[0])) / np.max(np.abs(values)))
    has_minus_one = ctx.spectrum[-1].value <= -1.0 + 1e-9
    mismatch = 0.0 if has_minus_one == ctx.report.structure.bipartite else 1.0
    return CheckOutcome(max(abs(top.value - 1.0), spread, mismatch))


discrete_eigen_residual = register_check(
    CheckDefinition(
        name="discrete.eigen_residual",
        description="max ||P v - t v|| over the eigenpairs of P",
        suite=Suite.DISCRETE,
        tolerance="eigen_residual",
        handler=_eigen_residual,
    )
)

discrete_orthonormality = register_check(
    CheckDefinition(
        name="discrete.orthonormality",
        description="max |<v_i, v_j> - delta_ij| in l2(m0)",
        suite=Suite.DISCRETE,
        tolerance="eigen_orthonormality",
        handler=_orthonormality,
    )
)

discrete_self_adjoint = register_check(
    CheckDefinition(
        name="discrete.self_adjoint",
        description="|<Pf, g> - <f, Pg>| / (||f|| ||g||) on random vertex functions",
        suite=Suite.DISCRETE,
        tolerance="transition_self_adjoint",
        handler=_self_adjoint,
    )
)

discrete_reconstruction = register_check(
    CheckDefinition(
        name="discrete.reconstruction",
        description="spectral reconstruction of P h against direct application",
        suite=Suite.DISCRETE,
        tolerance="reconstruction",
        handler=_reconstruction,
    )
)

discrete_extremal_values = register_check(
    CheckDefinition(
        name="discrete.extremal_values",
        description="eigenvalue 1 with constant eigenvector; -1 present iff bipartite",
        suite=Suite.DISCRETE,
        tolerance="extremal_values",
        handler=_extremal_values,
    )
)
