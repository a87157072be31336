"""Checks on the averaging operator A and its spectral description."""

from __future__ import annotations

import logging
import math

import numpy as np

from ..averaging import apply_averaging, averaging_eigen_action
from ..continuous import predicted_averaging_spectrum, predicted_eigenvalues
from ..edge_function import constant_function, inner_product, norm, random_sampled_function
from .base import CheckContext, CheckDefinition, CheckOutcome, Suite, register_check

logger = logging.getLogger(__name__)

TRIALS = 10


def _constant(ctx: CheckContext) -> CheckOutcome:
    one = constant_function(ctx.network, ctx.grid_size)
    averaged = apply_averaging(ctx.network, one)
    return CheckOutcome(float(np.max(np.abs(averaged.values - 1.0))))


def _eigen_identity(ctx: CheckContext) -> CheckOutcome:
    """||A Psi - Phi(sqrt(lam)) Psi|| / ||Psi|| over every eigenpair of the report."""
    worst = 0.0
    for pair, sampled in zip(ctx.eigenpairs, ctx.sampled_eigenfunctions, strict=True):
        defect = apply_averaging(ctx.network, sampled) - averaging_eigen_action(pair) * sampled
        worst = max(worst, norm(defect) / norm(sampled))
    return CheckOutcome(worst, {"eigenpairs": len(ctx.eigenpairs)})


def _self_adjoint(ctx: CheckContext) -> CheckOutcome:
    net = ctx.network
    rng = ctx.rng("averaging.self_adjoint")
    worst = 0.0
    for _ in range(TRIALS):
        f = random_sampled_function(net, ctx.grid_size, rng, smooth=True)
        g = random_sampled_function(net, ctx.grid_size, rng, smooth=True)
        lhs = inner_product(apply_averaging(net, f), g)
        rhs = inner_product(f, apply_averaging(net, g))
        worst = max(worst, abs(lhs - rhs) / (norm(f) * norm(g)))
    return CheckOutcome(worst, {"trials": TRIALS})


def _bound(ctx: CheckContext) -> CheckOutcome:
    """How far ||AF|| / ||F|| exceeds 1 over smooth and rough random F."""
    net = ctx.network
    rng = ctx.rng("averaging.bound")
    excess = 0.0
    for trial in range(TRIALS):
        f = random_sampled_function(net, ctx.grid_size, rng, smooth=trial % 2 == 0)
        excess = max(excess, norm(apply_averaging(net, f)) / norm(f) - 1.0)
    return CheckOutcome(excess, {"trials": TRIALS})


def _spectrum_mapping(ctx: CheckContext) -> CheckOutcome:
    """Computed eigenvalues of L and of A against the prediction from the P-spectrum alone."""
    computed_lams = sorted(ctx.report.eigenvalues)
    computed_actions = sorted(averaging_eigen_action(p) for p in ctx.eigenpairs)
    predicted_lams = predicted_eigenvalues(ctx.network, ctx.n_max, ctx.spectrum)
    predicted_actions = predicted_averaging_spectrum(ctx.network, ctx.n_max, ctx.spectrum)
    counts = {"computed": len(computed_lams), "predicted": len(predicted_lams)}
    if len(computed_lams) != len(predicted_lams):
        return CheckOutcome(math.inf, counts)
    lam_gap = np.max(np.abs(np.subtract(computed_lams, predicted_lams)), initial=0.0)
    action_gap = np.max(np.abs(np.subtract(computed_actions, predicted_actions)), initial=0.0)
    return CheckOutcome(float(max(lam_gap, action_gap)), counts)


averaging_constant = register_check(
    CheckDefinition(
        name="averaging.constant",
        description="A 1 = 1 at every sample",
        suite=Suite.AVERAGING,
        tolerance="averaging_constant",
        handler=_constant,
    )
)

averaging_eigen_identity = register_check(
    CheckDefinition(
        name="averaging.eigen_identity",
        description="A Psi = Phi(sqrt(lam)) Psi for every eigenpair",
        suite=Suite.AVERAGING,
        tolerance="averaging_identity",
        handler=_eigen_identity,
    )
)

averaging_self_adjoint = register_check(
    CheckDefinition(
        name="averaging.self_adjoint",
        description="|<AF, G> - <F, AG>| / (||F|| ||G||) on random smooth functions",
        suite=Suite.AVERAGING,
        tolerance="averaging_self_adjoint",
        handler=_self_adjoint,
    )
)

averaging_bound = register_check(
    CheckDefinition(
        name="averaging.bound",
        description="||AF|| <= ||F|| up to quadrature error",
        suite=Suite.AVERAGING,
        tolerance="averaging_bound",
        handler=_bound,
    )
)

averaging_spectrum_mapping = register_check(
    CheckDefinition(
        name="averaging.spectrum_mapping",
        description="{Phi(sqrt(lam))} = {sin w / w : cos w in P-spectrum} plus Dirichlet zeros",
        suite=Suite.AVERAGING,
        tolerance="spectrum_match",
        handler=_spectrum_mapping,
    )
)
