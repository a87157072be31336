"""Checks on the continuation recursion and the d'Alembert operators C(tau)."""

from __future__ import annotations

import logging
import math

import numpy as np

from ..dalembert import IdentityResiduals, dalembert, extend, identity_residuals, shift
from ..edge_function import norm, random_sampled_function, stacked_norms
from .base import CheckContext, CheckDefinition, CheckOutcome, Suite, register_check

logger = logging.getLogger(__name__)

TRIALS = 10


def _horizon(ctx: CheckContext) -> int:
    return max(1, math.ceil(ctx.tau_max - 1e-9))


def _eigen_action(ctx: CheckContext) -> CheckOutcome:
    """max over eigenpairs and aligned tau <= tau_max of ||C(tau)Psi - cos(tau w)Psi|| / ||Psi||."""
    if ctx.tau_steps_max < 0:
        return CheckOutcome.skip(f"no aligned tau within tau_max={ctx.tau_max}")
    n = ctx.grid_size
    steps = np.arange(ctx.tau_steps_max + 1)
    worst = 0.0
    for pair, sampled in zip(ctx.eigenpairs, ctx.sampled_eigenfunctions, strict=True):
        stack = extend(ctx.network, sampled, _horizon(ctx)).cosine_stack(ctx.tau_steps_max)
        psi = sampled.values if np.iscomplexobj(stack) else sampled.values.real
        stack -= np.cos(steps * pair.eigenfunction.omega / n)[:, None, None] * psi[None]
        defects = stacked_norms(ctx.network, stack, sampled.step)
        worst = max(worst, float(np.max(defects)) / norm(sampled))
    return CheckOutcome(worst, {"eigenpairs": len(ctx.eigenpairs), "shifts": len(steps)})


def _identity_tau(ctx: CheckContext) -> float:
    return (ctx.grid_size // 4) / ctx.grid_size


def _identity_runs(ctx: CheckContext) -> list[IdentityResiduals]:
    """Functional-identity residuals of rough random functions, shared by two checks."""

    def run() -> list[IdentityResiduals]:
        rng = ctx.rng("dalembert.identities")
        tau = _identity_tau(ctx)
        out = []
        for _ in range(ctx.random_functions):
            f = random_sampled_function(ctx.network, ctx.grid_size, rng)
            out.append(identity_residuals(ctx.network, f, tau, half_angle=True))
        return out

    return ctx.memo("dalembert.identities", run)


def _cc2(ctx: CheckContext) -> CheckOutcome:
    runs = _identity_runs(ctx)
    worst = max((r.cc2 for r in runs), default=0.0)
    return CheckOutcome(worst, {"tau": _identity_tau(ctx), "trials": len(runs)})


def _half_angle(ctx: CheckContext) -> CheckOutcome:
    runs = _identity_runs(ctx)
    worst = max((r.half_angle or 0.0 for r in runs), default=0.0)
    return CheckOutcome(worst, {"tau": _identity_tau(ctx), "trials": len(runs)})


def _symmetry(ctx: CheckContext) -> CheckOutcome:
    """max |C(tau)F - C(-tau)F| over a few aligned tau; exact index arithmetic."""
    rng = ctx.rng("dalembert.symmetry")
    f = random_sampled_function(ctx.network, ctx.grid_size, rng)
    taus = sorted({s / ctx.grid_size for s in np.linspace(0, ctx.tau_steps_max, 5).astype(int)})
    worst = 0.0
    for tau in taus:
        plus = dalembert(ctx.network, f, tau).values
        minus = dalembert(ctx.network, f, -tau).values
        worst = max(worst, float(np.max(np.abs(plus - minus))))
    return CheckOutcome(worst, {"taus": len(taus)})


def _reflection(ctx: CheckContext) -> CheckOutcome:
    rng = ctx.rng("dalembert.reflection")
    worst = 0.0
    for _ in range(TRIALS):
        f = random_sampled_function(ctx.network, ctx.grid_size, rng)
        ext = extend(ctx.network, f, _horizon(ctx))
        worst = max(worst, ext.reflection_defect() / float(np.max(np.abs(f.values))))
    return CheckOutcome(worst, {"trials": TRIALS, "horizon": _horizon(ctx)})


def _shift_bound(ctx: CheckContext) -> CheckOutcome:
    """Largest ||F^(tau +- 1)||^2 / ||F^tau||^2 over integer tau; bounded by 10."""
    net = ctx.network
    rng = ctx.rng("dalembert.shift_bound")
    reach = _horizon(ctx) - 1
    worst = 0.0
    for trial in range(TRIALS):
        f = random_sampled_function(net, ctx.grid_size, rng, smooth=trial % 2 == 1)
        for tau in range(-reach, reach + 1):
            base = norm(shift(net, f, float(tau))) ** 2
            for step in (-1, 1):
                worst = max(worst, norm(shift(net, f, float(tau + step))) ** 2 / base)
    return CheckOutcome(worst, {"trials": TRIALS})


dalembert_eigen_action = register_check(
    CheckDefinition(
        name="dalembert.eigen_action",
        description="C(tau) Psi = cos(tau sqrt(lam)) Psi for every eigenpair and aligned tau",
        suite=Suite.DALEMBERT,
        tolerance="dalembert_eigen",
        handler=_eigen_action,
    )
)

dalembert_cc2 = register_check(
    CheckDefinition(
        name="dalembert.cc2",
        description="C(tau+1) + C(tau-1) = 2 C(1) C(tau) on random functions",
        suite=Suite.DALEMBERT,
        tolerance="functional_identity",
        handler=_cc2,
    )
)

dalembert_half_angle = register_check(
    CheckDefinition(
        name="dalembert.half_angle",
        description="C(2 tau) + 1 = 2 C(tau)^2 on random functions",
        suite=Suite.DALEMBERT,
        tolerance="functional_identity",
        handler=_half_angle,
    )
)

dalembert_symmetry = register_check(
    CheckDefinition(
        name="dalembert.symmetry",
        description="C(tau) = C(-tau) exactly",
        suite=Suite.DALEMBERT,
        tolerance="symmetry",
        handler=_symmetry,
    )
)

dalembert_reflection = register_check(
    CheckDefinition(
        name="dalembert.reflection",
        description="F~(xy, t) = F~(yx, 1 - t) at every stored node",
        suite=Suite.DALEMBERT,
        tolerance="reflection",
        handler=_reflection,
    )
)

dalembert_shift_bound = register_check(
    CheckDefinition(
        name="dalembert.shift_bound",
        description="||F^(tau+-1)||^2 <= 10 ||F^tau||^2 for integer tau",
        suite=Suite.DALEMBERT,
        tolerance="shift_bound",
        handler=_shift_bound,
    )
)
