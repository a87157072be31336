"""Checks on wave solutions G(tau) = C(tau)F0 + S(tau)F1 and the wave residual."""

from __future__ import annotations

import logging
import math

import numpy as np

from ..averaging import apply_averaging
from ..continuous import ContinuousEigenpair
from ..dalembert import dalembert, extend, tau_steps, wave_defect, wave_solution, wave_trace
from ..edge_function import (
    SampledEdgeFunction,
    constant_function,
    norm,
    phi,
    random_sampled_function,
)
from .base import CheckContext, CheckDefinition, CheckOutcome, Suite, register_check

logger = logging.getLogger(__name__)

TRIALS = 5
VELOCITY_TIMES = (0.5, 1.0, 1.5, 2.0)
ORDER_TIMES = (0.5, 0.25, 0.0)
MIN_COSINE = 0.25


def _aligned(ctx: CheckContext, times: tuple[float, ...]) -> list[float]:
    """Grid-aligned versions of ``times`` that do not exceed tau_max."""
    out = []
    for t in times:
        steps = round(t * ctx.grid_size)
        if steps <= ctx.tau_steps_max and steps / ctx.grid_size not in out:
            out.append(steps / ctx.grid_size)
    return out


def _zero(ctx: CheckContext) -> SampledEdgeFunction:
    return constant_function(ctx.network, ctx.grid_size, 0.0)


def _zero_velocity(ctx: CheckContext) -> CheckOutcome:
    rng = ctx.rng("wave.zero_velocity")
    f0 = random_sampled_function(ctx.network, ctx.grid_size, rng)
    taus = _aligned(ctx, VELOCITY_TIMES)
    worst = 0.0
    for tau in taus:
        g = wave_solution(ctx.network, f0, _zero(ctx), tau)
        worst = max(worst, float(np.max(np.abs(g.values - dalembert(ctx.network, f0, tau).values))))
    return CheckOutcome(worst, {"taus": taus})


def _eigen_velocity(ctx: CheckContext) -> CheckOutcome:
    """||G(tau) - Phi(w, tau) Psi|| / ||Psi|| with G started from rest at velocity Psi."""
    taus = _aligned(ctx, VELOCITY_TIMES)
    if not taus:
        return CheckOutcome.skip(f"no velocity sample time within tau_max={ctx.tau_max}")
    pairs = [
        (pair, sampled)
        for pair, sampled in zip(ctx.eigenpairs, ctx.sampled_eigenfunctions, strict=True)
        if pair.lam > 0.0
    ]
    worst = 0.0
    steps = [tau_steps(tau, ctx.grid_size) for tau in taus]
    horizon = max(1, math.ceil(max(taus) - 1e-9))
    for pair, sampled in pairs:
        # G(tau) from rest is the sine integral alone
        ext = extend(ctx.network, sampled, horizon)
        scale = norm(sampled)
        for tau, s in zip(taus, steps, strict=True):
            g = SampledEdgeFunction(ctx.network, ext.sine_values(s))
            expected = sampled * complex(phi(pair.eigenfunction.omega, tau))
            worst = max(worst, norm(g - expected) / scale)
    return CheckOutcome(worst, {"eigenpairs": len(pairs), "taus": taus})


def _constant_velocity(ctx: CheckContext) -> CheckOutcome:
    taus = [s / ctx.grid_size for s in range(ctx.tau_steps_max + 1)]
    one = constant_function(ctx.network, ctx.grid_size)
    worst = 0.0
    for tau, g in wave_trace(ctx.network, _zero(ctx), one, taus):
        worst = max(worst, float(np.max(np.abs(g.values - tau))))
    return CheckOutcome(worst, {"taus": len(taus)})


def _averaging_consistency(ctx: CheckContext) -> CheckOutcome:
    """A F against the wave started from rest at velocity F, read off at tau = 1."""
    net = ctx.network
    rng = ctx.rng("wave.averaging_consistency")
    worst = 0.0
    for _ in range(TRIALS):
        f = random_sampled_function(net, ctx.grid_size, rng, smooth=True)
        g = wave_solution(net, _zero(ctx), f, 1.0)
        worst = max(worst, norm(apply_averaging(net, f) - g) / norm(f))
    return CheckOutcome(worst, {"trials": TRIALS})


def _order_time(ctx: CheckContext, pair: ContinuousEigenpair) -> float | None:
    for tau in _aligned(ctx, ORDER_TIMES):
        if abs(math.cos(pair.eigenfunction.omega * tau)) >= MIN_COSINE:
            return tau
    return None


def _second_order(ctx: CheckContext) -> CheckOutcome:
    """Halving the tau step of the wave residual should divide it by about 4."""
    candidates = [
        (pair, sampled)
        for pair, sampled in zip(ctx.eigenpairs, ctx.sampled_eigenfunctions, strict=True)
        if pair.lam > 0.0
    ]
    if not candidates:
        return CheckOutcome.skip("no eigenpair with positive eigenvalue")
    pair, sampled = min(candidates, key=lambda item: item[0].lam)
    tau = _order_time(ctx, pair)
    if tau is None:
        return CheckOutcome.skip(f"cos(tau sqrt(lam)) too small at lam={pair.lam:.6g}")
    coarse = max(2, 2 * (ctx.grid_size // 32))
    fine = coarse // 2
    coarse_defect = wave_defect(ctx.network, sampled, tau, coarse)
    fine_defect = wave_defect(ctx.network, sampled, tau, fine)
    params = {"lambda": pair.lam, "tau": tau, "dtau_steps": [coarse, fine]}
    if fine_defect == 0.0:
        return CheckOutcome.skip("wave residual vanished at the fine step")
    ratio = coarse_defect / fine_defect
    params["ratio"] = ratio
    return CheckOutcome(abs(ratio - 4.0), params)


wave_zero_velocity = register_check(
    CheckDefinition(
        name="wave.zero_velocity",
        description="G(tau) = C(tau) F0 exactly when F1 = 0",
        suite=Suite.WAVE,
        tolerance="symmetry",
        handler=_zero_velocity,
    )
)

wave_eigen_velocity = register_check(
    CheckDefinition(
        name="wave.eigen_velocity",
        description="F0 = 0, F1 = Psi gives G(tau) = Phi(sqrt(lam), tau) Psi",
        suite=Suite.WAVE,
        tolerance="wave_velocity",
        handler=_eigen_velocity,
    )
)

wave_constant_velocity = register_check(
    CheckDefinition(
        name="wave.constant_velocity",
        description="F0 = 0, F1 = 1 gives G(tau) = tau",
        suite=Suite.WAVE,
        tolerance="wave_constant_velocity",
        handler=_constant_velocity,
    )
)

wave_averaging_consistency = register_check(
    CheckDefinition(
        name="wave.averaging_consistency",
        description="A F = integral over [0, 1] of C(sigma) F",
        suite=Suite.WAVE,
        tolerance="wave_consistency",
        handler=_averaging_consistency,
    )
)

wave_second_order = register_check(
    CheckDefinition(
        name="wave.second_order",
        description="wave residual is O(dtau^2): halving the step divides it by 4",
        suite=Suite.WAVE,
        tolerance="wave_order",
        handler=_second_order,
    )
)
