"""Checks on the band map kappa, the gamma lift and the eigenpairs of L."""

from __future__ import annotations

import logging
import math

import numpy as np

from ..continuous import (
    SNAP_TOL,
    ContinuousEigenpair,
    EigenKind,
    gamma_lift,
    kappa,
    nearest_dirichlet_index,
    spectral_band,
)
from ..discrete import ell2_norm
from ..edge_function import (
    orientation_defect,
    second_derivative_defect,
    trig_inner_product,
    trig_norm,
    vertex_residuals,
)
from .base import CheckContext, CheckDefinition, CheckOutcome, Suite, register_check

logger = logging.getLogger(__name__)

KAPPA_POINTS = 100
DISTINCT_GAP = 1e-8


def _kappa_inversion(ctx: CheckContext) -> CheckOutcome:
    interior = np.linspace(-1.0, 1.0, KAPPA_POINTS + 2)[1:-1]
    worst = 0.0
    for n in range(ctx.n_max + 1):
        points = np.append(interior, 1.0) if n == 0 else interior
        for t in points.tolist():
            lam = kappa(t, n)
            if not spectral_band(n).contains_lambda(lam):
                return CheckOutcome(math.inf, {"band": n, "t": t})
            worst = max(worst, abs(math.cos(math.sqrt(lam)) - t))
    return CheckOutcome(worst, {"points": KAPPA_POINTS})


def _band_pairs(ctx: CheckContext) -> list[ContinuousEigenpair]:
    return [p for p in ctx.eigenpairs if p.kind is EigenKind.BAND]


def _source_p_value(ctx: CheckContext) -> CheckOutcome:
    pairs = _band_pairs(ctx)
    if not pairs:
        return CheckOutcome.skip("no band eigenpairs")
    worst = max(abs(math.cos(math.sqrt(p.lam)) - (p.source_p_value or 0.0)) for p in pairs)
    return CheckOutcome(worst)


def _unitarity(ctx: CheckContext) -> CheckOutcome:
    """|2 ||gamma(lam) h||^2 - ||h||^2| for every lifted P-eigenpair."""
    net = ctx.network
    worst = 0.0
    lifted = 0
    for n in range(ctx.n_max + 1):
        band = spectral_band(n)
        for pair in ctx.spectrum:
            if not band.contains_p_value(pair.value):
                continue
            lam = kappa(1.0 if pair.value >= 1.0 - SNAP_TOL else pair.value, n)
            if nearest_dirichlet_index(lam) is not None:
                continue
            norm_sq = trig_norm(gamma_lift(net, lam, pair.vector)) ** 2
            worst = max(worst, abs(2.0 * norm_sq - ell2_norm(pair.vector) ** 2))
            lifted += 1
    return CheckOutcome(worst, {"lifted": lifted})


def _cross_orthogonality(ctx: CheckContext) -> CheckOutcome:
    pairs = ctx.eigenpairs
    worst = 0.0
    for i, first in enumerate(pairs):
        for second in pairs[i + 1 :]:
            if abs(first.lam - second.lam) > DISTINCT_GAP:
                inner = trig_inner_product(first.eigenfunction, second.eigenfunction)
                worst = max(worst, abs(inner))
    return CheckOutcome(worst, {"eigenpairs": len(pairs)})


def _normalization(ctx: CheckContext) -> CheckOutcome:
    worst = max(
        (abs(trig_norm(p.eigenfunction) ** 2 - 1.0) for p in ctx.eigenpairs), default=0.0
    )
    return CheckOutcome(worst)


def _vertex_conditions(ctx: CheckContext) -> CheckOutcome:
    worst = 0.0
    for pair in ctx.eigenpairs:
        for res in vertex_residuals(pair.eigenfunction):
            worst = max(worst, res.continuity_spread, abs(res.kirchhoff))
    return CheckOutcome(worst)


def _second_derivative(ctx: CheckContext) -> CheckOutcome:
    worst = max(
        (second_derivative_defect(p.eigenfunction, ctx.grid_size) for p in ctx.eigenpairs),
        default=0.0,
    )
    return CheckOutcome(worst)


def _orientation(ctx: CheckContext) -> CheckOutcome:
    worst = max((orientation_defect(p.eigenfunction) for p in ctx.eigenpairs), default=0.0)
    return CheckOutcome(worst)


def _dirichlet_dimensions(ctx: CheckContext) -> CheckOutcome:
    """Number of Dirichlet blocks whose nullspace ranks disagree with the prediction."""
    blocks = ctx.report.dirichlet
    mismatched = [b.n for b in blocks if b.mismatch]
    return CheckOutcome(float(len(mismatched)), {"mismatched": mismatched})


def _band_count(ctx: CheckContext) -> CheckOutcome:
    """Per band, P-eigenvalues in I(n) against lifted pairs with lam in J(n) plus rejections.

    Every P-eigenvalue that ends up neither as a pair inside J(n) nor as a recorded
    rejection counts once.
    """
    expected = found = mismatch = 0
    for block in ctx.report.bands:
        band = spectral_band(block.n)
        in_band = sum(band.contains_p_value(p.value) for p in ctx.spectrum)
        lifted = sum(band.contains_lambda(pair.lam) for pair in block.pairs)
        rejected = sum(r.n == block.n for r in ctx.report.rejected)
        expected += in_band
        found += lifted + rejected
        mismatch += abs(in_band - lifted - rejected)
    return CheckOutcome(
        float(mismatch),
        {"expected": expected, "found": found, "rejected": len(ctx.report.rejected)},
    )


gamma_kappa_inversion = register_check(
    CheckDefinition(
        name="gamma.kappa_inversion",
        description="cos(sqrt(kappa(t, n))) = t on a grid of each band interval",
        suite=Suite.GAMMA,
        tolerance="kappa_inversion",
        handler=_kappa_inversion,
    )
)

gamma_source_p_value = register_check(
    CheckDefinition(
        name="gamma.source_p_value",
        description="cos(sqrt(lam)) reproduces the P-eigenvalue of every band pair",
        suite=Suite.GAMMA,
        tolerance="source_p_value",
        handler=_source_p_value,
    )
)

gamma_unitarity = register_check(
    CheckDefinition(
        name="gamma.unitarity",
        description="2 ||gamma(lam) h||^2 = ||h||^2 for unit P-eigenvectors",
        suite=Suite.GAMMA,
        tolerance="unitarity",
        handler=_unitarity,
    )
)

gamma_cross_orthogonality = register_check(
    CheckDefinition(
        name="gamma.cross_orthogonality",
        description="eigenfunctions with distinct eigenvalues are orthogonal",
        suite=Suite.GAMMA,
        tolerance="cross_orthogonality",
        handler=_cross_orthogonality,
    )
)

gamma_normalization = register_check(
    CheckDefinition(
        name="gamma.normalization",
        description="every eigenfunction has unit L2(m1) norm",
        suite=Suite.GAMMA,
        tolerance="normalization",
        handler=_normalization,
    )
)

gamma_vertex_conditions = register_check(
    CheckDefinition(
        name="gamma.vertex_conditions",
        description="continuity and Kirchhoff residuals of every eigenfunction",
        suite=Suite.GAMMA,
        tolerance="vertex_conditions",
        handler=_vertex_conditions,
    )
)

gamma_second_derivative = register_check(
    CheckDefinition(
        name="gamma.second_derivative",
        description="-F'' = lam F on the sampling grid",
        suite=Suite.GAMMA,
        tolerance="second_derivative",
        handler=_second_derivative,
    )
)

gamma_orientation = register_check(
    CheckDefinition(
        name="gamma.orientation",
        description="tail-side and head-side closed forms agree on every edge",
        suite=Suite.GAMMA,
        tolerance="orientation",
        handler=_orientation,
    )
)

gamma_dirichlet_dimensions = register_check(
    CheckDefinition(
        name="gamma.dirichlet_dimensions",
        description="nullspace ranks of ker(L - (pi n)^2) match the structural prediction",
        suite=Suite.GAMMA,
        tolerance="count_mismatch",
        handler=_dirichlet_dimensions,
    )
)

gamma_band_count = register_check(
    CheckDefinition(
        name="gamma.band_count",
        description="band pair counts equal |P-spectrum within I(n)| summed over bands",
        suite=Suite.GAMMA,
        tolerance="count_mismatch",
        handler=_band_count,
    )
)
