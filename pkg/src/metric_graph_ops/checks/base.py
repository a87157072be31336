"""Check definitions, run context and the check registry.

Each verification check is a handler that measures one residual on a network and is
registered under a dotted name in one suite. Running a suite produces a ResidualReport
in check-name order.
"""

from __future__ import annotations

import logging
import math
import zlib
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, TypeVar

import numpy as np

from ..config import ToleranceConfig
from ..continuous import ContinuousEigenpair, SpectrumReport, spectrum_report
from ..discrete import DiscreteEigenpair, discrete_spectrum
from ..edge_function import SampledEdgeFunction, check_grid_size, sample_trig
from ..errors import MetricGraphError, RunParameterError
from ..network import Network

logger = logging.getLogger(__name__)

T = TypeVar("T")


class Suite(str, Enum):
    """Verification suites selectable with ``verify --suite``."""

    DISCRETE = "discrete"
    GAMMA = "gamma"
    AVERAGING = "averaging"
    DALEMBERT = "dalembert"
    WAVE = "wave"


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


@dataclass
class CheckContext:
    """Network, run parameters and lazily computed spectral data shared by all checks.

    Attributes:
        network: The network under test.
        grid_size: Samples per edge N.
        n_max: Highest band / Dirichlet index.
        tau_max: Largest time shift exercised.
        seed: Base seed; each check draws from its own generator derived from it.
        random_functions: Number of random functions for the functional identities.
        tolerances: Pass thresholds.
    """

    network: Network
    grid_size: int = 256
    n_max: int = 3
    tau_max: float = 2.0
    seed: int = 42
    random_functions: int = 50
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    _memo: dict[str, Any] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self) -> None:
        check_grid_size(self.grid_size)
        if self.n_max < 0:
            raise RunParameterError(f"band index must be >= 0, got {self.n_max}")
        if not math.isfinite(self.tau_max) or self.tau_max < 0:
            raise RunParameterError(f"tau_max must be finite and >= 0, got {self.tau_max}")

    @cached_property
    def spectrum(self) -> list[DiscreteEigenpair]:
        return discrete_spectrum(self.network)

    @cached_property
    def report(self) -> SpectrumReport:
        return spectrum_report(self.network, self.n_max, self.spectrum)

    @cached_property
    def eigenpairs(self) -> list[ContinuousEigenpair]:
        return self.report.eigenpairs

    @cached_property
    def sampled_eigenfunctions(self) -> list[SampledEdgeFunction]:
        """Eigenfunctions of :attr:`eigenpairs` sampled at ``grid_size``."""
        return [sample_trig(p.eigenfunction, self.grid_size) for p in self.eigenpairs]

    @property
    def tau_steps_max(self) -> int:
        return int(math.floor(self.tau_max * self.grid_size + 1e-9))

    def rng(self, name: str) -> np.random.Generator:
        """Generator seeded from the base seed and ``name``, independent of run order."""
        return np.random.default_rng([self.seed, zlib.crc32(name.encode("utf-8"))])

    def memo(self, key: str, factory: Callable[[], T]) -> T:
        """Compute ``factory()`` once per context and key."""
        if key not in self._memo:
            self._memo[key] = factory()
        return self._memo[key]  # type: ignore[no-any-return]

    def parameters(self) -> dict[str, Any]:
        return {
            "grid_size": self.grid_size,
            "n_max": self.n_max,
            "tau_max": self.tau_max,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class CheckOutcome:
    """What a handler measured: a residual, or the reason it could not."""

    residual: float
    parameters: dict[str, Any] = field(default_factory=dict)
    skipped: str | None = None

    @classmethod
    def skip(cls, reason: str) -> CheckOutcome:
        return cls(math.nan, skipped=reason)


# Type for check handler functions
CheckHandler = Callable[[CheckContext], CheckOutcome]


@dataclass(frozen=True)
class CheckRecord:
    """Result of one check. ``status`` is pass exactly when residual <= tolerance."""

    name: str
    suite: Suite
    residual: float
    tolerance: float
    status: CheckStatus
    parameters: dict[str, Any]
    reason: str | None = None

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASS

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "name": self.name,
            "suite": self.suite.value,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "status": self.status.value,
            "parameters": dict(self.parameters),
        }
        if self.reason is not None:
            out["reason"] = self.reason
        return out


@dataclass
class CheckDefinition:
    """A registered verification check.

    Attributes:
        name: Dotted name, ``<suite>.<check>``.
        description: One line shown in reports and logs.
        suite: Suite the check belongs to.
        tolerance: Name of the ToleranceConfig field holding the threshold.
        handler: Function measuring the residual.
    """

    name: str
    description: str
    suite: Suite
    tolerance: str
    handler: CheckHandler

    def run(self, ctx: CheckContext) -> CheckRecord:
        tolerance = float(getattr(ctx.tolerances, self.tolerance))
        parameters = ctx.parameters()
        try:
            outcome = self.handler(ctx)
        except MetricGraphError as e:
            logger.error(f"Check {self.name} raised {type(e).__name__}: {e}")
            return CheckRecord(
                self.name, self.suite, math.inf, tolerance, CheckStatus.FAIL, parameters, str(e)
            )
        parameters.update(outcome.parameters)
        if outcome.skipped is not None:
            logger.info(f"Check {self.name} skipped: {outcome.skipped}")
            return CheckRecord(
                self.name,
                self.suite,
                outcome.residual,
                tolerance,
                CheckStatus.SKIPPED,
                parameters,
                outcome.skipped,
            )
        status = CheckStatus.PASS if outcome.residual <= tolerance else CheckStatus.FAIL
        log = logger.debug if status is CheckStatus.PASS else logger.warning
        log(
            f"Check {self.name}: residual {outcome.residual:.3e} "
            f"(tolerance {tolerance:.1e}) {status.value}"
        )
        return CheckRecord(self.name, self.suite, outcome.residual, tolerance, status, parameters)


@dataclass
class ResidualReport:
    """All check records of one ``verify`` run, in check-name order."""

    records: list[CheckRecord]

    @property
    def all_passed(self) -> bool:
        """No check failed (skipped checks do not fail the run)."""
        return all(r.status is not CheckStatus.FAIL for r in self.records)

    def to_dict(self) -> dict[str, Any]:
        return {
            "all_passed": self.all_passed,
            "counts": {
                status.value: sum(r.status is status for r in self.records)
                for status in CheckStatus
            },
            "checks": [r.to_dict() for r in self.records],
        }


# Global check registry
_CHECK_REGISTRY: dict[str, CheckDefinition] = {}


def register_check(check: CheckDefinition) -> CheckDefinition:
    """Register a check in the global registry."""
    if check.name in _CHECK_REGISTRY:
        logger.warning(f"Check {check.name} already registered, overwriting")
    _CHECK_REGISTRY[check.name] = check
    logger.debug(f"Registered check: {check.name} ({check.suite.value})")
    return check


def get_check(name: str) -> CheckDefinition | None:
    """Get a check by name."""
    return _CHECK_REGISTRY.get(name)


def get_all_checks() -> list[CheckDefinition]:
    """Get all registered checks sorted by name."""
    return sorted(_CHECK_REGISTRY.values(), key=lambda c: c.name)


def get_checks_by_suite(suite: Suite) -> list[CheckDefinition]:
    """Get all checks in a suite, sorted by name."""
    return [c for c in get_all_checks() if c.suite == suite]


def run_checks(ctx: CheckContext, suite: Suite | None = None) -> ResidualReport:
    """Run one suite (or every registered check when ``suite`` is None) in name order."""
    checks = get_all_checks() if suite is None else get_checks_by_suite(suite)
    scope = suite.value if suite else "all"
    logger.info(f"Running {len(checks)} checks ({scope}) on {ctx.network}")
    return ResidualReport([check.run(ctx) for check in checks])
