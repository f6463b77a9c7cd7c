"""Oracle suites checking the engines against direct computation and closed forms.

Suites:
    incremental_vs_direct   accelerated weights vs the full lattice sum
    trajectory_equivalence  standard and accelerated engines on one random sequence
    waiting_time_law        dt on a frozen lattice vs exponential(R)
    list_based              list-based selection law and flow vs the standard engine
    flux_limits             simulated flow vs the lambda -> 0 and lambda -> infinity limits
"""

from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field
from scipy import stats as sstats

from .analytic import flux_limit
from .engines import ListBasedEngine, create_engine, run_simulation, select_event_listbased
from .exceptions import ValidationFailed
from .lattice import LatticeState
from .models import (
    EngineKind,
    KernelConfig,
    KernelKind,
    LimitKind,
    SimConfig,
    SimSummary,
    SlowdownConfig,
    SlowdownKind,
    ValidationReport,
)
from .rates import max_weight_error
from .slowdown import Slowdown
from .stats import mean_and_stderr
from .utils import UniformStream, derive_seed, get_logger

logger = get_logger("validate")


class ValidationPlan(BaseModel):
    """Sizes and tolerances of the oracle suites."""

    drift_events: int = Field(default=100_000, ge=1)
    drift_tolerance: float = Field(default=1e-9, gt=0)
    trajectory_steps: int = Field(default=100_000, ge=1)
    clock_tolerance: float = Field(default=1e-9, gt=0)
    waiting_samples: int = Field(default=100_000, ge=10)
    waiting_mean_tolerance: float = Field(default=0.02, gt=0)
    selection_draws: int = Field(default=1_000_000, ge=1)
    list_t_final: float = Field(default=600.0, gt=0)
    list_flow_tolerance: float = Field(default=0.03, gt=0)
    flux_cells: int = Field(default=500, ge=10)
    flux_t_final: float = Field(default=600.0, gt=0)
    flux_seeds: int = Field(default=5, ge=1)
    flux_tolerance: float = Field(default=0.05, gt=0)
    detector_flow: bool = Field(
        default=True, description="Also check the detector flow, which needs long runs"
    )
    seed: int = Field(default=2024, ge=0)

    @classmethod
    def full(cls) -> "ValidationPlan":
        return cls()

    @classmethod
    def quick(cls) -> "ValidationPlan":
        """Reduced plan for a fast smoke check; detector flow is skipped."""
        return cls(
            drift_events=10_000,
            trajectory_steps=10_000,
            waiting_samples=20_000,
            waiting_mean_tolerance=0.05,
            selection_draws=100_000,
            list_t_final=120.0,
            list_flow_tolerance=0.05,
            flux_cells=200,
            flux_t_final=200.0,
            flux_seeds=2,
            detector_flow=False,
        )


def check_incremental_vs_direct(
    report: ValidationReport, plan: ValidationPlan, jumps: Sequence[int] = (1, 2)
) -> None:
    """Drive the accelerated engine with no refresh and compare to the lattice sum."""
    for jump in jumps:
        config = SimConfig(
            n_cells=256,
            density=0.4,
            jump=jump,
            kernel=KernelConfig(kind=KernelKind.EXPONENTIAL, strength=100.0),
            engine=EngineKind.ACCELERATED,
            refresh_every=0,
            seed=derive_seed(plan.seed, 1, jump),
        )
        engine = create_engine(config)
        engine.run_events(plan.drift_events)
        error = max_weight_error(engine.rates, engine.state, engine.kernel)
        report.add(
            "incremental_vs_direct", f"max_weight_error[J={jump}]", error, plan.drift_tolerance
        )


def check_trajectory_equivalence(report: ValidationReport, plan: ValidationPlan) -> None:
    """Run both engines from one initial lattice on identical uniform sequences."""
    base = SimConfig(
        n_cells=512,
        density=0.3,
        kernel=KernelConfig(kind=KernelKind.LINEAR, look_ahead=50),
        seed=derive_seed(plan.seed, 2),
    )
    state = LatticeState.init_random(base.n_cells, base.cars, derive_seed(plan.seed, 2, 0))
    engines = [
        create_engine(
            base.with_updates(engine=kind), state=state.copy(), stream=UniformStream(base.seed)
        )
        for kind in (EngineKind.STANDARD, EngineKind.ACCELERATED)
    ]

    mismatches = 0
    for _ in range(plan.trajectory_steps):
        a = engines[0].step()
        b = engines[1].step()
        if a.car != b.car or a.executed != b.executed:
            mismatches += 1
    report.add("trajectory_equivalence", "event_mismatches", mismatches, 0)

    clock_a, clock_b = engines[0].clock, engines[1].clock
    rel = abs(clock_a - clock_b) / max(abs(clock_a), 1e-300)
    report.add("trajectory_equivalence", "clock_relative_difference", rel, plan.clock_tolerance)


def check_waiting_time_law(report: ValidationReport, plan: ValidationPlan) -> None:
    """On a full lattice every step is null, so R is constant and dt ~ exponential(R)."""
    config = SimConfig(
        n_cells=64,
        n_cars=64,
        kernel=KernelConfig(kind=KernelKind.CONSTANT, look_ahead=5),
        slowdown=SlowdownConfig(kind=SlowdownKind.LINEAR),
        seed=derive_seed(plan.seed, 3),
    )
    engine = create_engine(config)
    total = engine.total_rate
    samples = np.array([engine.step().dt for _ in range(plan.waiting_samples)])

    mean_error = abs(samples.mean() * total - 1.0)
    report.add("waiting_time_law", "relative_mean_error", mean_error, plan.waiting_mean_tolerance)

    ks = sstats.kstest(samples, "expon", args=(0.0, 1.0 / total)).statistic
    critical = float(sstats.kstwo.ppf(0.99, samples.size))
    report.add("waiting_time_law", "ks_statistic", ks, critical)


def check_list_based(report: ValidationReport, plan: ValidationPlan) -> None:
    """Selection frequencies against r / R, and flow against the standard engine."""
    base = SimConfig(
        n_cells=500,
        density=0.3,
        kernel=KernelConfig(kind=KernelKind.CONSTANT, look_ahead=50),
        engine=EngineKind.LIST_BASED,
        t_final=plan.list_t_final,
        seed=derive_seed(plan.seed, 4),
    )
    engine = create_engine(base)
    assert isinstance(engine, ListBasedEngine)
    lists = engine.lists
    rates = np.array([lists.rate_of_car(car) for car in range(len(lists.level))])
    rng = np.random.default_rng(derive_seed(plan.seed, 4, 1))
    draws = rng.random((plan.selection_draws, 2))
    counts = np.bincount(
        [select_event_listbased(lists, xi1, u) for xi1, u in draws.tolist()],
        minlength=rates.size,
    )
    expected = plan.selection_draws * rates / rates.sum()
    nonzero = expected > 0
    p_value = sstats.chisquare(counts[nonzero], expected[nonzero]).pvalue
    report.add("list_based", "selection_chisquare_pvalue", p_value, 1e-3, comparison=">=")
    report.add("list_based", "selected_zero_rate_cars", float(counts[~nonzero].sum()), 0)

    list_flow = _fleet_flow(engine.run(), base.n_cells)
    standard_flow = _fleet_flow(
        run_simulation(base.with_updates(engine=EngineKind.STANDARD)), base.n_cells
    )
    rel = abs(list_flow - standard_flow) / max(standard_flow, 1e-300)
    report.add("list_based", "flow_relative_difference", rel, plan.list_flow_tolerance)


def _fleet_flow(summary: SimSummary, n_cells: int) -> float:
    """Ring flow Nc v / N, cars/s; equals the detector flow in expectation."""
    return summary.config.cars * summary.velocity / n_cells


def check_flux_limits(report: ValidationReport, plan: ValidationPlan) -> None:
    """Mean flow over seeds near both strength limits, J = 1, linear slowdown."""
    cases = [
        ("lambda_inf", 1e4, 0.5, LimitKind.LAMBDA_TO_INFINITY),
        ("lambda_zero", 0.1, 1.0 / 3.0, LimitKind.LAMBDA_TO_ZERO),
    ]
    g = Slowdown.linear()
    for label, strength, rho, limit in cases:
        fleet: List[float] = []
        detector: List[float] = []
        for replicate in range(plan.flux_seeds):
            config = SimConfig(
                n_cells=plan.flux_cells,
                density=rho,
                kernel=KernelConfig(kind=KernelKind.EXPONENTIAL, strength=strength),
                t_final=plan.flux_t_final,
                seed=derive_seed(plan.seed, 5, replicate),
            )
            summary = run_simulation(config)
            expected = flux_limit(config.rho_bar, 1, config.omega0, limit, g)
            fleet.append(_fleet_flow(summary, config.n_cells))
            detector.append(summary.flow)

        fleet_mean, _ = mean_and_stderr(fleet)
        report.add(
            "flux_limits",
            f"{label}_fleet_flow_relative_error",
            abs(fleet_mean - expected) / expected,
            plan.flux_tolerance,
        )
        if plan.detector_flow:
            detector_mean, _ = mean_and_stderr(detector)
            report.add(
                "flux_limits",
                f"{label}_detector_flow_relative_error",
                abs(detector_mean - expected) / expected,
                plan.flux_tolerance,
            )


SUITES: Dict[str, Callable[[ValidationReport, ValidationPlan], None]] = {
    "incremental_vs_direct": check_incremental_vs_direct,
    "trajectory_equivalence": check_trajectory_equivalence,
    "waiting_time_law": check_waiting_time_law,
    "list_based": check_list_based,
    "flux_limits": check_flux_limits,
}


def run_validation(
    plan: Optional[ValidationPlan] = None,
    suites: Optional[Sequence[str]] = None,
    strict: bool = False,
) -> ValidationReport:
    """Run the selected oracle suites (all by default) and collect every check.

    Args:
        plan: Sizes and tolerances; the full plan when omitted
        suites: Suite names to run
        strict: Raise instead of returning a failed report

    Raises:
        KeyError: For an unknown suite name
        ValidationFailed: If strict and any check failed
    """
    plan = plan or ValidationPlan.full()
    report = ValidationReport()
    for name in suites or list(SUITES):
        logger.info("Running suite %s", name)
        SUITES[name](report, plan)
    for check in report.checks:
        log = logger.info if check.passed else logger.error
        log(
            "%s/%s: measured %.6g, threshold %s %.6g -> %s",
            check.suite,
            check.name,
            check.measured,
            check.comparison,
            check.threshold,
            "ok" if check.passed else "FAIL",
        )
    if strict and not report.passed:
        failed = [f"{c.suite}/{c.name}" for c in report.checks if not c.passed]
        raise ValidationFailed(f"validation failed: {', '.join(failed)}", report)
    return report
