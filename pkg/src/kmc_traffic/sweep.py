"""Fundamental-diagram sweeps over a density grid."""

from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, List, Optional, Sequence, Tuple

from .engines import run_simulation
from .exceptions import InvalidConfiguration
from .models import (
    DiagramAggregate,
    DiagramRow,
    KernelConfig,
    KernelKind,
    SimConfig,
    SimSummary,
    SweepResult,
)
from .stats import mean_and_stderr
from .utils import derive_seed, get_logger, validate_positive_int

logger = get_logger("sweep")


def density_grid(start: float, stop: float, step: float) -> List[float]:
    """Evenly spaced densities from start to stop inclusive, rounded to 12 digits."""
    if step <= 0:
        raise InvalidConfiguration("density step must be positive", key="density_step")
    count = int(round((stop - start) / step)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def _point_configs(
    base: SimConfig,
    densities: Sequence[float],
    seeds_per_density: int,
    strengths: Sequence[Optional[float]],
) -> List[Tuple[Optional[float], int, int, SimConfig]]:
    points = []
    for strength in strengths:
        kernel = base.kernel
        if strength is not None:
            kernel = KernelConfig(kind=KernelKind.EXPONENTIAL, strength=strength)
        for density_idx, rho in enumerate(densities):
            for replicate in range(seeds_per_density):
                seed = derive_seed(base.seed, density_idx, replicate)
                config = base.with_updates(density=rho, seed=seed, kernel=kernel)
                points.append((strength, density_idx, replicate, config))
    return points


def _row(strength: Optional[float], replicate: int, summary: SimSummary) -> DiagramRow:
    config = summary.config
    return DiagramRow(
        rho_bar=config.rho_bar,
        n_cars=config.cars,
        seed=config.seed,
        replicate=replicate,
        strength=strength,
        flow=summary.flow,
        velocity=summary.velocity,
        null_fraction=summary.null_fraction,
        engine=config.engine,
        frozen=summary.frozen,
        wall_time=summary.wall_time,
    )


def aggregate(rows: Iterable[DiagramRow]) -> List[DiagramAggregate]:
    """Mean and standard error of F-bar and v-bar per (strength, density), in first-seen order."""
    groups: dict = {}
    for row in rows:
        groups.setdefault((row.strength, row.rho_bar), []).append(row)

    out = []
    for (strength, rho_bar), members in groups.items():
        flow_mean, flow_err = mean_and_stderr([r.flow for r in members])
        vel_mean, vel_err = mean_and_stderr([r.velocity for r in members])
        out.append(
            DiagramAggregate(
                rho_bar=rho_bar,
                strength=strength,
                n_seeds=len(members),
                flow_mean=flow_mean,
                flow_stderr=flow_err,
                velocity_mean=vel_mean,
                velocity_stderr=vel_err,
            )
        )
    return out


def sweep(
    base: SimConfig,
    densities: Sequence[float],
    seeds_per_density: int = 1,
    threads: int = 1,
    strengths: Optional[Sequence[float]] = None,
) -> SweepResult:
    """Run one simulation per (strength, density, replicate).

    Seeds are derived from base.seed and the (density index, replicate index)
    pair, so the same seeds are reused across strengths. Rows come back in
    submission order whatever the worker count.

    Args:
        base: Configuration shared by every run; density and seed are replaced
        densities: Density grid, each in (0, 1]
        seeds_per_density: Replicates per density
        threads: Worker processes (1 runs everything in-process)
        strengths: Optional exponential-kernel strengths; one sweep per value

    Returns:
        Rows in run order plus per-density aggregates

    Raises:
        InvalidConfiguration: If a density lies outside (0, 1]
    """
    validate_positive_int("seeds_per_density", seeds_per_density)
    validate_positive_int("threads", threads)
    for rho in densities:
        if not 0.0 < rho <= 1.0:
            raise InvalidConfiguration(f"density must lie in (0, 1], got {rho}", key="density")

    points = _point_configs(base, densities, seeds_per_density, strengths or [None])
    configs = [p[3] for p in points]
    logger.info(
        "Sweeping %d densities x %d seeds x %d strengths on %d worker(s)",
        len(densities),
        seeds_per_density,
        len(strengths or [None]),
        threads,
    )

    if threads == 1:
        summaries = map(run_simulation, configs)
    else:
        executor = ProcessPoolExecutor(max_workers=threads)
        summaries = executor.map(run_simulation, configs)

    rows = []
    try:
        for (strength, density_idx, replicate, _), summary in zip(points, summaries):
            row = _row(strength, replicate, summary)
            logger.info(
                "Point rho=%.4f seed#%d%s: F=%.6g cars/s v=%.6g cells/s",
                row.rho_bar,
                replicate,
                "" if strength is None else f" lambda={strength:g}",
                row.flow,
                row.velocity,
            )
            rows.append(row)
    finally:
        if threads != 1:
            executor.shutdown()

    return SweepResult(rows=rows, aggregates=aggregate(rows))
