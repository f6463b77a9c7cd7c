"""Per-event cost of the engines as a function of lattice size."""

from concurrent.futures import ProcessPoolExecutor
from typing import List, Sequence, Tuple

import numpy as np

from .engines import create_engine
from .exceptions import InvalidConfiguration
from .models import (
    BenchReport,
    BenchRow,
    EngineKind,
    KernelConfig,
    KernelKind,
    SimConfig,
    SlopeFit,
)
from .utils import Timer, get_logger, validate_positive_int

logger = get_logger("bench")

DEFAULT_SIZES = (100, 200, 400, 800)
DEFAULT_BUDGET = 200_000


def bench_config(n_cells: int, engine: EngineKind, density: float, seed: int) -> SimConfig:
    """Benchmark setup: global linear kernel (L = N) and linear slowdown.

    The list-based engine only supports constant kernels, so it gets a global
    constant kernel instead.
    """
    kind = KernelKind.CONSTANT if engine == EngineKind.LIST_BASED else KernelKind.LINEAR
    return SimConfig(
        n_cells=n_cells,
        density=density,
        kernel=KernelConfig(kind=kind, look_ahead=n_cells),
        engine=engine,
        seed=seed,
    )


def time_engine(config: SimConfig, event_budget: int) -> BenchRow:
    """Time `event_budget` executed events; engine construction is not timed."""
    engine = create_engine(config)
    with Timer() as timer:
        steps = engine.run_events(event_budget)
    row = BenchRow(
        engine=config.engine,
        n_cells=config.n_cells,
        n_cars=config.cars,
        events_executed=event_budget,
        steps=steps,
        wall_time=timer.elapsed or 0.0,
    )
    logger.info(
        "Bench %s N=%d: %d events in %.3f s",
        config.engine.value,
        config.n_cells,
        event_budget,
        row.wall_time,
    )
    return row


def _time_point(args: Tuple[SimConfig, int]) -> BenchRow:
    return time_engine(*args)


def fit_loglog_slope(sizes: Sequence[float], times: Sequence[float]) -> Tuple[float, float]:
    """Least-squares line through (log N, log t).

    Returns:
        Tuple of (slope, intercept)

    Raises:
        InvalidConfiguration: With fewer than 3 points or a non-positive value
    """
    x = np.asarray(sizes, dtype=float)
    y = np.asarray(times, dtype=float)
    if x.size < 3 or x.size != y.size:
        raise InvalidConfiguration("slope fitting needs at least 3 (size, time) pairs", key="sizes")
    if np.any(x <= 0) or np.any(y <= 0):
        raise InvalidConfiguration("log-log fit needs positive sizes and times", key="sizes")
    slope, intercept = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope), float(intercept)


def run_bench(
    sizes: Sequence[int] = DEFAULT_SIZES,
    engines: Sequence[EngineKind] = (EngineKind.STANDARD, EngineKind.ACCELERATED),
    event_budget: int = DEFAULT_BUDGET,
    density: float = 0.3,
    seed: int = 0,
    threads: int = 1,
) -> BenchReport:
    """Time each engine at each size and fit the log-log scaling exponent.

    Timings run serially unless threads > 1, since concurrent runs skew each
    other's wall time.

    Args:
        sizes: Lattice sizes N; at least 3
        engines: Engine variants to compare
        event_budget: Executed events timed per (engine, N)
        density: Average density of every run
        seed: Seed shared by every run
        threads: Worker processes

    Returns:
        Report with one row per (engine, N) and one fit per engine
    """
    validate_positive_int("event_budget", event_budget)
    validate_positive_int("threads", threads)
    if len(sizes) < 3:
        raise InvalidConfiguration("bench needs at least 3 sizes", key="sizes")

    jobs: List[Tuple[SimConfig, int]] = [
        (bench_config(n, EngineKind(engine), density, seed), event_budget)
        for engine in engines
        for n in sizes
    ]
    if threads == 1:
        rows = [_time_point(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=threads) as executor:
            rows = list(executor.map(_time_point, jobs))

    fits = []
    for engine in engines:
        engine = EngineKind(engine)
        mine = [r for r in rows if r.engine == engine]
        slope, intercept = fit_loglog_slope([r.n_cells for r in mine], [r.wall_time for r in mine])
        fits.append(SlopeFit(engine=engine.value, slope=slope, intercept=intercept))
        logger.info("Engine %s: log-log slope %.3f", engine.value, slope)

    return BenchReport(rows=rows, fits=fits)
