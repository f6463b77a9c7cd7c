"""Base class for KMC engines."""

import math
from abc import ABC, abstractmethod
from typing import List, NamedTuple, Optional

import numpy as np

from ..exceptions import FrozenSystem, InvalidConfiguration, MeasurementError
from ..kernel import Kernel, build_kernel
from ..lattice import LatticeState
from ..models import EngineKind, EventRecord, RateConvention, SimConfig, SimSummary
from ..rates import RateParams
from ..slowdown import build_slowdown
from ..stats import MeasureAccumulator, flow_average, velocity_average
from ..utils import Timer, UniformStream, get_logger

logger = get_logger("engine")

# Total rates below this multiple of omega0 count as frozen.
FROZEN_RATE_FACTOR = 1e-15


class Step(NamedTuple):
    """Raw outcome of one step, without model validation."""

    time_before: float
    dt: float
    car: int
    executed: bool
    old_cell: int
    new_cell: int


class BaseEngine(ABC):
    """Rejection-free KMC loop shared by every engine variant.

    One step: select a car with probability proportional to its rate; if the
    J cells ahead are vacant move it and update the rates, otherwise record a
    null event; then advance the clock by an exponential waiting time whose
    rate is the total rate (after the update by default).

    Subclasses provide the rate bookkeeping and the selection rule.
    """

    kind: EngineKind

    def __init__(
        self,
        config: SimConfig,
        state: Optional[LatticeState] = None,
        stream: Optional[UniformStream] = None,
    ):
        """Initialize an engine.

        Args:
            config: Simulation configuration
            state: Initial lattice; random placement from the seed when omitted
            stream: Random stream; a fresh one seeded with config.seed when omitted
        """
        self.config = config
        self.stream = stream if stream is not None else UniformStream(config.seed)
        if state is None:
            state = LatticeState.init_random(config.n_cells, config.cars, self.stream.generator)
        elif state.n_cells != config.n_cells:
            raise ValueError("lattice size does not match the configuration")
        self.state = state
        self.kernel: Kernel = build_kernel(config.kernel, config.n_cells)
        self.params = RateParams(
            omega0=config.omega0, jump=config.jump, g=build_slowdown(config.slowdown)
        )
        self.clock = 0.0
        self.steps = 0
        self.executed = 0
        self._jump = config.jump
        self._post_rate = config.dt_rate_convention == RateConvention.POST
        self._frozen_rate = FROZEN_RATE_FACTOR * config.omega0
        self._setup()

    @abstractmethod
    def _setup(self) -> None:
        """Build the rate structures for the initial lattice."""
        pass

    @property
    @abstractmethod
    def total_rate(self) -> float:
        """Current total rate R, 1/s."""
        pass

    @abstractmethod
    def _select(self) -> int:
        """Draw the selection uniform(s) and return the chosen car."""
        pass

    @abstractmethod
    def _after_move(self, car: int, old_cell: int) -> None:
        """Bring rates up to date after car left old_cell."""
        pass

    @abstractmethod
    def weights(self) -> np.ndarray:
        """Current weight of every car, indexed by car identity."""
        pass

    @property
    def frozen(self) -> bool:
        return self.total_rate < self._frozen_rate

    def _advance(self) -> Step:
        total_before = self.total_rate
        if total_before < self._frozen_rate:
            raise FrozenSystem(f"total rate {total_before:g} is below threshold", self.clock)

        car = self._select()
        old_cell = new_cell = -1
        executed = self.state.span_vacant(car, self._jump)
        if executed:
            old_cell, new_cell = self.state.apply_move(car, self._jump)
            self._after_move(car, old_cell)
            self.executed += 1

        rate = total_before
        if self._post_rate:
            total_after = self.total_rate
            # a post-move freeze falls back to the selection-time total
            if total_after >= self._frozen_rate:
                rate = total_after
        dt = -math.log(self.stream.open_uniform()) / rate

        time_before = self.clock
        self.clock = time_before + dt
        self.steps += 1
        return Step(time_before, dt, car, executed, old_cell, new_cell)

    def step(self) -> EventRecord:
        """Perform one KMC step.

        Returns:
            Record of the step; executed is False for a null event

        Raises:
            FrozenSystem: If the total rate is zero
        """
        outcome = self._advance()
        return _to_record(outcome)

    def run_events(self, budget: int) -> int:
        """Step until `budget` more events have been executed, ignoring t_final.

        Args:
            budget: Number of executed (non-null) events to perform

        Returns:
            Number of steps taken, null events included

        Raises:
            FrozenSystem: If the total rate vanishes first
            InvalidConfiguration: If the lattice is full, so no event can ever execute
        """
        if budget > 0 and self.state.n_cars >= self.state.n_cells:
            raise InvalidConfiguration("a full lattice never executes an event", key="n_cars")
        target = self.executed + budget
        start = self.steps
        while self.executed < target:
            self._advance()
        return self.steps - start

    def run(self, events: Optional[List[EventRecord]] = None) -> SimSummary:
        """Run until the clock reaches t_final or the system freezes.

        Args:
            events: Optional list receiving a record of every step

        Returns:
            Summary of the measurement window [burn_in, t_final)
        """
        config = self.config
        t_final = config.t_final
        burn_in = config.burn_in
        acc = MeasureAccumulator(config.jump, config.detector_cell, config.n_cells)
        frozen = False

        logger.info(
            "Starting %s run: N=%d Nc=%d J=%d kernel=%s g=%s seed=%d",
            self.kind.value,
            config.n_cells,
            config.cars,
            config.jump,
            self.kernel.name,
            config.slowdown.label(),
            config.seed,
        )
        with Timer() as timer:
            try:
                while self.clock < t_final:
                    outcome = self._advance()
                    if outcome.time_before >= burn_in:
                        acc.record(outcome.executed, outcome.old_cell)
                    if events is not None:
                        events.append(_to_record(outcome))
            except FrozenSystem as exc:
                frozen = True
                logger.warning("Run froze at t=%.6g s after %d steps", exc.clock, self.steps)

        acc.measure_time = max(t_final - burn_in, 0.0)
        summary = self._summarize(acc, frozen, timer.elapsed or 0.0)
        logger.info(
            "Finished %s run: steps=%d executed=%d F=%.6g cars/s v=%.6g cells/s wall=%.3fs",
            self.kind.value,
            self.steps,
            self.executed,
            summary.flow,
            summary.velocity,
            summary.wall_time,
        )
        return summary

    def _summarize(self, acc: MeasureAccumulator, frozen: bool, wall_time: float) -> SimSummary:
        flow = velocity = 0.0
        velocity_defined = False
        try:
            flow = flow_average(acc)
            velocity = velocity_average(acc, self.state.n_cars)
            velocity_defined = True
        except MeasurementError:
            pass

        return SimSummary(
            config=self.config,
            flow=flow,
            velocity=velocity,
            velocity_defined=velocity_defined,
            crossings=acc.crossings,
            cells_advanced=acc.cells_advanced,
            measure_time=acc.measure_time,
            events_executed=acc.executed,
            events_null=acc.null,
            steps=self.steps,
            final_clock=self.clock,
            frozen=frozen,
            wall_time=wall_time,
        )


def _to_record(outcome: Step) -> EventRecord:
    if outcome.executed:
        return EventRecord(
            time_before=outcome.time_before,
            dt=outcome.dt,
            car=outcome.car,
            old_cell=outcome.old_cell,
            new_cell=outcome.new_cell,
            executed=True,
        )
    return EventRecord(
        time_before=outcome.time_before, dt=outcome.dt, car=outcome.car, executed=False
    )
