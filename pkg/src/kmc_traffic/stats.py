"""Flow and velocity measurement at a fixed detector site."""

from typing import Optional, Sequence, Tuple

import numpy as np

from .exceptions import MeasurementError


def crossings_of_move(old_cell: int, jump: int, detector: int, n_cells: int) -> int:
    """Return 1 if a J-cell jump from old_cell lands on or passes the detector.

    A car passes the detector when detector is one of old+1..old+J (mod N).
    """
    return 1 if 1 <= (detector - old_cell) % n_cells <= jump else 0


class MeasureAccumulator:
    """Running totals over the measurement window of one run.

    Attributes:
        crossings: Detector passages since burn-in
        cells_advanced: Cells moved by all cars since burn-in (J per executed event)
        executed: Executed events since burn-in
        null: Null events since burn-in
        measure_time: Length of the measurement window, s
    """

    __slots__ = (
        "jump",
        "detector",
        "n_cells",
        "crossings",
        "cells_advanced",
        "executed",
        "null",
        "measure_time",
    )

    def __init__(self, jump: int, detector: int, n_cells: int):
        self.jump = jump
        self.detector = detector
        self.n_cells = n_cells
        self.crossings = 0
        self.cells_advanced = 0
        self.executed = 0
        self.null = 0
        self.measure_time = 0.0

    def record(self, executed: bool, old_cell: Optional[int]) -> None:
        """Account for one step inside the measurement window."""
        if not executed:
            self.null += 1
            return
        self.executed += 1
        self.cells_advanced += self.jump
        self.crossings += crossings_of_move(old_cell, self.jump, self.detector, self.n_cells)


def flow_average(acc: MeasureAccumulator) -> float:
    """Average flow F-bar = crossings / measure_time, cars/s.

    Raises:
        MeasurementError: If the measurement window is empty
    """
    if acc.measure_time <= 0:
        raise MeasurementError("flow average needs a positive measurement window")
    return acc.crossings / acc.measure_time


def velocity_average(acc: MeasureAccumulator, n_cars: int) -> float:
    """Ensemble velocity v-bar = cells_advanced / (Nc * measure_time), cells/s.

    Raises:
        MeasurementError: If the window is empty or there are no cars
    """
    if acc.measure_time <= 0:
        raise MeasurementError("velocity average needs a positive measurement window")
    if n_cars <= 0:
        raise MeasurementError("velocity average needs at least one car")
    return acc.cells_advanced / (n_cars * acc.measure_time)


def mean_and_stderr(samples: Sequence[float]) -> Tuple[float, float]:
    """Sample mean and standard error of the mean (0 for a single sample)."""
    values = np.asarray(samples, dtype=float)
    if values.size == 0:
        raise MeasurementError("no samples to average")
    mean = float(values.mean())
    if values.size == 1:
        return mean, 0.0
    return mean, float(values.std(ddof=1) / np.sqrt(values.size))
