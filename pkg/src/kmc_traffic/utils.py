"""Utility functions and helpers for kmc_traffic package."""

import logging
import time
from typing import Optional

import numpy as np

from .exceptions import InvalidConfiguration


def setup_logging(level: int = logging.INFO, format_string: Optional[str] = None) -> None:
    """Set up logging for the package.

    Args:
        level: Logging level (default: INFO)
        format_string: Custom format string for log messages
    """
    if format_string is None:
        format_string = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    logging.basicConfig(level=level, format=format_string)


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance.

    Args:
        name: Name for the logger

    Returns:
        Logger instance
    """
    return logging.getLogger(f"kmc_traffic.{name}")


class Timer:
    """Simple timer context manager for measuring wall-clock time."""

    def __init__(self) -> None:
        """Initialize the timer."""
        self.start_time: Optional[float] = None
        self.end_time: Optional[float] = None
        self.elapsed: Optional[float] = None

    def __enter__(self) -> "Timer":
        """Start the timer."""
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, *args: object) -> None:
        """Stop the timer and calculate elapsed time."""
        self.end_time = time.perf_counter()
        self.elapsed = self.end_time - self.start_time


class UniformStream:
    """Uniform random numbers served in draw order from a seeded generator.

    Values are pulled from the generator in blocks; the sequence is identical to
    drawing one value at a time, so two streams with the same seed stay aligned
    no matter how the values are consumed.
    """

    def __init__(self, seed: int, block_size: int = 4096):
        """Initialize the stream.

        Args:
            seed: 64-bit seed for a PCG64 generator
            block_size: Number of values drawn from the generator per refill
        """
        self.seed = seed
        self.block_size = block_size
        self._rng = np.random.default_rng(seed)
        self._block: list = []
        self._pos = 0
        self.draws = 0

    def uniform(self) -> float:
        """Return the next uniform number in [0, 1)."""
        if self._pos >= len(self._block):
            self._block = self._rng.random(self.block_size).tolist()
            self._pos = 0
        value = self._block[self._pos]
        self._pos += 1
        self.draws += 1
        return value

    def open_uniform(self) -> float:
        """Return the next uniform number in (0, 1); exact zeros are redrawn."""
        value = self.uniform()
        while value == 0.0:
            value = self.uniform()
        return value

    @property
    def generator(self) -> np.random.Generator:
        """The underlying generator.

        Direct use interleaves with the buffered block, so it is only safe
        before the first uniform draw (e.g. for the initial placement).
        """
        return self._rng


def derive_seed(base_seed: int, *key: int) -> int:
    """Mix a base seed with integer keys into an independent 64-bit seed.

    Args:
        base_seed: Base seed of the experiment
        *key: Integer keys, e.g. (density index, replicate index)

    Returns:
        A 64-bit unsigned seed
    """
    sequence = np.random.SeedSequence([base_seed & 0xFFFFFFFFFFFFFFFF, *key])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def validate_positive_int(name: str, value: int) -> None:
    """Validate a positive integer parameter.

    Args:
        name: Parameter name used in the error message
        value: Value to validate

    Raises:
        InvalidConfiguration: If value is not a positive integer
    """
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise InvalidConfiguration(f"{name} must be an integer", key=name)
    if value <= 0:
        raise InvalidConfiguration(f"{name} must be greater than 0", key=name)


def validate_positive_float(name: str, value: float) -> None:
    """Validate a strictly positive real parameter.

    Args:
        name: Parameter name used in the error message
        value: Value to validate

    Raises:
        InvalidConfiguration: If value is not a finite positive number
    """
    if not np.isfinite(value) or value <= 0:
        raise InvalidConfiguration(f"{name} must be a finite number greater than 0", key=name)
