"""Slowdown factors g applied to the base hop rate."""

import math

import numpy as np

from .exceptions import InvalidConfiguration
from .models import SlowdownConfig, SlowdownKind
from .utils import validate_positive_float


class Slowdown:
    """A nonincreasing map g: [0, inf) -> [0, 1] with g(0) = 1.

    Three families are supported:
        arrhenius(c):  g(x) = exp(-c x)
        linear:        g(x) = max(1 - x, 0)
        quadratic:     g(x) = max(1 - x, 0)^2
    """

    def __init__(self, kind: SlowdownKind, coefficient: float = 1.0):
        kind = SlowdownKind(kind)
        if kind == SlowdownKind.ARRHENIUS:
            validate_positive_float("coefficient", coefficient)
        self.kind = kind
        self.coefficient = float(coefficient)

    @classmethod
    def arrhenius(cls, coefficient: float = 1.0) -> "Slowdown":
        return cls(SlowdownKind.ARRHENIUS, coefficient)

    @classmethod
    def linear(cls) -> "Slowdown":
        return cls(SlowdownKind.LINEAR)

    @classmethod
    def quadratic(cls) -> "Slowdown":
        return cls(SlowdownKind.QUADRATIC)

    def eval(self, x: float) -> float:
        """Evaluate g at a single non-negative weight.

        Raises:
            InvalidConfiguration: If x is negative
        """
        if x < 0:
            raise InvalidConfiguration(f"slowdown argument must be >= 0, got {x}", key="weight")
        if self.kind == SlowdownKind.ARRHENIUS:
            return math.exp(-self.coefficient * x)
        clamped = max(1.0 - x, 0.0)
        if self.kind == SlowdownKind.LINEAR:
            return clamped
        return clamped * clamped

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Vectorised g for an array of non-negative weights."""
        x = np.asarray(x, dtype=float)
        if self.kind == SlowdownKind.ARRHENIUS:
            return np.exp(-self.coefficient * x)
        clamped = np.maximum(1.0 - x, 0.0)
        if self.kind == SlowdownKind.LINEAR:
            return clamped
        return clamped * clamped

    def label(self) -> str:
        """Short label, matching the CLI shorthand."""
        if self.kind == SlowdownKind.ARRHENIUS:
            return f"arrhenius:{self.coefficient:g}"
        return self.kind.value

    def __repr__(self) -> str:
        return f"Slowdown({self.label()})"


def build_slowdown(config: SlowdownConfig) -> Slowdown:
    """Create a slowdown function from its configuration."""
    return Slowdown(config.kind, config.coefficient)
