"""Standard KMC engine: affected weights are re-evaluated from the lattice sum."""

import numpy as np

from ..models import EngineKind
from ..rates import RateState, init_rates, select_event, update_direct
from .base import BaseEngine


class StandardEngine(BaseEngine):
    """KMC with direct rate updates.

    After a move, the mover and every car with a touched cell inside its
    look-ahead range get their weight recomputed from scratch. For a global
    kernel that is every car, at O(N) each.
    """

    kind = EngineKind.STANDARD

    def _setup(self) -> None:
        self.rates: RateState = init_rates(self.state, self.kernel, self.params)

    @property
    def total_rate(self) -> float:
        return self.rates.total

    def _select(self) -> int:
        return select_event(self.rates, self.stream.uniform())

    def _after_move(self, car: int, old_cell: int) -> None:
        update_direct(self.rates, self.state, self.kernel, self.params, car, old_cell)

    def weights(self) -> np.ndarray:
        return self.rates.weights.copy()
