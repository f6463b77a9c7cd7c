"""List-based KMC engine for constant look-ahead kernels."""

from typing import List

import numpy as np

from ..exceptions import FrozenSystem, InvalidConfiguration
from ..index import FenwickIndex
from ..models import EngineKind
from ..rates import weights_direct
from .base import BaseEngine


class ListTable:
    """Cars grouped by the number of cars inside their look-ahead range.

    With a constant kernel of distance L a car's weight is count / N for a
    count in 0..L, so only L+1 rates exist. List j holds the cars with count j;
    its multiplicity n_j and rate r_j give the list weight n_j r_j, which a
    Fenwick index over the L+1 lists turns into a two-level selection.
    """

    def __init__(self, levels: np.ndarray, level_rates: np.ndarray):
        """Initialize the table.

        Args:
            levels: Count of cars ahead for every car, indexed by car identity
            level_rates: Rate r_j of each list j = 0..L
        """
        self.level_rates = np.asarray(level_rates, dtype=float)
        n_levels = self.level_rates.size
        self.members: List[List[int]] = [[] for _ in range(n_levels)]
        self.level: List[int] = [int(v) for v in levels]
        self.slot: List[int] = [0] * len(self.level)
        for car, lvl in enumerate(self.level):
            self.slot[car] = len(self.members[lvl])
            self.members[lvl].append(car)
        self.index = FenwickIndex.from_values(self.multiplicities() * self.level_rates)

    def multiplicities(self) -> np.ndarray:
        """n_j for every list."""
        return np.array([len(m) for m in self.members], dtype=float)

    @property
    def total(self) -> float:
        """Total rate sum_j n_j r_j."""
        return self.index.total

    def rate_of_car(self, car: int) -> float:
        return float(self.level_rates[self.level[car]])

    def move(self, car: int, new_level: int) -> None:
        """Move a car to another list in O(log(L+1))."""
        old_level = self.level[car]
        if old_level == new_level:
            return
        members = self.members[old_level]
        pos = self.slot[car]
        last = members.pop()
        if last != car:
            members[pos] = last
            self.slot[last] = pos
        target = self.members[new_level]
        self.slot[car] = len(target)
        target.append(car)
        self.level[car] = new_level
        self.index.update(old_level, len(members) * self.level_rates[old_level])
        self.index.update(new_level, len(target) * self.level_rates[new_level])

    def check_invariants(self) -> None:
        """Assert that every car sits in exactly one list, at its recorded slot."""
        assert sum(len(m) for m in self.members) == len(self.level)
        for lvl, members in enumerate(self.members):
            for pos, car in enumerate(members):
                assert self.level[car] == lvl and self.slot[car] == pos


def select_event_listbased(lists: ListTable, xi1: float, u: float) -> int:
    """Pick a list by its share of the total rate, then a member uniformly.

    Args:
        lists: Current list table
        xi1: Uniform number in [0, 1) selecting the list
        u: Uniform number in [0, 1) selecting the member

    Returns:
        Car identity; its marginal probability is r / R

    Raises:
        FrozenSystem: If the total rate is zero
    """
    total = lists.total
    if total <= 0.0:
        raise FrozenSystem("total rate is zero; no event can fire")
    level = lists.index.find(xi1 * total)
    members = lists.members[level]
    return members[min(int(u * len(members)), len(members) - 1)]


class ListBasedEngine(BaseEngine):
    """KMC selecting among L+1 rate lists; requires a constant kernel.

    Each step draws the list uniform, the member uniform, then the waiting-time
    uniform. A move from i to i+J only lowers the count of cars whose range
    ends in i-L..i-L+J-1, so at most J cars change list besides the mover.
    """

    kind = EngineKind.LIST_BASED

    def _setup(self) -> None:
        kernel = self.kernel
        if not np.all(kernel.values[1 : kernel.look_ahead + 1] == 1.0):
            raise InvalidConfiguration("list_based engine requires a constant kernel", key="kernel")
        n = self.state.n_cells
        self.look_ahead = kernel.look_ahead
        counts = np.rint(weights_direct(self.state, kernel, self.state.car_cells) * n)
        level_rates = self.params.prefactor * self.params.g.evaluate(
            np.arange(self.look_ahead + 1) / n
        )
        self.lists = ListTable(counts.astype(np.int64), level_rates)

    @property
    def total_rate(self) -> float:
        return self.lists.total

    def _select(self) -> int:
        xi1 = self.stream.uniform()
        u = self.stream.uniform()
        return select_event_listbased(self.lists, xi1, u)

    def _after_move(self, car: int, old_cell: int) -> None:
        state = self.state
        n = state.n_cells
        reach = self.look_ahead
        cell_to_car = state.cell_to_car
        for distance in range(max(1, reach - self._jump + 1), reach + 1):
            other = int(cell_to_car[(old_cell - distance) % n])
            if other >= 0 and other != car:
                self.lists.move(other, self.lists.level[other] - 1)

        new_cell = old_cell + self._jump
        ahead = np.take(state.occupancy, np.arange(new_cell + 1, new_cell + reach + 1), mode="wrap")
        self.lists.move(car, int(ahead.sum()))

    def weights(self) -> np.ndarray:
        return np.array(self.lists.level, dtype=float) / self.state.n_cells
