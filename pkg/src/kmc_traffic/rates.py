"""Per-car weights, hop rates and the prefix index used for event selection."""

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .exceptions import FrozenSystem
from .index import FenwickIndex
from .kernel import Kernel
from .lattice import LatticeState
from .slowdown import Slowdown

# Largest number of (cars x cells) kernel entries evaluated in one batch.
_BATCH_ENTRIES = 1 << 22


class RateParams(BaseModel):
    """Parameters of the hop rate r = (omega0 / J) g(w)."""

    omega0: float = Field(..., gt=0, description="Base hop frequency 1/tau0, 1/s")
    jump: int = Field(..., ge=1, description="Cells advanced per move J")
    g: Slowdown = Field(..., description="Slowdown function")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def prefactor(self) -> float:
        return self.omega0 / self.jump


class RateState:
    """Weights and rates of every car, keyed by car identity.

    Attributes:
        weights: Look-ahead weight w of each car
        rates: Hop rate r of each car, 1/s
        index: Fenwick prefix index over rates
    """

    def __init__(self, weights: np.ndarray, params: RateParams):
        self.params = params
        self.weights = np.maximum(np.asarray(weights, dtype=float), 0.0)
        self.rates = params.prefactor * params.g.evaluate(self.weights)
        self.index = FenwickIndex.from_values(self.rates)
        self.bulk_threshold = max(16, self.weights.size // 16)

    @property
    def total(self) -> float:
        """Total rate R, 1/s."""
        return self.index.total

    @property
    def n_cars(self) -> int:
        return int(self.weights.size)

    def commit(self, cars: np.ndarray) -> None:
        """Recompute the rates of the given cars from their weights and index them."""
        if cars.size == 0:
            return
        self.weights[cars] = np.maximum(self.weights[cars], 0.0)
        fresh = self.params.prefactor * self.params.g.evaluate(self.weights[cars])
        self.rates[cars] = fresh
        if cars.size > self.bulk_threshold:
            self.index.rebuild(self.rates)
            return
        for car, rate in zip(cars.tolist(), fresh.tolist()):
            self.index.update(car, rate)

    def reset(self, weights: np.ndarray) -> None:
        """Replace every weight and rebuild rates and index in bulk."""
        self.weights = np.maximum(np.asarray(weights, dtype=float), 0.0)
        self.rates = self.params.prefactor * self.params.g.evaluate(self.weights)
        self.index.rebuild(self.rates)

    def snapshot(self) -> "RateState":
        """Independent copy for diagnostics."""
        clone = RateState.__new__(RateState)
        clone.params = self.params
        clone.weights = self.weights.copy()
        clone.rates = self.rates.copy()
        clone.index = FenwickIndex.from_values(self.rates)
        clone.bulk_threshold = self.bulk_threshold
        return clone


def weight_direct(state: LatticeState, kernel: Kernel, cell: int) -> float:
    """Weight of a cell from the full lattice sum (1/N) sum_j k_{j-cell} sigma_j."""
    offsets = np.arange(state.n_cells) - cell
    return float(np.dot(kernel.at_many(offsets), state.occupancy)) / state.n_cells


def weights_direct(state: LatticeState, kernel: Kernel, cells: np.ndarray) -> np.ndarray:
    """weight_direct for many cells at once; costs O(len(cells) * N)."""
    cells = np.asarray(cells, dtype=np.int64)
    n = state.n_cells
    out = np.empty(cells.size, dtype=float)
    if cells.size == 0:
        return out
    sigma = state.occupancy.astype(float)
    positions = np.arange(n)
    chunk = max(1, _BATCH_ENTRIES // n)
    for start in range(0, cells.size, chunk):
        block = cells[start : start + chunk]
        table = kernel.at_many(positions[None, :] - block[:, None])
        out[start : start + chunk] = table @ sigma
    return out / n


def rate_of(params: RateParams, w: float) -> float:
    """Hop rate for a weight, (omega0 / J) g(w), in 1/s."""
    return params.prefactor * params.g.eval(w)


def init_rates(state: LatticeState, kernel: Kernel, params: RateParams) -> RateState:
    """Compute every car's weight from scratch and build the rate index."""
    return RateState(weights_direct(state, kernel, state.car_cells), params)


def select_event(rs: RateState, xi1: float) -> int:
    """Pick the car whose cumulative rate bracket contains xi1 * R.

    Args:
        rs: Current rate state
        xi1: Uniform number in [0, 1)

    Returns:
        Car identity k with sum_{j<k} r_j < xi1 R <= sum_{j<=k} r_j

    Raises:
        FrozenSystem: If the total rate is zero
    """
    total = rs.total
    if rs.n_cars == 0 or total <= 0.0:
        raise FrozenSystem("total rate is zero; no event can fire")
    return rs.index.find(xi1 * total)


def update_accelerated(
    rs: RateState,
    state: LatticeState,
    kernel: Kernel,
    params: RateParams,
    moved_car: int,
    old_cell: int,
) -> RateState:
    """Update weights after a move from the previous weights, O(Nc + N).

    Every other car gains (k_{old+J-i} - k_{old-i}) / N; the moved car is
    recomputed from the lattice sum at its new cell.
    """
    cells = state.car_cells
    n = state.n_cells
    delta = (
        kernel.at_many(old_cell + params.jump - cells) - kernel.at_many(old_cell - cells)
    ) / n
    delta[moved_car] = 0.0
    changed = np.flatnonzero(delta)
    rs.weights[changed] += delta[changed]
    rs.weights[moved_car] = weight_direct(state, kernel, int(cells[moved_car]))
    rs.commit(np.append(changed, moved_car))
    return rs


def affected_cars(
    state: LatticeState, kernel: Kernel, moved_car: int, old_cell: int, jump: int
) -> np.ndarray:
    """Cars whose weight can change after a move: the mover plus every car with
    either touched cell inside its look-ahead range."""
    n = state.n_cells
    cells = state.car_cells
    reach = kernel.look_ahead
    behind_old = np.mod(old_cell - cells, n)
    behind_new = np.mod(old_cell + jump - cells, n)
    mask = ((behind_old >= 1) & (behind_old <= reach)) | ((behind_new >= 1) & (behind_new <= reach))
    mask[moved_car] = True
    return np.flatnonzero(mask)


def update_direct(
    rs: RateState,
    state: LatticeState,
    kernel: Kernel,
    params: RateParams,
    moved_car: int,
    old_cell: int,
) -> RateState:
    """Update weights after a move by re-evaluating the lattice sum of every
    affected car; up to O(Nc * N) for a global kernel."""
    cars = affected_cars(state, kernel, moved_car, old_cell, params.jump)
    rs.weights[cars] = weights_direct(state, kernel, state.car_cells[cars])
    rs.commit(cars)
    return rs


def refresh(rs: RateState, state: LatticeState, kernel: Kernel) -> float:
    """Recompute every weight from scratch.

    Returns:
        Largest absolute weight correction, i.e. the drift that was removed
    """
    fresh = weights_direct(state, kernel, state.car_cells)
    drift = float(np.max(np.abs(fresh - rs.weights))) if fresh.size else 0.0
    rs.reset(fresh)
    return drift


def max_weight_error(
    rs: RateState, state: LatticeState, kernel: Kernel, reference: Optional[np.ndarray] = None
) -> float:
    """Largest |w_stored - w_direct| over all cars."""
    if reference is None:
        reference = weights_direct(state, kernel, state.car_cells)
    if reference.size == 0:
        return 0.0
    return float(np.max(np.abs(reference - rs.weights)))
