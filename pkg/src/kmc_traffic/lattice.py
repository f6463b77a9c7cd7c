"""Periodic cell configuration and car registry."""

from typing import Sequence, Tuple, Union

import numpy as np

from .exceptions import InvalidConfiguration, UnknownCar
from .utils import validate_positive_int

SeedLike = Union[int, np.random.Generator]


class LatticeState:
    """Occupancy of a periodic lattice of N cells plus the registry of cars on it.

    Cells are 0-based. Car identities are dense integers 0..Nc-1 assigned once,
    in increasing cell order, when the state is built; moves change positions,
    never identities. Since a move needs every cell it crosses to be vacant,
    the cyclic order of cars is preserved.

    Attributes:
        n_cells: Number of lattice cells N
        occupancy: Boolean array of length N (sigma_i)
        car_cells: Cell index of each car, indexed by car identity
        cell_to_car: Car identity occupying each cell, -1 for vacant cells
    """

    def __init__(self, occupancy: np.ndarray):
        occupancy = np.asarray(occupancy, dtype=bool)
        if occupancy.ndim != 1 or occupancy.size == 0:
            raise InvalidConfiguration("occupancy must be a nonempty 1D array", key="occupancy")

        self.n_cells = int(occupancy.size)
        self.occupancy = occupancy.copy()
        self.car_cells = np.flatnonzero(self.occupancy).astype(np.int64)
        self.cell_to_car = np.full(self.n_cells, -1, dtype=np.int64)
        self.cell_to_car[self.car_cells] = np.arange(self.car_cells.size, dtype=np.int64)

    @classmethod
    def init_random(cls, n_cells: int, n_cars: int, seed: SeedLike) -> "LatticeState":
        """Place n_cars cars uniformly at random without replacement.

        The cells are chosen as the first n_cars entries of a shuffled arrangement
        of all N cells, so placement is exactly uniform and fixed by the seed.

        Args:
            n_cells: Number of lattice cells
            n_cars: Number of cars, 0 <= n_cars <= n_cells
            seed: Integer seed or an existing numpy Generator

        Returns:
            New lattice state

        Raises:
            InvalidConfiguration: If n_cars is outside [0, n_cells]
        """
        validate_positive_int("n_cells", n_cells)
        if n_cars < 0 or n_cars > n_cells:
            raise InvalidConfiguration(
                f"n_cars must lie in [0, {n_cells}], got {n_cars}", key="n_cars"
            )

        rng = np.random.default_rng(seed)
        occupancy = np.zeros(n_cells, dtype=bool)
        occupancy[rng.permutation(n_cells)[:n_cars]] = True
        return cls(occupancy)

    @classmethod
    def from_occupancy(
        cls, bits: Union[Sequence[int], Sequence[bool], np.ndarray]
    ) -> "LatticeState":
        """Build a state from an explicit occupancy pattern.

        Args:
            bits: Nonempty sequence of 0/1 (or booleans), one per cell

        Returns:
            New lattice state with car identities in increasing cell order
        """
        return cls(np.asarray(bits, dtype=bool))

    @property
    def n_cars(self) -> int:
        """Number of cars Nc."""
        return int(self.car_cells.size)

    @property
    def density(self) -> float:
        """Fraction of occupied cells."""
        return self.n_cars / self.n_cells

    def cell_of(self, car: int) -> int:
        """Return the cell occupied by a car.

        Raises:
            UnknownCar: If the identity is not registered
        """
        if car < 0 or car >= self.car_cells.size:
            raise UnknownCar(f"Car {car} is not registered (Nc={self.n_cars})")
        return int(self.car_cells[car])

    def span_vacant(self, car: int, jump: int) -> bool:
        """Check whether the J cells ahead of a car are all vacant.

        Args:
            car: Car identity
            jump: Number of cells J, 1 <= J < N

        Returns:
            True iff cells i+1..i+J (mod N) are vacant, i being the car's cell
        """
        cell = self.cell_of(car)
        assert 0 < jump < self.n_cells, "jump must satisfy 1 <= J < N"
        n = self.n_cells
        occupancy = self.occupancy
        for offset in range(1, jump + 1):
            if occupancy[(cell + offset) % n]:
                return False
        return True

    def apply_move(self, car: int, jump: int) -> Tuple[int, int]:
        """Move a car J cells forward.

        Args:
            car: Car identity
            jump: Number of cells J; the span ahead must be vacant

        Returns:
            Tuple of (old_cell, new_cell)
        """
        assert self.span_vacant(car, jump), f"car {car} cannot advance {jump} cells"
        old_cell = int(self.car_cells[car])
        new_cell = (old_cell + jump) % self.n_cells

        self.occupancy[old_cell] = False
        self.occupancy[new_cell] = True
        self.cell_to_car[old_cell] = -1
        self.cell_to_car[new_cell] = car
        self.car_cells[car] = new_cell
        return old_cell, new_cell

    def copy(self) -> "LatticeState":
        """Return an independent copy keeping the current car identities."""
        clone = LatticeState.__new__(LatticeState)
        clone.n_cells = self.n_cells
        clone.occupancy = self.occupancy.copy()
        clone.car_cells = self.car_cells.copy()
        clone.cell_to_car = self.cell_to_car.copy()
        return clone

    def check_invariants(self) -> None:
        """Assert registry consistency; intended for tests and validation."""
        assert int(self.occupancy.sum()) == self.car_cells.size
        assert np.all(self.occupancy[self.car_cells])
        assert np.array_equal(
            self.cell_to_car[self.car_cells], np.arange(self.car_cells.size)
        )
        assert int((self.cell_to_car >= 0).sum()) == self.car_cells.size

    def __repr__(self) -> str:
        bits = "".join("1" if b else "0" for b in self.occupancy[:64])
        suffix = "..." if self.n_cells > 64 else ""
        return f"LatticeState(N={self.n_cells}, Nc={self.n_cars}, {bits}{suffix})"
