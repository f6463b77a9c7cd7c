"""Discrete N-periodic look-ahead kernels."""

from typing import Optional, Sequence, Union

import numpy as np

from .exceptions import InvalidConfiguration
from .models import KernelConfig, KernelKind
from .utils import validate_positive_float, validate_positive_int


class Kernel:
    """Look-ahead weights k_m for offsets m = 0..N-1, extended N-periodically.

    Offset 0 is the car's own cell and always carries zero weight. Values are
    stored densely and are read-only once constructed.

    Attributes:
        n_cells: Lattice size N
        values: Array of length N, values[m] = k_m
        bound: Largest kernel value (K-bar)
        look_ahead: Interaction range L; by default the largest offset holding a
            positive value (0 for an all-zero kernel). The exponential kernel
            declares L = N even where its stored tail underflows to 0
        name: Short label used in reports, e.g. "linear:500"
    """

    def __init__(
        self,
        values: Union[Sequence[float], np.ndarray],
        name: str = "custom",
        look_ahead: Optional[int] = None,
    ):
        values = np.array(values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise InvalidConfiguration("kernel values must be a nonempty 1D array", key="kernel")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise InvalidConfiguration("kernel values must be finite and >= 0", key="kernel")
        if values[0] != 0.0:
            raise InvalidConfiguration("kernel value at offset 0 must be 0", key="kernel")

        values.setflags(write=False)
        self.values = values
        self.n_cells = int(values.size)
        self.bound = float(values.max())
        support = np.flatnonzero(values)
        stored = int(support[-1]) if support.size else 0
        if look_ahead is None:
            look_ahead = stored
        elif not stored <= look_ahead <= self.n_cells:
            raise InvalidConfiguration(
                f"look_ahead must lie in [{stored}, {self.n_cells}], got {look_ahead}",
                key="look_ahead",
            )
        self.look_ahead = int(look_ahead)
        self.name = name

    def at(self, offset: int) -> float:
        """Kernel value at any integer offset, read periodically."""
        return float(self.values[offset % self.n_cells])

    def at_many(self, offsets: np.ndarray) -> np.ndarray:
        """Vectorised form of at() for an integer array of offsets."""
        return self.values[np.mod(offsets, self.n_cells)]

    @property
    def is_global(self) -> bool:
        """True when the support reaches the last offset N-1."""
        return self.look_ahead >= self.n_cells - 1

    def __repr__(self) -> str:
        return f"Kernel({self.name}, N={self.n_cells}, L={self.look_ahead}, bound={self.bound:g})"


def kernel_at(kernel: Kernel, offset: int) -> float:
    """Return k at an integer offset, with negative offsets mapped into [0, N)."""
    return kernel.at(offset)


def _check_look_ahead(n_cells: int, look_ahead: int) -> None:
    validate_positive_int("n_cells", n_cells)
    validate_positive_int("look_ahead", look_ahead)
    if look_ahead > n_cells:
        raise InvalidConfiguration(
            f"look_ahead must lie in [1, {n_cells}], got {look_ahead}", key="look_ahead"
        )
    if n_cells < 2:
        raise InvalidConfiguration("a kernel needs at least 2 cells", key="n_cells")


def _fold(n_cells: int, raw: np.ndarray) -> np.ndarray:
    """Place raw[i-1] = k_i for i = 1..len(raw) onto offsets mod N, then zero k_0."""
    values = np.zeros(n_cells, dtype=float)
    offsets = np.arange(1, raw.size + 1) % n_cells
    values[offsets] = raw
    values[0] = 0.0
    return values


def constant_kernel(n_cells: int, look_ahead: int) -> Kernel:
    """Uniform look-ahead: k_i = 1 for i = 1..L, 0 otherwise.

    L = N is accepted as the global case; its offset-N term lands on offset 0
    and is dropped.
    """
    _check_look_ahead(n_cells, look_ahead)
    return Kernel(_fold(n_cells, np.ones(look_ahead)), name=f"constant:{look_ahead}")


def linear_kernel(n_cells: int, look_ahead: int) -> Kernel:
    """Linearly decaying look-ahead: k_i = 2(1 - (i - 1/2)/L) for i = 1..L."""
    _check_look_ahead(n_cells, look_ahead)
    i = np.arange(1, look_ahead + 1, dtype=float)
    raw = 2.0 * (1.0 - (i - 0.5) / look_ahead)
    return Kernel(_fold(n_cells, raw), name=f"linear:{look_ahead}")


def exponential_raw(n_cells: int, strength: float) -> np.ndarray:
    """Exponential kernel values for offsets 1..N before k_0 is zeroed.

    k_i = N(e^{lambda/N} - 1)/(1 - e^{-lambda}) * e^{-lambda i/N}, evaluated as
    N(1 - e^{-lambda/N})/(1 - e^{-lambda}) * e^{-lambda (i-1)/N}, which is the same
    quantity without overflow for large lambda.
    """
    validate_positive_int("n_cells", n_cells)
    validate_positive_float("strength", strength)
    scale = n_cells * (-np.expm1(-strength / n_cells)) / (-np.expm1(-strength))
    i = np.arange(1, n_cells + 1, dtype=float)
    return scale * np.exp(-strength * (i - 1.0) / n_cells)


def exponential_kernel(n_cells: int, strength: float) -> Kernel:
    """Exponentially decaying global look-ahead with interaction strength lambda.

    Every offset interacts, so L = N regardless of how far the tail survives in
    floating point.
    """
    if n_cells < 2:
        raise InvalidConfiguration("a kernel needs at least 2 cells", key="n_cells")
    raw = exponential_raw(n_cells, strength)
    return Kernel(_fold(n_cells, raw), name=f"exponential:{strength:g}", look_ahead=n_cells)


def custom_kernel(values: Union[Sequence[float], np.ndarray]) -> Kernel:
    """Kernel from an explicit array indexed by offset 0..N-1."""
    return Kernel(values, name="custom")


def build_kernel(config: KernelConfig, n_cells: int) -> Kernel:
    """Create a kernel from its configuration.

    Args:
        config: Kernel configuration
        n_cells: Lattice size N

    Returns:
        Configured kernel instance
    """
    if config.kind == KernelKind.CONSTANT:
        return constant_kernel(n_cells, config.look_ahead)
    if config.kind == KernelKind.LINEAR:
        return linear_kernel(n_cells, config.look_ahead)
    if config.kind == KernelKind.EXPONENTIAL:
        return exponential_kernel(n_cells, config.strength)
    if config.kind == KernelKind.CUSTOM:
        kernel = custom_kernel(config.values)
        if kernel.n_cells != n_cells:
            raise InvalidConfiguration("custom kernel length must equal n_cells", key="kernel")
        return kernel
    raise InvalidConfiguration(f"Unsupported kernel kind: {config.kind}", key="kernel")
