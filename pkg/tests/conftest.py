"""Pytest configuration and fixtures."""

import pytest

from kmc_traffic import (
    EngineKind,
    KernelConfig,
    KernelKind,
    LatticeState,
    SimConfig,
    build_kernel,
)


@pytest.fixture
def sample_state() -> LatticeState:
    """Eight cells, cars on 0, 2, 3 and 7 (identities 0..3 in cell order)."""
    return LatticeState.from_occupancy([1, 0, 1, 1, 0, 0, 0, 1])


@pytest.fixture
def exponential_config() -> SimConfig:
    """Small global-kernel run that finishes in well under a second."""
    return SimConfig(
        n_cells=64,
        density=0.4,
        kernel=KernelConfig(kind=KernelKind.EXPONENTIAL, strength=20.0),
        t_final=20.0,
        seed=11,
    )


@pytest.fixture
def local_config() -> SimConfig:
    """Small run with a short linear look-ahead."""
    return SimConfig(
        n_cells=80,
        density=0.3,
        kernel=KernelConfig(kind=KernelKind.LINEAR, look_ahead=8),
        t_final=20.0,
        seed=5,
    )


@pytest.fixture
def constant_config() -> SimConfig:
    """Constant kernel run on the list-based engine."""
    return SimConfig(
        n_cells=60,
        density=0.3,
        kernel=KernelConfig(kind=KernelKind.CONSTANT, look_ahead=6),
        engine=EngineKind.LIST_BASED,
        t_final=20.0,
        seed=3,
    )


@pytest.fixture
def constant_kernel_8():
    """Constant kernel with L = 3 on eight cells."""
    return build_kernel(KernelConfig(kind=KernelKind.CONSTANT, look_ahead=3), 8)
