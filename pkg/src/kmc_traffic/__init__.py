"""
KMC Traffic - rejection-free kinetic Monte Carlo for look-ahead cellular-automaton traffic.

This package provides:
- A periodic single-lane lattice with J-cell moves and null events
- Constant, linear and exponential look-ahead kernels with Arrhenius, linear
  and quadratic slowdown functions
- Standard, accelerated (incremental) and list-based KMC engines
- Flow and velocity measurement, density sweeps and scaling benchmarks
- Closed-form limiting fluxes used as validation oracles

Example:
    >>> from kmc_traffic import KernelConfig, KernelKind, SimConfig, run_simulation
    >>>
    >>> config = SimConfig(
    ...     n_cells=500,
    ...     density=0.5,
    ...     kernel=KernelConfig(kind=KernelKind.EXPONENTIAL, strength=1e4),
    ...     t_final=600.0,
    ...     seed=7,
    ... )
    >>> summary = run_simulation(config)
    >>> print(f"{summary.flow_per_hour:.0f} cars/h")
"""

from .analytic import (
    STRENGTH_GRID,
    critical_density,
    critical_velocity,
    flux_limit,
    velocity_limit,
)
from .engines import (
    AcceleratedEngine,
    BaseEngine,
    ListBasedEngine,
    StandardEngine,
    create_engine,
    run_simulation,
)
from .exceptions import (
    FrozenSystem,
    InvalidConfiguration,
    KMCTrafficException,
    MeasurementError,
    UnknownCar,
    ValidationFailed,
)
from .kernel import Kernel, build_kernel, kernel_at
from .lattice import LatticeState
from .models import (
    DiagramAggregate,
    DiagramRow,
    EngineKind,
    EventRecord,
    KernelConfig,
    KernelKind,
    LimitKind,
    RateConvention,
    SimConfig,
    SimSummary,
    SlowdownConfig,
    SlowdownKind,
    ValidationReport,
)
from .slowdown import Slowdown, build_slowdown
from .sweep import sweep
from .utils import Timer, get_logger, setup_logging
from .__version__ import __version__, __author__, __email__, __license__

__all__ = [
    # Version info
    "__version__",
    "__author__",
    "__email__",
    "__license__",
    # Engines
    "BaseEngine",
    "StandardEngine",
    "AcceleratedEngine",
    "ListBasedEngine",
    "create_engine",
    "run_simulation",
    "sweep",
    # Building blocks
    "LatticeState",
    "Kernel",
    "kernel_at",
    "build_kernel",
    "Slowdown",
    "build_slowdown",
    # Models
    "SimConfig",
    "KernelConfig",
    "KernelKind",
    "SlowdownConfig",
    "SlowdownKind",
    "EngineKind",
    "RateConvention",
    "LimitKind",
    "EventRecord",
    "SimSummary",
    "DiagramRow",
    "DiagramAggregate",
    "ValidationReport",
    # Oracles
    "flux_limit",
    "velocity_limit",
    "critical_density",
    "critical_velocity",
    "STRENGTH_GRID",
    # Exceptions
    "KMCTrafficException",
    "InvalidConfiguration",
    "UnknownCar",
    "FrozenSystem",
    "MeasurementError",
    "ValidationFailed",
    # Utils
    "setup_logging",
    "get_logger",
    "Timer",
]
