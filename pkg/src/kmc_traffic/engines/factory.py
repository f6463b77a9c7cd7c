"""Factory for creating KMC engines."""

from typing import Dict, Optional, Type

from ..lattice import LatticeState
from ..models import EngineKind, SimConfig, SimSummary
from ..utils import UniformStream
from .accelerated import AcceleratedEngine
from .base import BaseEngine
from .list_based import ListBasedEngine
from .standard import StandardEngine

ENGINES: Dict[EngineKind, Type[BaseEngine]] = {
    EngineKind.STANDARD: StandardEngine,
    EngineKind.ACCELERATED: AcceleratedEngine,
    EngineKind.LIST_BASED: ListBasedEngine,
}


def create_engine(
    config: SimConfig,
    state: Optional[LatticeState] = None,
    stream: Optional[UniformStream] = None,
) -> BaseEngine:
    """Create an engine from configuration.

    Args:
        config: Simulation configuration; config.engine picks the variant
        state: Optional initial lattice (copied by the caller if it is shared)
        stream: Optional random stream

    Returns:
        Configured engine instance
    """
    try:
        engine_cls = ENGINES[config.engine]
    except KeyError:
        raise ValueError(f"Unsupported engine kind: {config.engine}") from None
    return engine_cls(config, state=state, stream=stream)


def run_simulation(config: SimConfig) -> SimSummary:
    """Build the configured engine and run it to completion."""
    return create_engine(config).run()
