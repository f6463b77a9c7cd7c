from .accelerated import AcceleratedEngine
from .base import BaseEngine, Step
from .factory import ENGINES, create_engine, run_simulation
from .list_based import ListBasedEngine, ListTable, select_event_listbased
from .standard import StandardEngine

__all__ = [
    "BaseEngine",
    "Step",
    "StandardEngine",
    "AcceleratedEngine",
    "ListBasedEngine",
    "ListTable",
    "select_event_listbased",
    "ENGINES",
    "create_engine",
    "run_simulation",
]
