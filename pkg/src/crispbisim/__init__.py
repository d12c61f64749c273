"""Largest crisp bisimulations of finite fuzzy labeled graphs by partition refinement."""

from .api import RunReport, RunStats, compute, default_backend, kernel_available, run, s_compute
from .engine import CountingEngine, InitEvent, RefinementEngine, SplitEvent
from .graph import (
    Degree,
    Edge,
    FuzzyGraph,
    GraphFormatError,
    PartitionResult,
    count_at_degree,
    parse_graph,
    sup_degree,
)

__all__ = [
    "CountingEngine",
    "Degree",
    "Edge",
    "FuzzyGraph",
    "GraphFormatError",
    "InitEvent",
    "PartitionResult",
    "RefinementEngine",
    "RunReport",
    "RunStats",
    "SplitEvent",
    "compute",
    "count_at_degree",
    "default_backend",
    "kernel_available",
    "parse_graph",
    "run",
    "s_compute",
    "sup_degree",
]
