"""Backend selection and the public compute entry points.

The compiled kernel is used when it was built and ``CRISPBISIM_PURE`` is
not set; otherwise the pure-Python engine runs. Tracing and invariant
checking always use the Python engine, which exposes its internal state.
"""

from __future__ import annotations

import math
import os
import time
from array import array
from dataclasses import dataclass

from .engine import CountingEngine, RefinementEngine, Trace
from .graph import FuzzyGraph, PartitionResult
from .invariants import InvariantChecker

try:
    from . import _kernel
except ImportError:  # not built: pure-Python fallback
    _kernel = None

BACKENDS = ("compiled", "python")


def kernel_available() -> bool:
    return _kernel is not None


def default_backend() -> str:
    if _kernel is not None and os.environ.get("CRISPBISIM_PURE", "") in ("", "0"):
        return "compiled"
    return "python"


@dataclass(frozen=True)
class RunStats:
    n: int
    m: int
    l: int  # noqa: E741
    labels: int
    blocks: int
    split_calls: int
    max_participation: int
    max_half_ratio: float
    seconds: float
    backend: str
    counting: bool

    @property
    def participation_bound(self) -> int:
        """ceil(log2 n): the most splits a vertex may join per label."""
        return math.ceil(math.log2(self.n)) if self.n > 1 else 0

    @property
    def normalized_time(self) -> float:
        """seconds / ((m * max(log2 l, 1) + n) * log2 n)."""
        log_n = max(math.log2(self.n), 1.0)
        log_l = max(math.log2(self.l), 1.0) if self.l > 0 else 1.0
        return self.seconds / ((self.m * log_l + self.n) * log_n)


@dataclass(frozen=True)
class RunReport:
    partition: PartitionResult
    stats: RunStats

    def to_json(self) -> dict:
        s = self.stats
        return {
            "partition": self.partition.to_json(),
            "stats": {
                "n": s.n, "m": s.m, "l": s.l, "labels": s.labels, "blocks": s.blocks,
                "split_calls": s.split_calls, "max_participation": s.max_participation,
                "max_half_ratio": s.max_half_ratio, "seconds": s.seconds,
                "backend": s.backend, "counting": s.counting,
            },
        }


def run(graph: FuzzyGraph, *, counting: bool = False, backend: str = "auto",
        trace: Trace | None = None, check_invariants: bool = False) -> RunReport:
    """Compute the partition of the largest (s-)bisimulation together with run statistics."""
    if backend == "auto":
        backend = "python" if (trace or check_invariants) else default_backend()
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "compiled":
        if _kernel is None:
            raise RuntimeError("compiled kernel is not available; rebuild the package")
        if trace is not None or check_invariants:
            raise ValueError("tracing and invariant checks need the python backend")
        return _run_kernel(graph, counting)

    start = time.perf_counter()
    cls = CountingEngine if counting else RefinementEngine
    engine = cls(graph, trace=trace, check=InvariantChecker() if check_invariants else None)
    if check_invariants:
        engine.check(engine)
    partition = engine.run()
    elapsed = time.perf_counter() - start
    st = engine.stats
    return RunReport(partition, RunStats(
        graph.n, graph.m, graph.l, len(graph.edge_labels), len(partition), st.split_calls,
        st.max_participation, st.max_half_ratio, elapsed, "python", counting))


def _run_kernel(graph: FuzzyGraph, counting: bool) -> RunReport:
    start = time.perf_counter()
    label_idx = {r: i for i, r in enumerate(graph.edge_labels)}
    rank = {d: i + 1 for i, d in enumerate(graph.degrees)}
    classes: dict[tuple, int] = {}
    label_class = array("i", (classes.setdefault(graph.label_key(v), len(classes)) for v in graph.vertices))
    edges = graph.edges
    origin = array("i", (graph.index(e.origin) for e in edges))
    label = array("i", (label_idx[e.label] for e in edges))
    dest = array("i", (graph.index(e.dest) for e in edges))
    deg = array("i", (rank[e.degree] for e in edges))
    block_of, st = _kernel.refine(graph.n, len(label_idx), origin, label, dest, deg, label_class, counting)
    if st["half_violations"]:
        raise AssertionError(f"smaller-half rule violated in {st['half_violations']} splits")
    groups: dict[int, list[str]] = {}
    for v, b in zip(graph.vertices, block_of):
        groups.setdefault(b, []).append(v)
    partition = PartitionResult.from_blocks(groups.values())
    elapsed = time.perf_counter() - start
    return RunReport(partition, RunStats(
        graph.n, graph.m, graph.l, len(label_idx), len(partition), st["split_calls"],
        st["max_participation"], st["max_half_ratio"], elapsed, "compiled", counting))


def compute(graph: FuzzyGraph, **kwargs) -> PartitionResult:
    """Partition of V induced by the largest crisp bisimulation of ``graph``."""
    return run(graph, counting=False, **kwargs).partition


def s_compute(graph: FuzzyGraph, **kwargs) -> PartitionResult:
    """Partition of V induced by the largest bisimulation with counting successors."""
    return run(graph, counting=True, **kwargs).partition
