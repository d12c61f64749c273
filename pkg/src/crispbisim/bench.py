"""Scaling benchmark over random graphs, comparing the compiled and Python backends.

Each row reports the split participation maximum next to its ceil(log2 n)
bound and the time normalized by (m * max(log2 l, 1) + n) * log2 n, which
should stay roughly flat if the implementation meets its complexity bound.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable

from . import oracle
from .api import kernel_available, run

DEFAULT_SIZES = tuple(2**k for k in range(10, 15))


@dataclass(frozen=True)
class BenchRow:
    n: int
    m: int
    l: int  # noqa: E741
    backend: str
    counting: bool
    seconds: float
    split_calls: int
    max_participation: int
    participation_bound: int
    max_half_ratio: float
    ratio: float

    @property
    def bounds_ok(self) -> bool:
        return self.max_participation <= self.participation_bound and self.max_half_ratio <= 0.5

    def as_dict(self) -> dict:
        return asdict(self) | {"bounds_ok": self.bounds_ok}


def bench(sizes: Iterable[int] = DEFAULT_SIZES, seed: int = 0, density: int = 4, l: int = 8,  # noqa: E741
          labels: int = 1, backends: Iterable[str] | None = None,
          modes: Iterable[bool] = (False, True), repeats: int = 3) -> list[BenchRow]:
    """Run each (size, backend, mode) ``repeats`` times and keep the fastest time."""
    if backends is None:
        backends = ("compiled", "python") if kernel_available() else ("python",)
    backends = tuple(backends)
    modes = tuple(modes)
    rows = []
    for n in sizes:
        m = min(density * n, n * n * labels)
        g = oracle.random_graph(n, m, min(l, 1000), labels, seed + n)
        for counting in modes:
            for backend in backends:
                best = None
                for _ in range(max(1, repeats)):
                    report = run(g, counting=counting, backend=backend)
                    if best is None or report.stats.seconds < best.stats.seconds:
                        best = report
                s = best.stats
                rows.append(BenchRow(n, s.m, s.l, backend, counting, s.seconds, s.split_calls,
                                     s.max_participation, s.participation_bound, s.max_half_ratio,
                                     s.normalized_time))
    return rows


def ratio_spread(rows: list[BenchRow]) -> dict[tuple[str, bool], float]:
    """max/min of the normalized time per (backend, mode), over rows with n > 1."""
    groups: dict[tuple[str, bool], list[float]] = {}
    for row in rows:
        if row.n > 1 and row.ratio > 0:
            groups.setdefault((row.backend, row.counting), []).append(row.ratio)
    return {k: max(v) / min(v) for k, v in groups.items()}


def speedups(rows: list[BenchRow]) -> dict[tuple[int, bool], float]:
    """Python time divided by compiled time, per (n, mode)."""
    times = {(r.n, r.counting, r.backend): r.seconds for r in rows}
    out = {}
    for (n, counting, backend), t in times.items():
        if backend == "compiled" and (n, counting, "python") in times and t > 0:
            out[n, counting] = times[n, counting, "python"] / t
    return out


def format_table(rows: list[BenchRow]) -> str:
    header = f"{'n':>7} {'m':>7} {'l':>3} {'backend':>9} {'mode':>8} {'seconds':>9} " \
             f"{'splits':>7} {'part':>4} {'bound':>5} {'ratio':>10}"
    lines = [header]
    for r in rows:
        mode = "counting" if r.counting else "plain"
        lines.append(f"{r.n:>7} {r.m:>7} {r.l:>3} {r.backend:>9} {mode:>8} {r.seconds:>9.4f} "
                     f"{r.split_calls:>7} {r.max_participation:>4} {r.participation_bound:>5} {r.ratio:>10.3e}")
    return "\n".join(lines)
