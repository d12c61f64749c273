"""Randomized engine-versus-oracle cross-checking."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator

from . import oracle
from .api import kernel_available, run
from .graph import FuzzyGraph, PartitionResult

Engine = Callable[[FuzzyGraph, bool], PartitionResult]


def corpus(cases: int, seed: int, max_n: int = 12, max_m: int = 40, max_l: int = 6,
           max_labels: int = 2) -> Iterator[FuzzyGraph]:
    """Seeded stream of small random graphs with varied shape parameters."""
    rng = random.Random(seed)
    for _ in range(cases):
        n = rng.randint(1, max_n)
        labels = rng.randint(1, max_labels)
        m = rng.randint(0, min(max_m, n * n * labels))
        l = rng.randint(1, max_l)  # noqa: E741
        label_values = rng.choice((0, 0, 2, 3))
        yield oracle.random_graph(n, m, l, labels, rng.randrange(2**31), label_values)


def default_engines() -> dict[str, Engine]:
    engines: dict[str, Engine] = {
        "python": lambda g, counting: run(g, counting=counting, backend="python").partition,
    }
    if kernel_available():
        engines["compiled"] = lambda g, counting: run(g, counting=counting, backend="compiled").partition
    return engines


@dataclass
class CheckResult:
    cases: int
    passed: int
    counterexample: FuzzyGraph | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def summary(self) -> str:
        status = "ok" if self.ok else "FAILED"
        return f"{self.passed}/{self.cases} {status}"


def run_check(cases: int, seed: int, max_n: int = 10, max_m: int = 40, max_l: int = 6,
              max_labels: int = 2, engines: dict[str, Engine] | None = None) -> CheckResult:
    """Compare every engine with the brute-force oracles in both settings; stop at the first mismatch."""
    engines = engines if engines is not None else default_engines()
    passed = 0
    for g in corpus(cases, seed, max_n, max_m, max_l, max_labels):
        expected = {False: oracle.naive_largest_bisimulation(g),
                    True: oracle.naive_largest_s_bisimulation(g)}
        for name, engine in engines.items():
            for counting, want in expected.items():
                got = engine(g, counting)
                if got != want:
                    mode = "counting" if counting else "plain"
                    detail = f"{name} ({mode}): got {got.to_json()}, oracle {want.to_json()}"
                    return CheckResult(cases, passed, g, detail)
        passed += 1
    return CheckResult(cases, passed)
