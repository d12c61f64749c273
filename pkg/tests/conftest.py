from pathlib import Path

import pytest

from crispbisim import parse_graph

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def example1():
    return parse_graph((DATA / "example1.graph").read_text())


@pytest.fixture(scope="session")
def example1_path():
    return DATA / "example1.graph"


def blocks(*groups: str):
    """Shorthand: blocks("ab", "cfg") -> set of frozensets over single-letter ids."""
    return {frozenset(g) for g in groups}
