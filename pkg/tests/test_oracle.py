import itertools
import random

import pytest

from crispbisim import GraphFormatError, PartitionResult, parse_graph
from crispbisim import oracle


def test_identity_is_bisimulation(example1):
    assert oracle.is_bisimulation(example1, oracle.identity(example1))
    assert oracle.is_s_bisimulation(example1, oracle.identity(example1))


def test_empty_relation_is_not(example1):
    assert not oracle.is_bisimulation(example1, set())
    assert not oracle.is_s_bisimulation(example1, set())


def test_example1_largest(example1):
    want = PartitionResult.from_blocks(["ab", "cfg", "de"])
    assert oracle.naive_largest_bisimulation(example1) == want
    assert oracle.is_bisimulation(example1, want.relation())
    assert oracle.is_stable(example1, want)
    assert oracle.breaks_on_augmentation(example1, want)


def test_initial_partition_not_stable(example1):
    p0 = oracle.initial_partition(example1)
    assert p0 == PartitionResult.from_blocks(["abcfg", "de"])
    assert not oracle.is_stable(example1, p0)


def test_plain_result_is_not_s_stable(example1):
    plain = PartitionResult.from_blocks(["ab", "cfg", "de"])
    assert not oracle.is_s_stable(example1, plain)
    assert not oracle.is_s_bisimulation(example1, plain.relation())


def test_s_bisimulation_needs_matching():
    # x has two 1-successors, w has one: a plain bisimulation but not a counting one
    g = parse_graph("v x\nv w\nv y1\nv y2\ne x r y1 1\ne x r y2 1\ne w r y1 1\n")
    Z = {("x", "w"), ("w", "x"), ("y1", "y2"), ("y2", "y1")} | oracle.identity(g)
    assert oracle.is_bisimulation(g, Z)
    assert not oracle.is_s_bisimulation(g, Z)


def test_naive_order_independent():
    for seed in range(60):
        g = oracle.random_graph(8, 20, 3, 2, seed, 2)
        assert oracle.naive_largest_bisimulation(g) == oracle.naive_largest_bisimulation(g, reverse=True)
        assert oracle.naive_largest_s_bisimulation(g) == oracle.naive_largest_s_bisimulation(g, reverse=True)


def test_relational_coarsest_on_crisp_graph():
    g = parse_graph("v a\nv b\nv c\nv d\ne a r b 1\ne c r d 1\ne b r b 1\n")
    # a and b both reach only b; c reaches the sink d
    assert oracle.naive_relational_coarsest_partition(g) == PartitionResult.from_blocks(["ab", "c", "d"])
    assert oracle.naive_largest_bisimulation(g) == oracle.naive_relational_coarsest_partition(g)


def _all_bisimulations(g):
    pairs = [(x, y) for x in g.vertices for y in g.vertices]
    for k in range(1, len(pairs) + 1):
        for Z in itertools.combinations(pairs, k):
            if oracle.is_bisimulation(g, Z):
                yield set(Z)


def test_closure_exhaustive_small():
    for seed in range(6):
        g = oracle.random_graph(2 if seed % 2 else 3, 4, 2, 1, seed)
        found = list(_all_bisimulations(g)) if g.n == 2 else list(itertools.islice(_all_bisimulations(g), 40))
        assert found
        for Z1 in found:
            for Z2 in found[:10]:
                assert oracle.closure_properties_check(g, Z1, Z2)


def test_closure_randomized():
    rng = random.Random(7)
    for seed in range(40):
        n = rng.randint(2, 6)
        g = oracle.random_graph(n, rng.randint(0, min(15, 2 * n * n)), 3, 2, seed)
        largest = oracle.naive_largest_bisimulation(g).relation()
        found = []
        for _ in range(20):
            Z = {p for p in largest if rng.random() < 0.7}
            if oracle.is_bisimulation(g, Z):
                found.append(Z)
        found.append(largest)
        for Z1, Z2 in itertools.product(found[:5], repeat=2):
            assert oracle.closure_properties_check(g, Z1, Z2)


def test_closure_examples(example1):
    ident = oracle.identity(example1)
    largest = oracle.naive_largest_bisimulation(example1).relation()
    assert oracle.closure_properties_check(example1, ident, ident)
    assert oracle.closure_properties_check(example1, largest, ident)


def test_empty_composition_is_vacuous():
    g = parse_graph("v a\nv b\n")
    Z1, Z2 = {("a", "a")}, {("b", "b")}
    assert oracle.compose(Z1, Z2) == set()
    assert oracle.closure_properties_check(g, Z1, Z2)


def test_closure_rejects_non_bisimulation(example1):
    with pytest.raises(ValueError):
        oracle.closure_properties_check(example1, {("a", "d")}, oracle.identity(example1))


class TestRandomGraph:
    def test_deterministic(self):
        a = oracle.random_graph(20, 60, 4, 2, 9, 3)
        b = oracle.random_graph(20, 60, 4, 2, 9, 3)
        assert a.to_text() == b.to_text()
        assert oracle.random_graph(20, 60, 4, 2, 10).to_text() != a.to_text()

    def test_shape(self):
        g = oracle.random_graph(20, 60, 4, 2, 1)
        assert (g.n, g.m) == (20, 60)
        assert g.l <= 5  # pool of 4 plus 0
        assert parse_graph(g.to_text()) == g

    def test_dense(self):
        g = oracle.random_graph(3, 18, 2, 2, 0)
        assert g.m == 18

    @pytest.mark.parametrize("args", [(0, 0, 1, 1), (3, 10, 1, 1), (3, 1, 0, 1), (3, -1, 1, 1)])
    def test_rejects(self, args):
        with pytest.raises(GraphFormatError):
            oracle.random_graph(*args, seed=0)
