import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crispbisim import Degree, InitEvent, RefinementEngine, SplitEvent, compute, parse_graph
from crispbisim import oracle
from crispbisim.invariants import InvariantChecker

from .conftest import blocks

ONE, HALF = Degree.parse("1"), Degree.parse("0.5")


def first_split(engine, r="r"):
    """Select (Y, Y') exactly as the main loop would for the first split on r."""
    Y = engine.Q[r].compound.head
    Yp = Y.smaller_block()
    return Y, Yp, list(Yp.vertices)


def block_sets(engine):
    return {frozenset(v.vid for v in b.vertices) for b in engine.P}


class TestInitialization:
    def test_example1_p0(self, example1):
        eng = RefinementEngine(example1)
        assert block_sets(eng) == blocks("abcfg", "de")
        assert eng.partition() == oracle.initial_partition(example1)

    def test_three_cycle_single_block(self):
        g = parse_graph("v a\nv b\nv c\ne a r b 1\ne b r c 1\ne c r a 1\n")
        eng = RefinementEngine(g)
        assert block_sets(eng) == blocks("abc")
        assert compute(g).blocks == (("a", "b", "c"),)

    def test_edgeless_graph_short_circuits(self):
        g = parse_graph("v a\nv b\nv c\n")
        eng = RefinementEngine(g)
        assert eng.run().blocks == (("a", "b", "c"),)
        assert eng.stats.split_calls == 0


class TestSplitPhases:
    def test_compute_block_edges_example1(self, example1):
        eng = RefinementEngine(example1)
        Y, Yp, vy = first_split(eng)
        assert {v.vid for v in vy} == {"d", "e"}
        a = eng.vertices[example1.index("a")]
        bE = eng.block_edges[a.index, "r"]
        assert bE.signature() == ((Degree.parse("0.7"), 1), (ONE, 2))
        eng.compute_block_edges(vy, "r")
        assert bE.signature() == ((ONE, 1),)
        assert bE.departing.signature() == ((Degree.parse("0.7"), 1), (ONE, 1))
        assert bE.departing.source is bE

    def test_compute_subblocks_example1(self, example1):
        eng = RefinementEngine(example1)
        Y, Yp, vy = first_split(eng)
        eng.compute_block_edges(vy, "r")
        eng.compute_subblocks(vy, "r")
        big = eng.vertices[example1.index("c")].block
        assert {v.vid for v in big.vertices} == {"c", "f", "g"}
        assert set(big.departing2) == {ONE} and not big.departing1
        assert {v.vid for v in big.departing2[ONE]} == {"a", "b"}
        eng.do_splitting(Yp, vy, Y, "r")
        eng.clear_auxiliary_info(vy, "r")
        assert block_sets(eng) == blocks("cfg", "ab", "de")
        InvariantChecker()(eng)

    def test_parallel_degrees_accumulate(self):
        g = parse_graph("v y1 p:1\nv y2 p:1\nv z\nv z2\nv x\ne x r y1 0.5\ne x r y2 0.5\ne x r z 1\n")
        eng = RefinementEngine(g)
        Y, Yp, vy = first_split(eng)
        assert {v.vid for v in vy} == {"y1", "y2"}
        eng.compute_block_edges(vy, "r")
        x = eng.vertices[g.index("x")]
        bE = eng.block_edges[x.index, "r"]
        assert bE.departing.signature() == ((HALF, 2),)
        assert bE.signature() == ((ONE, 1),)

    def test_vertex_with_two_edges_moves_once(self):
        # x and w share a block; x has two edges into Y' = {y1, y2}
        g = parse_graph("v y1 p:1\nv y2 p:1\nv z1\nv z2\nv x\nv w\n"
                        "e x r y1 0.5\ne x r y2 0.5\ne w r z1 0.5\n")
        eng = RefinementEngine(g)
        Y, Yp, vy = first_split(eng)
        assert {v.vid for v in vy} == {"y1", "y2"}
        eng.compute_block_edges(vy, "r")
        eng.compute_subblocks(vy, "r")
        bx = eng.vertices[g.index("w")].block
        moved = [v.vid for lst in (*bx.departing1.values(), *bx.departing2.values()) for v in lst]
        assert moved == ["x"]
        eng.do_splitting(Yp, vy, Y, "r")
        eng.clear_auxiliary_info(vy, "r")
        assert not any(v.processed for v in eng.vertices)
        InvariantChecker()(eng)

    def test_drained_block_reuses_a_subblock(self):
        # both x1 and x2 leave their block, into departing1[0.5] and departing2[0.5]
        g = parse_graph("v y p:1\nv z\nv x1\nv x2\n"
                        "e x1 r y 1\ne x1 r z 0.5\ne x2 r y 0.5\ne x2 r z 1\n")
        eng = RefinementEngine(g)
        assert block_sets(eng) == blocks("y", "z", ["x1", "x2"])
        Y, Yp, vy = first_split(eng)
        assert [v.vid for v in vy] == ["y"]
        bx = eng.vertices[g.index("x1")].block
        before = eng.P.size()
        eng.compute_block_edges(vy, "r")
        eng.compute_subblocks(vy, "r")
        assert not bx.vertices
        lists = len(bx.departing1) + len(bx.departing2)
        assert lists == 2
        eng.do_splitting(Yp, vy, Y, "r")
        eng.clear_auxiliary_info(vy, "r")
        assert eng.P.size() - before == lists - 1
        assert all(len(b.vertices) > 0 for b in eng.P)
        assert {v.vid for v in bx.vertices} == {"x1"}
        InvariantChecker()(eng)

    def test_no_stale_links_between_splits(self, example1):
        seen = []

        def check(eng):
            for bE in eng.block_edges.values():
                assert bE.departing is None and bE.source is None
            for e in eng.edges:
                assert e.block_edge.departing is None and e.block_edge.source is None
            seen.append(eng.stats.split_calls)

        RefinementEngine(example1, check=check).run()
        assert len(seen) >= 2


class TestTrace:
    def test_example1_trace(self, example1):
        events = []
        eng = RefinementEngine(example1, trace=lambda e, ev: events.append((ev, e.partition())))
        result = eng.run()
        init, p0 = events[0]
        assert isinstance(init, InitEvent) and init.blocks == 2
        first, p = events[1]
        assert isinstance(first, SplitEvent)
        assert (first.y_prime_size, first.y_size, first.incoming) == (2, 7, 3)
        assert set(map(frozenset, p)) == blocks("ab", "cfg", "de")
        assert result.blocks == (("a", "b"), ("c", "f", "g"), ("d", "e"))

    def test_every_split_respects_half_rule(self):
        g = oracle.random_graph(30, 90, 4, 2, seed=5)

        def trace(eng, ev):
            if isinstance(ev, SplitEvent):
                assert ev.y_prime_size <= ev.y_size / 2

        RefinementEngine(g, trace=trace).run()

    def test_work_bounded_by_log_charges(self):
        # each (y, r) is charged at most ceil(log2 n) times, so total split work is bounded
        g = oracle.random_graph(64, 256, 5, 2, seed=11)
        work = []

        def trace(eng, ev):
            if isinstance(ev, SplitEvent):
                work.append(ev.y_prime_size + ev.incoming)

        eng = RefinementEngine(g, trace=trace)
        eng.run()
        bound = math.ceil(math.log2(g.n)) * (g.n * len(g.edge_labels) + g.m)
        assert sum(work) <= bound
        assert eng.stats.max_participation <= eng.participation_bound()


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 9), st.integers(0, 40), st.integers(1, 5), st.integers(1, 2), st.integers(0, 10**6),
       st.sampled_from([0, 2, 3]))
def test_matches_oracle(n, m, l, labels, seed, vl):  # noqa: E741
    m = min(m, n * n * labels)
    g = oracle.random_graph(n, m, l, labels, seed, vl)
    eng = RefinementEngine(g, check=InvariantChecker(oracle.naive_largest_bisimulation(g)))
    got = eng.run()
    assert got == oracle.naive_largest_bisimulation(g)
    assert oracle.is_stable(g, got)


def test_half_rule_is_enforced():
    g = parse_graph("v a\nv b\nv c p:1\ne a r c 1\ne b r c 1\n")
    eng = RefinementEngine(g)
    Y = eng.Q["r"].compound.head
    big = max(Y.iter_blocks(), key=len)
    with pytest.raises(AssertionError, match="smaller-half"):
        eng.split(big, Y, "r")
