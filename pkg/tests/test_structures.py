from hypothesis import given
from hypothesis import strategies as st

from crispbisim.graph import ZERO, Degree
from crispbisim.structures import Block, BlockEdge, IntrusiveList, Partition, SuperBlock, SuperPartition, WorkVertex


def _vertices(k):
    return [WorkVertex(f"v{i}", i) for i in range(k)]


class TestIntrusiveList:
    def test_append_remove_order(self):
        vs = _vertices(4)
        lst = IntrusiveList()
        for v in vs:
            lst.append(v)
        lst.remove(vs[0])
        lst.remove(vs[2])
        assert [v.vid for v in lst] == ["v1", "v3"]
        assert len(lst) == 2 and lst.head is vs[1] and lst.tail is vs[3]

    def test_move_to(self):
        vs = _vertices(3)
        a, b = IntrusiveList(), IntrusiveList()
        for v in vs:
            a.append(v)
        a.move_to(vs[1], b)
        assert [v.vid for v in a] == ["v0", "v2"]
        assert [v.vid for v in b] == ["v1"]
        assert vs[1].owner is b

    def test_empty(self):
        lst = IntrusiveList()
        v = WorkVertex("x", 0)
        lst.append(v)
        lst.remove(v)
        assert not lst and lst.head is None and lst.tail is None

    @given(st.lists(st.booleans(), max_size=30))
    def test_matches_python_list(self, removals):
        vs = _vertices(len(removals))
        lst = IntrusiveList()
        for v in vs:
            lst.append(v)
        for v, drop in zip(vs, removals):
            if drop:
                lst.remove(v)
        assert [v.vid for v in lst] == [v.vid for v, drop in zip(vs, removals) if not drop]


class TestBlockEdge:
    def test_push_pop_max(self):
        half, one = Degree.parse("0.5"), Degree.parse("1")
        be = BlockEdge()
        assert be.max_key() == ZERO
        be.push_key(half)
        be.push_key(one)
        be.push_key(half)
        assert be.max_key() == one
        assert be.signature() == ((half, 2), (one, 1))
        be.pop_key(one)
        assert be.max_key() == half
        assert be.signature() == ((half, 2),)
        be.pop_key(half)
        be.pop_key(half)
        assert len(be) == 0 and be.max_key() == ZERO and be.signature() == ()

    @given(st.lists(st.integers(1, 10), max_size=40))
    def test_signature_is_sorted_histogram(self, ks):
        be = BlockEdge()
        for k in ks:
            be.push_key(Degree(k))
        expected = tuple((Degree(k), ks.count(k)) for k in sorted(set(ks)))
        assert be.signature() == expected
        assert be.total() == len(ks)


class TestSuperBlock:
    def test_compound_transitions(self):
        vs = _vertices(4)
        P, sp = Partition(), SuperPartition("r")
        sb = SuperBlock(sp, 4)
        assert sb in list(sp.simple)
        lists = [IntrusiveList() for _ in range(2)]
        lists[0].append(vs[0])
        for v in vs[1:]:
            lists[1].append(v)
        b0 = Block(lists[0], P, {"r": sb})
        assert not sb.compound()
        b1 = Block(lists[1], P, {"r": sb})
        assert sb.compound() and sb in list(sp.compound)
        # first block wins ties; here the first is strictly smaller
        assert sb.smaller_block() is b0
        sb.remove_block(b0, "r")
        assert sb in list(sp.simple) and list(sb.iter_blocks()) == [b1]

    def test_smaller_block_tie_returns_first(self):
        vs = _vertices(4)
        P, sp = Partition(), SuperPartition("r")
        sb = SuperBlock(sp, 4)
        l0, l1 = IntrusiveList(), IntrusiveList()
        l0.append(vs[0]); l0.append(vs[1])  # noqa: E702
        l1.append(vs[2]); l1.append(vs[3])  # noqa: E702
        b0 = Block(l0, P, {"r": sb})
        Block(l1, P, {"r": sb})
        assert sb.smaller_block() is b0
