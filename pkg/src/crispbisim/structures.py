"""Mutable data structures of the refinement engine.

Everything here is intrusive: list members carry their own ``prev``/``next``
/``owner`` slots so that removal and moves between lists are O(1).
"""

from __future__ import annotations

from bisect import bisect_left, insort
from typing import Iterator

from .graph import ZERO, Degree


class IntrusiveList:
    """Doubly linked list over nodes exposing ``prev``, ``next`` and ``owner``."""

    __slots__ = ("head", "tail", "size")

    def __init__(self):
        self.head = None
        self.tail = None
        self.size = 0

    def append(self, node) -> None:
        node.owner = self
        node.next = None
        node.prev = self.tail
        if self.tail is None:
            self.head = node
        else:
            self.tail.next = node
        self.tail = node
        self.size += 1

    def remove(self, node) -> None:
        if node.owner is not self:
            raise ValueError("node is not a member of this list")
        if node.prev is None:
            self.head = node.next
        else:
            node.prev.next = node.next
        if node.next is None:
            self.tail = node.prev
        else:
            node.next.prev = node.prev
        node.prev = node.next = node.owner = None
        self.size -= 1

    def move_to(self, node, other: "IntrusiveList") -> None:
        self.remove(node)
        other.append(node)

    def __iter__(self) -> Iterator:
        node = self.head
        while node is not None:
            nxt = node.next
            yield node
            node = nxt

    def __len__(self) -> int:
        return self.size

    def __bool__(self) -> bool:
        return self.size > 0

    def __repr__(self) -> str:
        return f"IntrusiveList({list(self)!r})"


class WorkVertex:
    __slots__ = ("vid", "index", "block", "coming_edges", "processed", "prev", "next", "owner")

    def __init__(self, vid: str, index: int):
        self.vid = vid
        self.index = index
        self.block: Block | None = None
        self.coming_edges: list[WorkEdge] = []
        self.processed = False
        self.prev = self.next = self.owner = None

    def __repr__(self) -> str:
        return self.vid


class WorkEdge:
    __slots__ = ("label", "origin", "dest", "degree", "block_edge")

    def __init__(self, label: str, origin: WorkVertex, dest: WorkVertex, degree: Degree,
                 block_edge: "BlockEdge | None" = None):
        self.label = label
        self.origin = origin
        self.dest = dest
        self.degree = degree
        self.block_edge = block_edge
        dest.coming_edges.append(self)


class BlockEdge:
    """Ordered degree -> count map for the r-edges from one vertex into one super-block.

    Keys are kept in a sorted list beside the count dict; ``max_key`` is the
    last key. The signature (sorted ``(degree, count)`` pairs) is cached
    until the next ``push_key``/``pop_key``.
    """

    __slots__ = ("counts", "keys", "departing", "source", "_signature")

    def __init__(self, source: "BlockEdge | None" = None):
        self.counts: dict[Degree, int] = {}
        self.keys: list[Degree] = []
        self.departing: BlockEdge | None = None
        self.source = source
        self._signature = None

    def push_key(self, d: Degree) -> None:
        c = self.counts.get(d)
        if c is None:
            self.counts[d] = 1
            insort(self.keys, d)
        else:
            self.counts[d] = c + 1
        self._signature = None

    def pop_key(self, d: Degree) -> None:
        c = self.counts[d]
        if c == 1:
            del self.counts[d]
            del self.keys[bisect_left(self.keys, d)]
        else:
            self.counts[d] = c - 1
        self._signature = None

    def max_key(self) -> Degree:
        return self.keys[-1] if self.keys else ZERO

    def signature(self) -> tuple[tuple[Degree, int], ...]:
        sig = self._signature
        if sig is None:
            counts = self.counts
            sig = self._signature = tuple((k, counts[k]) for k in self.keys)
        return sig

    def __len__(self) -> int:
        return len(self.keys)

    def total(self) -> int:
        return sum(self.counts.values())

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}:{c}" for k, c in self.signature())
        return f"BlockEdge({{{inner}}})"


class _Slot:
    """Membership node placing a block inside one super-block's block list."""

    __slots__ = ("block", "prev", "next", "owner")

    def __init__(self, block: "Block"):
        self.block = block
        self.prev = self.next = self.owner = None


class Block:
    __slots__ = (
        "bid", "vertices", "partition", "super_blocks", "slots",
        "departing1", "departing2", "departing",
    )

    def __init__(self, vertices: IntrusiveList, partition: "Partition",
                 super_blocks: dict[str, "SuperBlock"] | None):
        self.vertices = vertices
        self.partition = partition
        self.bid = partition.add(self)
        self.super_blocks: dict[str, SuperBlock] = {}
        self.slots: dict[str, _Slot] = {}
        self.departing1: dict[Degree, IntrusiveList] = {}
        self.departing2: dict[Degree, IntrusiveList] = {}
        self.departing: dict[tuple, IntrusiveList] = {}
        for x in vertices:
            x.block = self
        if super_blocks is not None:
            for r, sb in super_blocks.items():
                self.super_blocks[r] = sb
                sb.add_block(self, r)

    @staticmethod
    def create_block(vl: IntrusiveList) -> "Block":
        bx = vl.head.block
        return Block(vl, bx.partition, bx.super_blocks)

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"Block#{self.bid}{[v.vid for v in self.vertices]}"


class SuperBlock:
    __slots__ = ("blocks", "super_partition", "vertex_count", "prev", "next", "owner")

    def __init__(self, super_partition: "SuperPartition", vertex_count: int = 0):
        self.blocks = IntrusiveList()
        self.super_partition = super_partition
        # kept explicitly: member blocks split in place without changing it
        self.vertex_count = vertex_count
        self.prev = self.next = self.owner = None
        super_partition.add_super_block(self)

    def size(self) -> int:
        return self.blocks.size

    def compound(self) -> bool:
        return self.blocks.size > 1

    def smaller_block(self) -> Block:
        first = self.blocks.head.block
        second = self.blocks.head.next.block
        return second if len(second) < len(first) else first

    def add_block(self, b: Block, r: str) -> None:
        slot = _Slot(b)
        b.slots[r] = slot
        self.blocks.append(slot)
        if self.blocks.size == 2:
            sp = self.super_partition
            sp.simple.move_to(self, sp.compound)

    def remove_block(self, b: Block, r: str) -> None:
        self.blocks.remove(b.slots.pop(r))
        if self.blocks.size == 1:
            sp = self.super_partition
            sp.compound.move_to(self, sp.simple)

    def iter_blocks(self) -> Iterator[Block]:
        for slot in self.blocks:
            yield slot.block

    def vertex_ids(self) -> list[str]:
        return [v.vid for b in self.iter_blocks() for v in b.vertices]

    @staticmethod
    def create_super_block(sp: "SuperPartition", b: Block, r: str, vertex_count: int) -> "SuperBlock":
        # b.vertices may be partly drained mid-split, so the caller supplies |b|
        sb = SuperBlock(sp, vertex_count)
        sb.add_block(b, r)
        b.super_blocks[r] = sb
        return sb

    def __repr__(self) -> str:
        return f"SuperBlock({[b.bid for b in self.iter_blocks()]})"


class SuperPartition:
    __slots__ = ("label", "compound", "simple")

    def __init__(self, label: str):
        self.label = label
        self.compound = IntrusiveList()
        self.simple = IntrusiveList()

    def add_super_block(self, sb: SuperBlock) -> None:
        (self.compound if sb.compound() else self.simple).append(sb)

    def super_blocks(self) -> Iterator[SuperBlock]:
        yield from self.compound
        yield from self.simple


class Partition:
    """The working partition: every block ever created, in creation order."""

    __slots__ = ("blocks",)

    def __init__(self):
        self.blocks: list[Block] = []

    def add(self, b: Block) -> int:
        self.blocks.append(b)
        return len(self.blocks) - 1

    def size(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[Block]:
        return iter(self.blocks)
