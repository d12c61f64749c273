"""Pure-Python partition-refinement engine for the largest crisp bisimulation.

``RefinementEngine`` keeps the working partition P of blocks and, per edge
label r, a super-partition Q[r] whose blocks are unions of blocks of P.
Each split processes the smaller of two blocks inside a compound
super-block, walking only the edges that enter it. ``CountingEngine``
swaps in the counting-successors initialization and subblock keying.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

from .graph import FuzzyGraph, PartitionResult
from .structures import Block, BlockEdge, IntrusiveList, Partition, SuperBlock, SuperPartition, WorkEdge, WorkVertex


@dataclass(frozen=True)
class InitEvent:
    blocks: int


@dataclass(frozen=True)
class SplitEvent:
    index: int
    label: str
    y_prime_size: int
    y_size: int
    incoming: int
    blocks_created: int
    blocks_total: int


Trace = Callable[["RefinementEngine", "InitEvent | SplitEvent"], None]


@dataclass
class EngineStats:
    split_calls: int = 0
    blocks_created: int = 0
    max_participation: int = 0
    max_half_ratio: float = 0.0
    participation: Counter = field(default_factory=Counter)


class RefinementEngine:
    counting = False

    def __init__(self, graph: FuzzyGraph, trace: Trace | None = None,
                 check: Callable[["RefinementEngine"], None] | None = None):
        self.graph = graph
        self.trace = trace
        self.check = check
        self.stats = EngineStats()
        self.initialize()

    # -- initialization ----------------------------------------------------

    def initialize(self) -> None:
        g = self.graph
        self.labels = g.edge_labels
        self.vertices = [WorkVertex(v, i) for i, v in enumerate(g.vertices)]
        by_id = {v.vid: v for v in self.vertices}
        self.edges = [WorkEdge(e.label, by_id[e.origin], by_id[e.dest], e.degree) for e in g.edges]

        self.P = Partition()
        self.Q: dict[str, SuperPartition] = {}
        msb: dict[str, SuperBlock] = {}
        for r in self.labels:
            self.Q[r] = SuperPartition(r)
            msb[r] = SuperBlock(self.Q[r], g.n)

        self.block_edges = {(x.index, r): BlockEdge() for x in self.vertices for r in self.labels}
        for e in self.edges:
            e.block_edge = self.block_edges[e.origin.index, e.label]
            e.block_edge.push_key(e.degree)

        groups: dict[tuple, IntrusiveList] = {}
        for x in self.vertices:
            key = self.initial_key(x)
            vl = groups.get(key)
            if vl is None:
                vl = groups[key] = IntrusiveList()
            vl.append(x)
        for vl in groups.values():
            Block(vl, self.P, msb)
        self.initial_block = {x.vid: x.block.bid for x in self.vertices}
        if self.trace is not None:
            self.trace(self, InitEvent(self.P.size()))

    def initial_key(self, x: WorkVertex) -> tuple:
        """Grouping key for P0: vertex label plus the supremum toward V per label."""
        return (self.graph.label_key(x.vid),
                tuple(self.block_edges[x.index, r].max_key() for r in self.labels))

    # -- main loop ---------------------------------------------------------

    def run(self) -> PartitionResult:
        if self.P.size() == 1:
            return self.partition()
        changed = True
        while changed:
            changed = False
            for r in self.labels:
                compound = self.Q[r].compound
                while compound:
                    Y = compound.head
                    Yp = Y.smaller_block()
                    self.split(Yp, Y, r)
                    changed = True
        return self.partition()

    def split(self, Yp: Block, Y: SuperBlock, r: str) -> None:
        vertices_yp = list(Yp.vertices)
        stats = self.stats
        before = self.P.size()
        ratio = len(vertices_yp) / Y.vertex_count
        if ratio > 0.5:
            raise AssertionError(f"smaller-half rule violated: |Y'|={len(vertices_yp)} |Y|={Y.vertex_count}")
        stats.max_half_ratio = max(stats.max_half_ratio, ratio)
        part = stats.participation
        for y in vertices_yp:
            key = (y.index, r)
            part[key] += 1
            if part[key] > stats.max_participation:
                stats.max_participation = part[key]
        y_size = Y.vertex_count

        self.compute_block_edges(vertices_yp, r)
        self.compute_subblocks(vertices_yp, r)
        self.do_splitting(Yp, vertices_yp, Y, r)
        self.clear_auxiliary_info(vertices_yp, r)

        stats.split_calls += 1
        created = self.P.size() - before
        stats.blocks_created += created
        if self.trace is not None:
            incoming = sum(1 for y in vertices_yp for e in y.coming_edges if e.label == r)
            self.trace(self, SplitEvent(stats.split_calls, r, len(vertices_yp), y_size,
                                        incoming, created, self.P.size()))
        if self.check is not None:
            self.check(self)

    # -- the four split phases ------------------------------------------------

    def compute_block_edges(self, vertices_yp: list[WorkVertex], r: str) -> None:
        for y in vertices_yp:
            for e in y.coming_edges:
                if e.label != r:
                    continue
                bE = e.block_edge
                dbE = bE.departing
                if dbE is None:
                    dbE = bE.departing = BlockEdge(bE)
                bE.pop_key(e.degree)
                dbE.push_key(e.degree)

    def compute_subblocks(self, vertices_yp: list[WorkVertex], r: str) -> None:
        for y in vertices_yp:
            for e in y.coming_edges:
                if e.label != r:
                    continue
                x = e.origin
                if x.processed:
                    continue
                bx = x.block
                bE = e.block_edge
                d1 = bE.max_key()
                d2 = bE.departing.max_key()
                if d1 >= d2:
                    target = bx.departing2.get(d2)
                    if target is None:
                        target = bx.departing2[d2] = IntrusiveList()
                else:
                    target = bx.departing1.get(d1)
                    if target is None:
                        target = bx.departing1[d1] = IntrusiveList()
                bx.vertices.move_to(x, target)
                x.processed = True

    def do_splitting(self, Yp: Block, vertices_yp: list[WorkVertex], Y: SuperBlock, r: str) -> None:
        Y.remove_block(Yp, r)
        Y.vertex_count -= len(vertices_yp)
        SuperBlock.create_super_block(Y.super_partition, Yp, r, len(vertices_yp))

        for y in vertices_yp:
            for e in y.coming_edges:
                if e.label != r:
                    continue
                e.block_edge = e.block_edge.departing
                bx = e.origin.block
                if not (bx.departing1 or bx.departing2):
                    continue
                if not bx.vertices:
                    pool = bx.departing1 if bx.departing1 else bx.departing2
                    d = min(pool)
                    bx.vertices = pool.pop(d)
                for d in sorted(bx.departing1):
                    Block.create_block(bx.departing1[d])
                for d in sorted(bx.departing2):
                    Block.create_block(bx.departing2[d])
                bx.departing1.clear()
                bx.departing2.clear()

    def clear_auxiliary_info(self, vertices_yp: list[WorkVertex], r: str) -> None:
        for y in vertices_yp:
            for e in y.coming_edges:
                if e.label != r:
                    continue
                e.origin.processed = False
                bE = e.block_edge
                sbE = bE.source
                if sbE is not None:
                    sbE.departing = None
                    bE.source = None

    # -- views -----------------------------------------------------------------

    def partition(self) -> PartitionResult:
        return PartitionResult.from_blocks([v.vid for v in b.vertices] for b in self.P)

    def super_partition(self, r: str) -> PartitionResult:
        return PartitionResult.from_blocks(sb.vertex_ids() for sb in self.Q[r].super_blocks())

    def participation_bound(self) -> int:
        return max(1, math.ceil(math.log2(self.graph.n))) if self.graph.n > 1 else 0


class CountingEngine(RefinementEngine):
    """Engine for bisimulation with counting successors."""

    counting = True

    def initial_key(self, x: WorkVertex) -> tuple:
        return (self.graph.label_key(x.vid),
                tuple(self.block_edges[x.index, r].signature() for r in self.labels))

    def compute_subblocks(self, vertices_yp: list[WorkVertex], r: str) -> None:
        for y in vertices_yp:
            for e in y.coming_edges:
                if e.label != r:
                    continue
                x = e.origin
                if x.processed:
                    continue
                bx = x.block
                key = e.block_edge.signature()
                target = bx.departing.get(key)
                if target is None:
                    target = bx.departing[key] = IntrusiveList()
                bx.vertices.move_to(x, target)
                x.processed = True

    def do_splitting(self, Yp: Block, vertices_yp: list[WorkVertex], Y: SuperBlock, r: str) -> None:
        Y.remove_block(Yp, r)
        Y.vertex_count -= len(vertices_yp)
        SuperBlock.create_super_block(Y.super_partition, Yp, r, len(vertices_yp))

        for y in vertices_yp:
            for e in y.coming_edges:
                if e.label != r:
                    continue
                e.block_edge = e.block_edge.departing
                bx = e.origin.block
                if not bx.departing:
                    continue
                if not bx.vertices:
                    key = min(bx.departing)
                    bx.vertices = bx.departing.pop(key)
                for key in sorted(bx.departing):
                    Block.create_block(bx.departing[key])
                bx.departing.clear()
