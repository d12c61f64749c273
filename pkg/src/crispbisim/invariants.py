"""Full structural checks of a refinement engine between split calls.

Intended for small graphs: every check recomputes from the graph, so a
call costs far more than the split it follows.
"""

from __future__ import annotations

from collections import Counter

from .engine import RefinementEngine
from .graph import PartitionResult, count_at_degree, sup_degree


class InvariantViolation(AssertionError):
    pass


class InvariantChecker:
    """Callable passed as ``check=`` to an engine; raises on the first violation.

    ``target`` is the known final partition (from an oracle). When given,
    each check also confirms that it still refines the working partition.
    """

    def __init__(self, target: PartitionResult | None = None):
        self.target = target
        self.calls = 0
        self._last_block_count = 0
        self._last_q: dict[str, int] = {}

    def __call__(self, engine: RefinementEngine) -> None:
        self.calls += 1
        check_structure(engine)
        check_block_edges(engine)
        check_refinement_invariants(engine)
        if self.target is not None and not self.target.refines(engine.partition()):
            _fail("target partition no longer refines P")
        n_blocks = engine.P.size()
        if n_blocks < self._last_block_count:
            raise InvariantViolation("number of blocks decreased")
        self._last_block_count = n_blocks
        for r, sp in engine.Q.items():
            count = sum(1 for _ in sp.super_blocks())
            if count < self._last_q.get(r, 0):
                raise InvariantViolation(f"Q[{r}] got coarser")
            self._last_q[r] = count


def _fail(msg: str) -> None:
    raise InvariantViolation(msg)


def check_structure(engine: RefinementEngine) -> None:
    """Membership links, auxiliary-state cleanup and list placement of super-blocks."""
    seen = set()
    for b in engine.P:
        if not b.vertices:
            _fail(f"empty block {b.bid}")
        if b.departing1 or b.departing2 or b.departing:
            _fail(f"block {b.bid} has leftover departing lists")
        for x in b.vertices:
            if x.block is not b or x.owner is not b.vertices:
                _fail(f"vertex {x.vid} has stale block link")
            if x.processed:
                _fail(f"vertex {x.vid} still marked processed")
            if x.vid in seen:
                _fail(f"vertex {x.vid} in two blocks")
            seen.add(x.vid)
        for r in engine.labels:
            sb = b.super_blocks[r]
            if b.slots[r].owner is not sb.blocks:
                _fail(f"block {b.bid} not listed in its super-block for {r}")
    if len(seen) != engine.graph.n:
        _fail("blocks do not cover V")

    for r, sp in engine.Q.items():
        total = 0
        for lst, want in ((sp.compound, True), (sp.simple, False)):
            for sb in lst:
                if sb.compound() != want:
                    _fail(f"super-block of {r} sits in the wrong list")
                if sb.owner is not lst:
                    _fail("super-block owner link is stale")
                size = 0
                for b in sb.iter_blocks():
                    if b.super_blocks[r] is not sb:
                        _fail(f"block {b.bid} disagrees about its super-block for {r}")
                    size += len(b)
                if size != sb.vertex_count:
                    _fail(f"super-block vertex count {sb.vertex_count} != {size}")
                total += size
        if total != engine.graph.n:
            _fail(f"Q[{r}] does not cover V")


def check_block_edges(engine: RefinementEngine) -> None:
    """Every block-edge equals a fresh recount of the edges it summarizes."""
    sb_of = {}
    for r, sp in engine.Q.items():
        for sb in sp.super_blocks():
            for v in sb.vertex_ids():
                sb_of[v, r] = sb
    groups: dict[tuple, list] = {}
    for e in engine.edges:
        be = e.block_edge
        if be.departing is not None or be.source is not None:
            _fail("stale departing/source link on a block-edge")
        if be.counts.get(e.degree, 0) < 1:
            _fail(f"block-edge of {e.origin.vid}-{e.label}->{e.dest.vid} lacks its degree")
        groups.setdefault((e.origin.vid, e.label, id(sb_of[e.dest.vid, e.label])), []).append(e)
    for (x, r, _), edges in groups.items():
        objs = {id(e.block_edge) for e in edges}
        if len(objs) != 1:
            _fail(f"edges from {x} into one super-block use different block-edges")
        expected = Counter(e.degree for e in edges)
        if dict(expected) != edges[0].block_edge.counts:
            _fail(f"block-edge recount mismatch for {x},{r}")
        if sorted(expected) != edges[0].block_edge.keys:
            _fail(f"block-edge key order broken for {x},{r}")


def check_refinement_invariants(engine: RefinementEngine) -> None:
    """P refines P0 and every Q[r], and P is (s-)stable w.r.t. every super-block."""
    g = engine.graph
    P = engine.partition()
    initial = engine.initial_block
    for b in P:
        if len({initial[v] for v in b}) != 1:
            _fail("P does not refine the initial partition")
    for r in engine.labels:
        Qr = engine.super_partition(r)
        if not P.refines(Qr):
            _fail(f"P does not refine Q[{r}]")
        for B in Qr:
            Bset = set(B)
            for X in P:
                if engine.counting:
                    sigs = {tuple(count_at_degree(g, x, r, d, Bset) for d in g.degrees) for x in X}
                else:
                    sigs = {sup_degree(g, x, r, Bset) for x in X}
                if len(sigs) > 1:
                    _fail(f"block {X} unstable w.r.t. super-block {B} of {r}")
