"""Brute-force reference implementations, definition-level checkers and a graph generator.

Nothing here shares code with the engines beyond the graph model; these
functions are deliberately direct and slow.
"""

from __future__ import annotations

import random
from typing import Callable, Hashable, Iterable

from .graph import DEGREE_SCALE, ONE, Degree, Edge, FuzzyGraph, GraphFormatError, PartitionResult, count_at_degree, sup_degree

Relation = set[tuple[str, str]]


# -- bisimulation conditions ------------------------------------------------------


def is_bisimulation(g: FuzzyGraph, Z: Iterable[tuple[str, str]]) -> bool:
    Z = set(Z)
    if not Z:
        return False
    for x, x2 in Z:
        if g.label(x) != g.label(x2):
            return False
        for r in g.edge_labels:
            if not _dominated(g.successors(x, r), g.successors(x2, r), Z, forward=True):
                return False
            if not _dominated(g.successors(x2, r), g.successors(x, r), Z, forward=False):
                return False
    return True


def _dominated(succ: dict, other: dict, Z: Relation, forward: bool) -> bool:
    # every edge in succ must be matched by a Z-related edge in other of at least its degree
    for y, d in succ.items():
        if not any(((y, y2) if forward else (y2, y)) in Z and d <= d2 for y2, d2 in other.items()):
            return False
    return True


def is_s_bisimulation(g: FuzzyGraph, Z: Iterable[tuple[str, str]]) -> bool:
    Z = set(Z)
    if not Z:
        return False
    for x, x2 in Z:
        if g.label(x) != g.label(x2):
            return False
        for r in g.edge_labels:
            left = g.successors(x, r)
            right = g.successors(x2, r)
            if len(left) != len(right):
                return False
            adj = {y: [y2 for y2, d2 in right.items() if d2 == d and (y, y2) in Z] for y, d in left.items()}
            if _max_matching(adj) != len(left):
                return False
    return True


def _max_matching(adj: dict[Hashable, list[Hashable]]) -> int:
    """Maximum bipartite matching size by repeated augmenting-path search."""
    match: dict[Hashable, Hashable] = {}

    def augment(u, seen: set) -> bool:
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match or augment(match[v], seen):
                match[v] = u
                return True
        return False

    return sum(1 for u in adj if augment(u, set()))


# -- stability ---------------------------------------------------------------------


def is_stable(g: FuzzyGraph, P: PartitionResult) -> bool:
    blocks = [set(b) for b in P]
    for X in P:
        for Y in blocks:
            for r in g.edge_labels:
                if len({sup_degree(g, x, r, Y) for x in X}) > 1:
                    return False
    return True


def is_s_stable(g: FuzzyGraph, P: PartitionResult) -> bool:
    blocks = [set(b) for b in P]
    for X in P:
        for Y in blocks:
            for r in g.edge_labels:
                for d in g.degrees:
                    if len({count_at_degree(g, x, r, d, Y) for x in X}) > 1:
                        return False
    return True


# -- naive fixpoint refinement --------------------------------------------------------


def initial_partition(g: FuzzyGraph) -> PartitionResult:
    """Vertices grouped by label and by supremum toward V for every edge label."""
    V = set(g.vertices)
    return PartitionResult.from_assignment(
        {x: (g.label_key(x), tuple(sup_degree(g, x, r, V) for r in g.edge_labels)) for x in g.vertices})


def initial_s_partition(g: FuzzyGraph) -> PartitionResult:
    """Vertices grouped by label and by full degree histogram toward V."""
    V = set(g.vertices)
    return PartitionResult.from_assignment(
        {x: (g.label_key(x), _histograms(g, x, V)) for x in g.vertices})


def _histograms(g: FuzzyGraph, x: str, Y: set[str]) -> tuple:
    return tuple(tuple(count_at_degree(g, x, r, d, Y) for d in g.degrees) for r in g.edge_labels)


def _refine(g: FuzzyGraph, start: PartitionResult,
            signature: Callable[[str, set[str]], Hashable], reverse: bool = False) -> PartitionResult:
    blocks = [list(b) for b in start]
    while True:
        order = list(reversed(blocks)) if reverse else list(blocks)
        for splitter in order:
            Y = set(splitter)
            new_blocks = []
            for X in blocks:
                groups: dict[Hashable, list[str]] = {}
                for x in X:
                    groups.setdefault(signature(x, Y), []).append(x)
                new_blocks.extend(groups.values())
            if len(new_blocks) != len(blocks):
                blocks = new_blocks
                break
        else:
            return PartitionResult.from_blocks(blocks)


def naive_largest_bisimulation(g: FuzzyGraph, reverse: bool = False) -> PartitionResult:
    """Coarsest stable refinement of the initial partition by plain fixpoint iteration.

    ``reverse`` picks splitters from the other end of the block list, which
    changes the refinement path but must not change the result.
    """
    return _refine(g, initial_partition(g),
                   lambda x, Y: tuple(sup_degree(g, x, r, Y) for r in g.edge_labels), reverse)


def naive_largest_s_bisimulation(g: FuzzyGraph, reverse: bool = False) -> PartitionResult:
    return _refine(g, initial_s_partition(g), lambda x, Y: _histograms(g, x, Y), reverse)


def naive_relational_coarsest_partition(g: FuzzyGraph) -> PartitionResult:
    """Classical relational coarsest partition, reading every positive edge as present.

    Blocks are split by whether a vertex has some r-successor in the
    splitter; degrees are never inspected. Agrees with the fuzzy notion on
    crisp graphs only.
    """
    pre = {(y, r): {e.origin for e in g.incoming(y, r)} for y in g.vertices for r in g.edge_labels}
    blocks = [set(b) for b in PartitionResult.from_assignment({x: g.label_key(x) for x in g.vertices})]
    changed = True
    while changed:
        changed = False
        for B in list(blocks):
            for r in g.edge_labels:
                reach = set().union(*(pre[y, r] for y in B))
                new_blocks = []
                for X in blocks:
                    inside, outside = X & reach, X - reach
                    new_blocks.extend(part for part in (inside, outside) if part)
                if len(new_blocks) != len(blocks):
                    blocks = new_blocks
                    changed = True
    return PartitionResult.from_blocks(blocks)


# -- relation algebra ---------------------------------------------------------------


def identity(g: FuzzyGraph) -> Relation:
    return {(x, x) for x in g.vertices}


def inverse(Z: Relation) -> Relation:
    return {(b, a) for a, b in Z}


def compose(Z1: Relation, Z2: Relation) -> Relation:
    """{(x, z) : Z1(x, y) and Z2(y, z) for some y}."""
    forward: dict[str, list[str]] = {}
    for y, z in Z2:
        forward.setdefault(y, []).append(z)
    return {(x, z) for x, y in Z1 for z in forward.get(y, ())}


def closure_properties_check(g: FuzzyGraph, Z1: Relation, Z2: Relation) -> bool:
    """Inverse, composition and union of two bisimulations are again bisimulations.

    Bisimulations are nonempty by definition, yet two of them can compose to
    the empty relation (e.g. disjoint parts of the identity). An empty
    composition is therefore accepted as vacuous rather than counted as a failure.
    """
    Z1, Z2 = set(Z1), set(Z2)
    if not (is_bisimulation(g, Z1) and is_bisimulation(g, Z2)):
        raise ValueError("closure_properties_check needs two bisimulations")
    Z12 = compose(Z1, Z2)
    return (is_bisimulation(g, inverse(Z1))
            and (not Z12 or is_bisimulation(g, Z12))
            and is_bisimulation(g, Z1 | Z2))


def breaks_on_augmentation(g: FuzzyGraph, P: PartitionResult) -> bool:
    """True if adding any single cross-block pair to P's relation breaks bisimulation."""
    Z = P.relation()
    owner = P.block_of()
    for x in g.vertices:
        for y in g.vertices:
            if owner[x] != owner[y] and is_bisimulation(g, Z | {(x, y)}):
                return False
    return True


# -- random graphs --------------------------------------------------------------------


def random_graph(n: int, m: int, l: int, labels: int, seed: int,
                 vertex_label_values: int = 0) -> FuzzyGraph:
    """Reproducible random fuzzy graph.

    Vertices are ``v0 .. v{n-1}``, edge labels ``r0 ..``. Degrees come from
    a pool of ``l`` values that always contains 1. With
    ``vertex_label_values > 0`` every vertex gets symbol ``p`` at one of that
    many degrees (possibly 0).
    """
    if n < 1:
        raise GraphFormatError("random_graph needs n >= 1")
    if l < 1 or labels < 1:
        raise GraphFormatError("random_graph needs l >= 1 and labels >= 1")
    if m < 0 or m > n * n * labels:
        raise GraphFormatError(f"m={m} infeasible: at most n^2*labels = {n * n * labels} edges")
    if l > 1000:
        raise GraphFormatError("degree pool limited to 1000 values")
    rng = random.Random(seed)
    pool = [ONE] + [Degree.from_fraction(k, 1000) for k in sorted(rng.sample(range(1, 1000), l - 1))]
    names = [f"v{i}" for i in range(n)]
    edge_labels = [f"r{i}" for i in range(labels)]

    total = n * n * labels
    if m * 3 > total:
        slots = rng.sample(range(total), m)
    else:
        chosen: set[int] = set()
        slots = []
        while len(slots) < m:
            s = rng.randrange(total)
            if s not in chosen:
                chosen.add(s)
                slots.append(s)
    edges = []
    for s in slots:
        s, y = divmod(s, n)
        x, r = divmod(s, labels)
        edges.append(Edge(names[x], edge_labels[r], names[y], rng.choice(pool)))

    vertex_labels = {}
    if vertex_label_values > 0:
        values = [Degree(k * DEGREE_SCALE // vertex_label_values) for k in range(vertex_label_values)]
        vertex_labels = {v: {"p": rng.choice(values)} for v in names}
    return FuzzyGraph(names, edges, vertex_labels)
