"""Finite fuzzy labeled graphs: exact degrees, parsing, serialization and queries."""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple

DEGREE_DIGITS = 9
DEGREE_SCALE = 10**DEGREE_DIGITS


class GraphFormatError(ValueError):
    """Raised for malformed or inconsistent graph input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Degree(int):
    """A membership degree in [0, 1], held exactly as a count of 1e-9 units.

    Being an ``int`` keeps equality, hashing and ordering exact and cheap;
    ``Degree.parse("0.7") == Degree.parse("0.70")`` always holds.
    """

    __slots__ = ()

    def __new__(cls, units: int = 0):
        if not 0 <= units <= DEGREE_SCALE:
            raise ValueError(f"degree units out of range: {units}")
        return super().__new__(cls, units)

    @classmethod
    def parse(cls, text: str) -> "Degree":
        try:
            value = decimal.Decimal(text)
        except decimal.InvalidOperation:
            raise ValueError(f"not a decimal degree: {text!r}") from None
        if not value.is_finite():
            raise ValueError(f"not a decimal degree: {text!r}")
        if value < 0 or value > 1:
            raise ValueError(f"degree outside [0,1]: {text}")
        scaled = value.scaleb(DEGREE_DIGITS)
        if scaled != scaled.to_integral_value():
            raise ValueError(f"degree has more than {DEGREE_DIGITS} fractional digits: {text}")
        return cls(int(scaled))

    @classmethod
    def from_fraction(cls, numerator: int, denominator: int) -> "Degree":
        units, rem = divmod(numerator * DEGREE_SCALE, denominator)
        if rem:
            raise ValueError(f"{numerator}/{denominator} is not exactly representable")
        return cls(units)

    def __str__(self) -> str:
        whole, frac = divmod(int(self), DEGREE_SCALE)
        if not frac:
            return str(whole)
        return f"{whole}.{frac:0{DEGREE_DIGITS}d}".rstrip("0")

    def __repr__(self) -> str:
        return f"Degree('{self}')"

    def __float__(self) -> float:
        return int(self) / DEGREE_SCALE


ZERO = Degree(0)
ONE = Degree(DEGREE_SCALE)


class Edge(NamedTuple):
    origin: str
    label: str
    dest: str
    degree: Degree


class FuzzyGraph:
    """Immutable fuzzy labeled graph with forward and predecessor indexes.

    Only edges with a positive degree are stored; at most one edge exists
    per (origin, label, dest). Vertex labels are normalized so that absent
    symbols and symbols with degree 0 are indistinguishable.
    """

    __slots__ = (
        "_vertices", "_index", "_labels", "_edges", "_edge_labels",
        "_out", "_incoming", "_degrees",
    )

    def __init__(
        self,
        vertices: Iterable[str],
        edges: Iterable[Edge | tuple] = (),
        vertex_labels: Mapping[str, Mapping[str, Degree]] | None = None,
    ):
        verts = tuple(vertices)
        if not verts:
            raise GraphFormatError("graph has no vertices")
        index: dict[str, int] = {}
        for v in verts:
            if v in index:
                raise GraphFormatError(f"duplicate vertex {v!r}")
            index[v] = len(index)
        vertex_labels = vertex_labels or {}
        for v in vertex_labels:
            if v not in index:
                raise GraphFormatError(f"label given for unknown vertex {v!r}")
        labels = {}
        for v in verts:
            assignment = {s: Degree(d) for s, d in vertex_labels.get(v, {}).items() if d}
            labels[v] = MappingProxyType(dict(sorted(assignment.items())))

        out: dict[tuple[str, str], dict[str, Degree]] = {}
        incoming: dict[tuple[str, str], list[Edge]] = {}
        stored = []
        for raw in edges:
            e = Edge(raw[0], raw[1], raw[2], raw[3])
            if e.origin not in index:
                raise GraphFormatError(f"edge references unknown vertex {e.origin!r}")
            if e.dest not in index:
                raise GraphFormatError(f"edge references unknown vertex {e.dest!r}")
            degree = e.degree if isinstance(e.degree, Degree) else Degree(e.degree)
            if degree == 0:
                raise GraphFormatError(f"zero-degree edge {e.origin} {e.label} {e.dest}")
            targets = out.setdefault((e.origin, e.label), {})
            if e.dest in targets:
                raise GraphFormatError(f"duplicate edge {e.origin} {e.label} {e.dest}")
            targets[e.dest] = degree
            e = e._replace(degree=degree)
            stored.append(e)
            incoming.setdefault((e.dest, e.label), []).append(e)

        self._vertices = verts
        self._index = index
        self._labels = labels
        self._edges = tuple(stored)
        self._edge_labels = tuple(sorted({e.label for e in stored}))
        self._out = out
        self._incoming = {k: tuple(v) for k, v in incoming.items()}
        self._degrees = tuple(sorted({e.degree for e in stored}))

    # -- basic accessors -------------------------------------------------

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def edge_labels(self) -> tuple[str, ...]:
        """Edge labels occurring in the graph, sorted."""
        return self._edge_labels

    @property
    def degrees(self) -> tuple[Degree, ...]:
        """Distinct positive edge degrees, ascending."""
        return self._degrees

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def l(self) -> int:  # noqa: E743
        return len(self._degrees)

    def index(self, v: str) -> int:
        return self._index[v]

    def __contains__(self, v: object) -> bool:
        return v in self._index

    def label(self, v: str) -> Mapping[str, Degree]:
        return self._labels[v]

    def label_key(self, v: str) -> tuple[tuple[str, Degree], ...]:
        """Hashable form of L(v); equal keys iff equal fuzzy labels."""
        return tuple(self._labels[v].items())

    def degree(self, x: str, r: str, y: str) -> Degree:
        return self._out.get((x, r), {}).get(y, ZERO)

    def successors(self, x: str, r: str) -> Mapping[str, Degree]:
        """Positive r-successors of x mapped to their edge degrees."""
        return self._out.get((x, r), {})

    def incoming(self, y: str, r: str) -> tuple[Edge, ...]:
        return self._incoming.get((y, r), ())

    def incoming_all(self, y: str) -> Iterator[Edge]:
        for r in self._edge_labels:
            yield from self._incoming.get((y, r), ())

    # -- equality / text ---------------------------------------------------

    def _canonical(self):
        return (
            self._vertices,
            tuple(self.label_key(v) for v in self._vertices),
            tuple(sorted(self._edges)),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FuzzyGraph):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self) -> int:
        return hash(self._canonical())

    def __repr__(self) -> str:
        return f"<FuzzyGraph n={self.n} m={self.m} l={self.l} labels={list(self._edge_labels)}>"

    def to_text(self) -> str:
        lines = []
        for v in self._vertices:
            parts = ["v", v] + [f"{s}:{d}" for s, d in self._labels[v].items()]
            lines.append(" ".join(parts))
        for e in self._edges:
            lines.append(f"e {e.origin} {e.label} {e.dest} {e.degree}")
        return "\n".join(lines) + "\n"


def parse_graph(text: str | Iterable[str]) -> FuzzyGraph:
    """Parse the line-oriented graph format.

    ``v <id> [<symbol>:<degree> ...]`` declares a vertex, ``e <origin>
    <label> <dest> <degree>`` an edge. ``#`` starts a comment. Vertices must
    be declared before edges use them.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    vertices: list[str] = []
    labels: dict[str, dict[str, Degree]] = {}
    edges: list[Edge] = []
    seen_edges: set[tuple[str, str, str]] = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind = fields[0]
        if kind == "v":
            if len(fields) < 2:
                raise GraphFormatError("vertex line needs an id", lineno)
            vid = fields[1]
            if vid in labels:
                raise GraphFormatError(f"vertex {vid!r} declared twice", lineno)
            assignment: dict[str, Degree] = {}
            for item in fields[2:]:
                symbol, sep, value = item.rpartition(":")
                if not sep or not symbol:
                    raise GraphFormatError(f"bad label item {item!r}, expected symbol:degree", lineno)
                if symbol in assignment:
                    raise GraphFormatError(f"label symbol {symbol!r} repeated", lineno)
                assignment[symbol] = _parse_degree(value, lineno)
            vertices.append(vid)
            labels[vid] = assignment
        elif kind == "e":
            if len(fields) != 5:
                raise GraphFormatError("edge line must be: e <origin> <label> <dest> <degree>", lineno)
            _, origin, label, dest, value = fields
            for v in (origin, dest):
                if v not in labels:
                    raise GraphFormatError(f"edge references unknown vertex {v!r}", lineno)
            degree = _parse_degree(value, lineno)
            if degree == 0:
                raise GraphFormatError("edges with degree 0 are not allowed", lineno)
            if (origin, label, dest) in seen_edges:
                raise GraphFormatError(f"duplicate edge {origin} {label} {dest}", lineno)
            seen_edges.add((origin, label, dest))
            edges.append(Edge(origin, label, dest, degree))
        else:
            raise GraphFormatError(f"unknown line kind {kind!r}", lineno)
    if not vertices:
        raise GraphFormatError("graph has no vertices")
    return FuzzyGraph(vertices, edges, labels)


def _parse_degree(value: str, lineno: int) -> Degree:
    try:
        return Degree.parse(value)
    except ValueError as exc:
        raise GraphFormatError(str(exc), lineno) from None


def sup_degree(g: FuzzyGraph, x: str, r: str, ys: Iterable[str]) -> Degree:
    """Supremum of E(x, r, y) over y in ``ys``; 0 for an empty supremum."""
    succ = g.successors(x, r)
    ys = ys if isinstance(ys, (set, frozenset)) else set(ys)
    best = ZERO
    if len(succ) <= len(ys):
        for y, d in succ.items():
            if d > best and y in ys:
                best = d
    else:
        for y in ys:
            d = succ.get(y, ZERO)
            if d > best:
                best = d
    return best


def count_at_degree(g: FuzzyGraph, x: str, r: str, d: Degree, ys: Iterable[str]) -> int:
    """Number of y in ``ys`` with E(x, r, y) == d (d must be positive)."""
    if d <= 0:
        raise ValueError("count_at_degree needs a positive degree")
    succ = g.successors(x, r)
    return sum(1 for y in set(ys) if succ.get(y) == d)


@dataclass(frozen=True)
class PartitionResult:
    """A partition of vertex ids in canonical form.

    Each block is a sorted tuple and blocks are ordered by their first
    element, so equal partitions compare and serialize identically.
    """

    blocks: tuple[tuple[str, ...], ...]

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[str]]) -> "PartitionResult":
        canon = sorted(tuple(sorted(b)) for b in blocks)
        if any(not b for b in canon):
            raise ValueError("partition blocks must be nonempty")
        return cls(tuple(canon))

    @classmethod
    def from_assignment(cls, assignment: Mapping[str, object]) -> "PartitionResult":
        groups: dict[object, list[str]] = {}
        for v, key in assignment.items():
            groups.setdefault(key, []).append(v)
        return cls.from_blocks(groups.values())

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[tuple[str, ...]]:
        return iter(self.blocks)

    def block_of(self) -> dict[str, int]:
        return {v: i for i, b in enumerate(self.blocks) for v in b}

    def as_sets(self) -> set[frozenset[str]]:
        return {frozenset(b) for b in self.blocks}

    def relation(self) -> set[tuple[str, str]]:
        """The equivalence relation whose classes are the blocks."""
        return {(x, y) for b in self.blocks for x in b for y in b}

    def refines(self, other: "PartitionResult") -> bool:
        owner = other.block_of()
        return all(len({owner[v] for v in b}) == 1 for b in self.blocks)

    def to_text(self) -> str:
        return "".join(" ".join(b) + "\n" for b in self.blocks)

    def to_json(self) -> list[list[str]]:
        return [list(b) for b in self.blocks]
