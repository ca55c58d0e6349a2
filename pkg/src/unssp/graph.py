"""Directed graphs with integer arc costs, the text file format, and arc masks.

Vertices are numbered ``1..n`` and arcs ``1..m`` in file order.  Arc ids are
stable handles, so parallel arcs are distinguished by id everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .errors import GraphParseError, MaskError, ValidationError

INT64_MAX = 2**63 - 1


class Graph:
    """Immutable directed graph with a designated source and sink.

    Per-arc data live in lists indexed by arc id (slot 0 unused) so that the
    hot loops in the solvers can index them directly.
    """

    __slots__ = ("n", "m", "source", "sink", "tails", "heads", "costs", "out_adj", "in_adj")

    def __init__(
        self,
        n: int,
        arcs: Sequence[tuple[int, int, int]],
        source: int,
        sink: int,
    ) -> None:
        if n < 1:
            raise ValidationError("graph needs at least one vertex")
        for v in (source, sink):
            if not 1 <= v <= n:
                raise ValidationError(f"vertex {v} out of range 1..{n}")
        if source == sink:
            raise ValidationError("source and sink must differ")
        tails = [0]
        heads = [0]
        costs = [0]
        out_adj: list[list[int]] = [[] for _ in range(n + 1)]
        in_adj: list[list[int]] = [[] for _ in range(n + 1)]
        for aid, (u, v, c) in enumerate(arcs, start=1):
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValidationError(f"arc {aid} ({u},{v}) has an endpoint outside 1..{n}")
            if not isinstance(c, int) or c < 0:
                raise ValidationError(f"arc {aid} has invalid cost {c!r}")
            if c > INT64_MAX:
                raise ValidationError(f"arc {aid} cost exceeds the 64-bit range")
            tails.append(u)
            heads.append(v)
            costs.append(c)
            out_adj[u].append(aid)
            in_adj[v].append(aid)
        self.n = n
        self.m = len(arcs)
        self.source = source
        self.sink = sink
        self.tails = tuple(tails)
        self.heads = tuple(heads)
        self.costs = tuple(costs)
        self.out_adj = tuple(tuple(a) for a in out_adj)
        self.in_adj = tuple(tuple(a) for a in in_adj)

    def arc(self, aid: int) -> tuple[int, int, int]:
        return self.tails[aid], self.heads[aid], self.costs[aid]

    def arcs(self) -> list[tuple[int, int, int]]:
        return [self.arc(aid) for aid in range(1, self.m + 1)]

    def arc_ids(self) -> range:
        return range(1, self.m + 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.source == other.source
            and self.sink == other.sink
            and self.arcs() == other.arcs()
        )

    def __hash__(self) -> int:
        return hash((self.n, self.source, self.sink, tuple(self.arcs())))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, source={self.source}, sink={self.sink})"


def inverse(g: Graph) -> Graph:
    """Reverse every arc and swap source and sink; arc ids are kept."""
    return Graph(g.n, [(v, u, c) for u, v, c in g.arcs()], g.sink, g.source)


def parse_graph(text: str) -> Graph:
    """Parse the line-oriented ``p unssp`` graph format."""
    header: tuple[int, int] | None = None
    source: int | None = None
    sink: int | None = None
    arcs: list[tuple[int, int, int]] = []

    def ints(fields: list[str], lineno: int) -> list[int]:
        try:
            return [int(f) for f in fields]
        except ValueError:
            raise GraphParseError(f"expected integers, got {' '.join(fields)!r}", lineno) from None

    def vertex(v: int, lineno: int) -> int:
        assert header is not None
        if not 1 <= v <= header[0]:
            raise GraphParseError(f"vertex id {v} out of range 1..{header[0]}", lineno)
        return v

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind = fields[0]
        if header is None and kind != "p":
            raise GraphParseError("the 'p unssp <n> <m>' header must come first", lineno)
        if kind == "p":
            if header is not None:
                raise GraphParseError("duplicate header", lineno)
            if len(fields) != 4 or fields[1] != "unssp":
                raise GraphParseError("malformed header, expected 'p unssp <n> <m>'", lineno)
            n, m = ints(fields[2:], lineno)
            if n < 1 or m < 0:
                raise GraphParseError("header needs n >= 1 and m >= 0", lineno)
            header = (n, m)
        elif kind in ("s", "t"):
            if len(fields) != 2:
                raise GraphParseError(f"malformed '{kind}' line", lineno)
            (v,) = ints(fields[1:], lineno)
            v = vertex(v, lineno)
            if kind == "s":
                if source is not None:
                    raise GraphParseError("duplicate source line", lineno)
                source = v
            else:
                if sink is not None:
                    raise GraphParseError("duplicate sink line", lineno)
                sink = v
            if source is not None and source == sink:
                raise GraphParseError("source and sink must differ", lineno)
        elif kind == "a":
            if len(fields) != 4:
                raise GraphParseError("malformed arc line, expected 'a <tail> <head> <cost>'", lineno)
            u, v, c = ints(fields[1:], lineno)
            vertex(u, lineno)
            vertex(v, lineno)
            if c < 0:
                raise GraphParseError(f"negative cost {c}", lineno)
            if c > INT64_MAX:
                raise GraphParseError("cost exceeds the 64-bit range", lineno)
            arcs.append((u, v, c))
        else:
            raise GraphParseError(f"unknown line type {kind!r}", lineno)

    if header is None:
        raise GraphParseError("missing 'p unssp <n> <m>' header")
    if source is None or sink is None:
        raise GraphParseError("missing source or sink line")
    if len(arcs) != header[1]:
        raise GraphParseError(f"arc count mismatch: header declares {header[1]}, found {len(arcs)}")
    return Graph(header[0], arcs, source, sink)


def read_graph(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def serialize(g: Graph) -> str:
    lines = [f"p unssp {g.n} {g.m}", f"s {g.source}", f"t {g.sink}"]
    lines.extend(f"a {u} {v} {c}" for u, v, c in g.arcs())
    return "\n".join(lines) + "\n"


class ArcMask:
    """Reversible removal of arcs from a base graph, keyed by arc id.

    Removal state is a per-arc generation stamp, so :meth:`clear` is O(1).
    """

    __slots__ = ("graph", "_stamp", "_generation", "_count")

    def __init__(self, graph: Graph) -> None:
        self.graph = graph
        self._stamp = [0] * (graph.m + 1)
        self._generation = 1
        self._count = 0

    def is_removed(self, aid: int) -> bool:
        return self._stamp[aid] == self._generation

    def removed(self) -> set[int]:
        gen = self._generation
        return {aid for aid in range(1, self.graph.m + 1) if self._stamp[aid] == gen}

    def __len__(self) -> int:
        return self._count

    def push(self, arc_ids: Iterable[int]) -> None:
        """Remove ``arc_ids``; every id must currently be present."""
        ids = list(arc_ids)
        gen = self._generation
        for aid in ids:
            if self._stamp[aid] == gen:
                raise MaskError(f"arc {aid} is already removed")
        for aid in ids:
            self._stamp[aid] = gen
        self._count += len(ids)

    def pop(self, arc_ids: Iterable[int]) -> None:
        """Restore ``arc_ids``; every id must currently be removed."""
        ids = list(arc_ids)
        gen = self._generation
        for aid in ids:
            if self._stamp[aid] != gen:
                raise MaskError(f"arc {aid} is not removed")
        for aid in ids:
            self._stamp[aid] = 0
        self._count -= len(ids)

    def clear(self) -> None:
        self._generation += 1
        self._count = 0

    def out_arcs(self, u: int) -> list[int]:
        gen = self._generation
        return [aid for aid in self.graph.out_adj[u] if self._stamp[aid] != gen]

    def in_arcs(self, v: int) -> list[int]:
        gen = self._generation
        return [aid for aid in self.graph.in_adj[v] if self._stamp[aid] != gen]

    def present_flags(self) -> list[bool]:
        """Per-arc presence (index 0 unused), for tight solver loops."""
        gen = self._generation
        return [s != gen for s in self._stamp]


def present_flags(g: Graph, mask: ArcMask | None) -> list[bool]:
    if mask is None:
        return [True] * (g.m + 1)
    return mask.present_flags()


@dataclass(frozen=True)
class Path:
    """A directed path given by arc ids, anchored at ``start`` when empty."""

    arc_ids: tuple[int, ...]
    vertices: tuple[int, ...]

    @classmethod
    def from_arcs(cls, g: Graph, arc_ids: Sequence[int], start: int | None = None) -> Path:
        arc_ids = tuple(arc_ids)
        if not arc_ids:
            if start is None:
                raise ValueError("an empty path needs an explicit start vertex")
            return cls((), (start,))
        vertices = [g.tails[arc_ids[0]]]
        if start is not None and vertices[0] != start:
            raise ValueError(f"path starts at {vertices[0]}, expected {start}")
        for aid in arc_ids:
            if g.tails[aid] != vertices[-1]:
                raise ValueError(f"arc {aid} does not continue the path at vertex {vertices[-1]}")
            vertices.append(g.heads[aid])
        return cls(arc_ids, tuple(vertices))

    @property
    def hops(self) -> int:
        return len(self.arc_ids)

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def is_simple(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def pred(self, u: int) -> int | None:
        """Vertex preceding ``u`` on the path; ``None`` for the first vertex."""
        i = self.vertices.index(u)
        return self.vertices[i - 1] if i > 0 else None

    def pred_arc(self, u: int) -> int | None:
        i = self.vertices.index(u)
        return self.arc_ids[i - 1] if i > 0 else None

    def costs(self, g: Graph) -> list[int]:
        return [g.costs[aid] for aid in self.arc_ids]

    def cost_key(self, g: Graph) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Vertex sequence plus sorted cost multiset; equal for parallel-arc twins of equal cost."""
        return self.vertices, tuple(sorted(self.costs(g)))

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "arc_ids": list(self.arc_ids)}


def remove_cycles(g: Graph, arc_ids: Sequence[int], start: int) -> list[int]:
    """Drop closed sub-walks so that the result visits every vertex at most once."""
    out: list[int] = []
    pos = {start: 0}
    stack_vertices = [start]
    for aid in arc_ids:
        v = g.heads[aid]
        if v in pos:
            cut = pos[v]
            for w in stack_vertices[cut + 1 :]:
                del pos[w]
            del stack_vertices[cut + 1 :]
            del out[cut:]
        else:
            out.append(aid)
            pos[v] = len(stack_vertices)
            stack_vertices.append(v)
    return out


def iter_simple_paths(
    g: Graph,
    source: int,
    target: int,
    present: Sequence[bool] | None = None,
    prune: Callable[[list[int]], bool] | None = None,
) -> Iterator[list[int]]:
    """All simple ``source``-``target`` paths as arc-id lists, in lexicographic arc-id order.

    ``prune(arcs)`` is called on every candidate extension (including complete
    paths); returning true discards it together with all its extensions.
    """
    if source == target:
        yield []
        return
    on_path = [False] * (g.n + 1)
    on_path[source] = True
    arcs: list[int] = []
    out_adj = g.out_adj
    heads = g.heads
    stack = [iter(out_adj[source])]
    while stack:
        for aid in stack[-1]:
            if present is not None and not present[aid]:
                continue
            v = heads[aid]
            if on_path[v]:
                continue
            arcs.append(aid)
            if prune is not None and prune(arcs):
                arcs.pop()
                continue
            if v == target:
                yield list(arcs)
                arcs.pop()
                continue
            on_path[v] = True
            stack.append(iter(out_adj[v]))
            break
        else:
            stack.pop()
            if arcs:
                on_path[heads[arcs.pop()]] = False
