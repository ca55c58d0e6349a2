"""Enumeration of all simple s-t paths whose universal value is within ``(1 + eps)`` of optimal.

Two pruned depth-first schemes are provided, :func:`enumerate_alg1` (extend a
prefix arc by arc while its best masked completion stays within the bound) and
:func:`enumerate_alg2` (deviate from the last emitted path using consumed-arc
lists), together with :func:`enumerate_brute` as a reference oracle.  All
three are iterative, so stack depth stays O(n) however many paths there are.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import ValidationError
from .graph import ArcMask, Graph, Path, iter_simple_paths
from .objective import SUM, Bound, Lambda, value_of_costs
from .solvers import all_distances_to_sink, check_size_gate, solve

DEFAULT_MAX_PATHS = 1_000_000


class _Stop(Exception):
    pass


class PathSink:
    """Receives ``(path, value)`` pairs in emission order, up to ``max_paths`` of them."""

    def __init__(
        self,
        callback: Callable[[Path, int], None] | None = None,
        max_paths: int | None = DEFAULT_MAX_PATHS,
    ) -> None:
        self.callback = callback
        self.max_paths = max_paths
        self.received = 0
        self.truncated = False
        self.paths: list[tuple[Path, int]] = []

    def emit(self, path: Path, value: int) -> None:
        if self.max_paths is not None and self.received >= self.max_paths:
            self.truncated = True
            raise _Stop
        self.received += 1
        if self.callback is None:
            self.paths.append((path, value))
        else:
            self.callback(path, value)


@dataclass
class TraceStep:
    """One row of the deviation algorithm's trace: the solve result and state after it."""

    path: tuple[int, ...] | None
    value: int | None
    v: int | None
    consumed: dict[int, tuple[int, ...]]


@dataclass
class RunStats:
    paths: int = 0
    uspp_solves: int = 0
    arcs_scanned: int = 0
    backtracks: int = 0
    truncated: bool = False
    f_star: int | None = None
    trace: list[TraceStep] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "paths": self.paths,
            "uspp_solves": self.uspp_solves,
            "arcs_scanned": self.arcs_scanned,
            "backtracks": self.backtracks,
            "truncated": self.truncated,
            "f_star": self.f_star,
        }


def path_record(path: Path, value: int) -> str:
    """One JSON line for an emitted path."""
    return json.dumps({"vertices": list(path.vertices), "arc_ids": list(path.arc_ids), "value": value})


def _validate(g: Graph, lam: Lambda) -> None:
    lam.check(g.n)
    if not lam.nonnegative:
        raise ValidationError("enumeration requires a nonnegative weight vector")


def _emit(g: Graph, sink: PathSink, stats: RunStats, arcs: list[int] | tuple[int, ...], lam: Lambda) -> None:
    path = Path.from_arcs(g, arcs, start=g.source)
    # value recomputed from scratch rather than carried along the search
    sink.emit(path, value_of_costs(path.costs(g), lam))
    stats.paths += 1


def enumerate_alg1(
    g: Graph,
    lam: Lambda,
    eps: Fraction | int | str,
    sink: PathSink,
    fast_sum: bool = False,
) -> RunStats:
    """Depth-first prefix extension with a masked completion test per arc.

    Extending the prefix ``P`` ending at ``u`` by ``a = (u, v)`` masks every
    out-arc of the prefix vertices except those of ``P + a`` and solves the
    universal shortest path problem from ``s``; the arc is taken when that
    optimum exists and is within the bound.  With ``fast_sum`` and the sum
    objective, the per-arc solve is replaced by one distance table per prefix
    computed on the graph without the prefix vertices.
    """
    _validate(g, lam)
    stats = RunStats()
    s, t = g.source, g.sink
    stats.uspp_solves += 1
    opt = solve(g, None, s, t, lam)
    if not opt.found:
        return stats
    assert opt.value is not None
    stats.f_star = opt.value
    bound = Bound(opt.value, eps)
    use_table = fast_sum and lam.family == SUM

    mask = ArcMask(g)
    out_adj, heads, costs = g.out_adj, g.heads, g.costs
    on_path = [False] * (g.n + 1)
    on_path[s] = True
    prefix: list[int] = []
    prefix_cost = 0
    # frame: (vertex, out-arc iterator, arcs masked on entry, distance table or None)
    frames: list[tuple[int, object, list[int], list | None]] = []

    def open_frame(u: int, entry_mask: list[int]) -> None:
        table = None
        if use_table and u != t:
            blocked = [aid for w in range(1, g.n + 1) if on_path[w] for aid in g.in_adj[w]]
            blocked = [aid for aid in blocked if not mask.is_removed(aid)]
            mask.push(blocked)
            stats.uspp_solves += 1
            table = all_distances_to_sink(g, mask).dist
            mask.pop(blocked)
        frames.append((u, iter(out_adj[u]), entry_mask, table))

    try:
        open_frame(s, [])
        while frames:
            u, arcs_iter, entry_mask, table = frames[-1]
            if u == t:
                _emit(g, sink, stats, prefix, lam)
                arcs_iter = iter(())
            descended = False
            for a in arcs_iter:  # type: ignore[attr-defined]
                stats.arcs_scanned += 1
                v = heads[a]
                if on_path[v]:
                    continue
                if table is not None:
                    d = table[v]
                    ok = d is not None and bound.admits(prefix_cost + costs[a] + d)
                    others = [x for x in out_adj[u] if x != a] if ok else []
                    if ok:
                        mask.push(others)
                else:
                    others = [x for x in out_adj[u] if x != a]
                    mask.push(others)
                    stats.uspp_solves += 1
                    res = solve(g, mask, s, t, lam)
                    ok = res.found and bound.admits(res.value)  # type: ignore[arg-type]
                    if not ok:
                        mask.pop(others)
                if ok:
                    prefix.append(a)
                    prefix_cost += costs[a]
                    on_path[v] = True
                    open_frame(v, others)
                    descended = True
                    break
            if descended:
                continue
            frames.pop()
            if prefix:
                a = prefix.pop()
                prefix_cost -= costs[a]
                on_path[heads[a]] = False
                mask.pop(entry_mask)
                stats.backtracks += 1
    except _Stop:
        stats.truncated = True
    return stats


def _forbidden(g: Graph, path: Path) -> list[int]:
    """Out-arcs of every path vertex before the last arc, except the path arc, plus the last arc."""
    arcs = path.arc_ids
    out = []
    for i in range(len(arcs) - 1):
        keep = arcs[i]
        out.extend(aid for aid in g.out_adj[path.vertices[i]] if aid != keep)
    out.append(arcs[-1])
    return out


def enumerate_alg2(
    g: Graph,
    lam: Lambda,
    eps: Fraction | int | str,
    sink: PathSink,
    trace: bool = False,
) -> RunStats:
    """Deviation search driven by forbidden arcs and per-vertex consumed-arc lists.

    ``consumed[v]`` holds the out-arcs of ``v`` all of whose near-shortest
    completions have been emitted.  After a failed solve at ``v`` the search
    moves to ``pred(v)`` on the reference path, restoring out-arcs of ``v`` and
    of ``pred(v)`` except the consumed ones; after a successful solve the new
    path becomes the reference and the search resumes at its last internal vertex.
    """
    _validate(g, lam)
    stats = RunStats()
    s, t = g.source, g.sink
    mask = ArcMask(g)
    consumed: dict[int, set[int]] = {v: set() for v in range(1, g.n + 1)}

    def record(path: Path | None, value: int | None, v: int | None) -> None:
        if trace:
            snapshot = {w: tuple(sorted(c)) for w, c in consumed.items() if c}
            stats.trace.append(TraceStep(path.vertices if path else None, value, v, snapshot))

    def remove(ids: list[int]) -> None:
        mask.push(sorted({a for a in ids if not mask.is_removed(a)}))

    def restore(ids: list[int]) -> None:
        mask.pop(sorted({a for a in ids if mask.is_removed(a)}))

    stats.uspp_solves += 1
    init = solve(g, mask, s, t, lam)
    if not init.found:
        record(None, None, None)
        return stats
    assert init.path is not None and init.value is not None
    stats.f_star = init.value
    bound = Bound(init.value, eps)
    ref = init.path

    try:
        remove(_forbidden(g, ref))
        last_tail = ref.vertices[-2]
        consumed[last_tail].add(ref.arc_ids[-1])
        v: int | None = last_tail
        record(ref, init.value, v)
        if bound.admits(init.value):
            _emit(g, sink, stats, ref.arc_ids, lam)
        while v is not None:
            stats.uspp_solves += 1
            res = solve(g, mask, s, t, lam)
            if not res.found or not bound.admits(res.value):  # type: ignore[arg-type]
                consumed[v].clear()
                p = ref.pred(v)
                restore(list(g.out_adj[v]))
                if p is not None:
                    consumed[p].add(ref.pred_arc(v))  # type: ignore[arg-type]
                    restore([a for a in g.out_adj[p] if a not in consumed[p]])
                    remove(sorted(consumed[p]))
                stats.backtracks += 1
                v = p
                record(res.path, res.value, v)
            else:
                assert res.path is not None and res.value is not None
                new = res.path
                w = new.vertices[-2]
                consumed[w].add(new.arc_ids[-1])
                remove(_forbidden(g, new))
                ref = new
                v = w
                record(new, res.value, v)
                _emit(g, sink, stats, new.arc_ids, lam)
    except _Stop:
        stats.truncated = True
    return stats


def enumerate_brute(
    g: Graph,
    lam: Lambda,
    eps: Fraction | int | str,
    sink: PathSink,
    strict: bool = False,
) -> RunStats:
    """Reference enumerator: every simple s-t path, filtered by the bound.

    The optimum is taken from the same exhaustive pass, so this routine shares
    no code with the specialised solvers.  Weights of any sign are accepted;
    ``strict`` switches the bound test to ``<``.
    """
    lam.check(g.n)
    check_size_gate(g)
    stats = RunStats()
    costs = g.costs
    everything = [(arcs, value_of_costs([costs[a] for a in arcs], lam)) for arcs in iter_simple_paths(g, g.source, g.sink)]
    stats.arcs_scanned = sum(len(a) for a, _ in everything)
    if not everything:
        return stats
    f_star = min(value for _, value in everything)
    stats.f_star = f_star
    bound = Bound(f_star, eps)
    try:
        for arcs, value in everything:
            if bound.admits(value, strict=strict):
                _emit(g, sink, stats, arcs, lam)
    except _Stop:
        stats.truncated = True
    return stats


ALGORITHMS = {
    "alg1": enumerate_alg1,
    "alg2": enumerate_alg2,
    "brute": enumerate_brute,
}


def near_shortest_paths(
    g: Graph,
    lam: Lambda,
    eps: Fraction | int | str,
    algorithm: str = "alg2",
    max_paths: int | None = None,
) -> tuple[list[tuple[Path, int]], RunStats]:
    """Convenience wrapper collecting the emitted paths into a list."""
    sink = PathSink(max_paths=max_paths)
    stats = ALGORITHMS[algorithm](g, lam, eps, sink)
    return sink.paths, stats
