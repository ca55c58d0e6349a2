"""Exact universal shortest path solvers, one per weight family, plus brute force.

Every solver works on the masked graph and returns an outcome whose path is
simple.  Walk-based solvers order labels by ``(weight, hops, arc ids)``; with
nonnegative weights an optimal walk under that order never repeats a vertex,
and :func:`remove_cycles` is applied anyway as a post-pass.
"""

from __future__ import annotations

import heapq
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .errors import LambdaError, SizeGateError
from .graph import ArcMask, Graph, Path, iter_simple_paths, present_flags, remove_cycles
from .objective import BOTTLENECK, KMAX, KSUM, SUM, Lambda, value_of_costs

BRUTE_MAX_VERTICES = 14
BRUTE_MAX_PATHS = 10**6


@dataclass
class SolveOutcome:
    path: Path | None
    value: int | None
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.path is not None


@dataclass
class DistanceTable:
    """Shortest distances to a fixed sink; ``None`` marks unreachable vertices."""

    sink: int
    dist: list[int | None]
    parent: list[int | None]

    def __getitem__(self, v: int) -> int | None:
        return self.dist[v]

    def path_from(self, g: Graph, v: int) -> Path | None:
        if self.dist[v] is None:
            return None
        arcs = []
        while v != self.sink:
            aid = self.parent[v]
            assert aid is not None
            arcs.append(aid)
            v = g.heads[aid]
        return Path.from_arcs(g, arcs, start=None if arcs else self.sink)


def all_distances_to_sink(g: Graph, mask: ArcMask | None = None, sink: int | None = None) -> DistanceTable:
    """Dijkstra from the sink over reversed unmasked arcs."""
    sink = g.sink if sink is None else sink
    present = present_flags(g, mask)
    dist: list[int | None] = [None] * (g.n + 1)
    parent: list[int | None] = [None] * (g.n + 1)
    done = [False] * (g.n + 1)
    dist[sink] = 0
    heap = [(0, sink)]
    tails, costs, in_adj = g.tails, g.costs, g.in_adj
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        for aid in in_adj[v]:
            if not present[aid]:
                continue
            u = tails[aid]
            if done[u]:
                continue
            nd = d + costs[aid]
            du = dist[u]
            if du is None or nd < du or (nd == du and aid < parent[u]):  # type: ignore[operator]
                dist[u] = nd
                parent[u] = aid
                heapq.heappush(heap, (nd, u))
    return DistanceTable(sink, dist, parent)


def _lex_dijkstra(
    g: Graph,
    present: Sequence[bool],
    source: int,
    target: int,
    weights: Sequence[int],
    stats: dict[str, int],
) -> tuple[int, list[int]] | None:
    """Minimum ``(weight, hops, arc-id sequence)`` walk from ``source`` to ``target``."""
    heads, out_adj = g.heads, g.out_adj
    settled = [False] * (g.n + 1)
    best: list[tuple[int, int, tuple[int, ...]] | None] = [None] * (g.n + 1)
    best[source] = (0, 0, ())
    heap: list[tuple[int, int, tuple[int, ...], int]] = [(0, 0, (), source)]
    relax = 0
    while heap:
        d, h, arcs, u = heapq.heappop(heap)
        if settled[u]:
            continue
        settled[u] = True
        if u == target:
            stats["relaxations"] = stats.get("relaxations", 0) + relax
            return d, list(arcs)
        for aid in out_adj[u]:
            if not present[aid]:
                continue
            v = heads[aid]
            if settled[v]:
                continue
            relax += 1
            label = (d + weights[aid], h + 1, arcs + (aid,))
            cur = best[v]
            if cur is None or label < cur:
                best[v] = label
                heapq.heappush(heap, (*label, v))
    stats["relaxations"] = stats.get("relaxations", 0) + relax
    return None


def _outcome(g: Graph, arcs: list[int], source: int, lam: Lambda, stats: dict[str, int]) -> SolveOutcome:
    arcs = remove_cycles(g, arcs, source)
    path = Path.from_arcs(g, arcs, start=source)
    return SolveOutcome(path, value_of_costs(path.costs(g), lam), stats)


def solve_sum(g: Graph, mask: ArcMask | None, source: int, target: int) -> SolveOutcome:
    stats: dict[str, int] = {}
    res = _lex_dijkstra(g, present_flags(g, mask), source, target, g.costs, stats)
    if res is None:
        return SolveOutcome(None, None, stats)
    return _outcome(g, res[1], source, Lambda.sum(), stats)


def _reachable_path(
    g: Graph, present: Sequence[bool], source: int, target: int, limit: int
) -> list[int] | None:
    """Fewest-hop path using only arcs of cost at most ``limit``."""
    heads, costs, out_adj = g.heads, g.costs, g.out_adj
    parent: dict[int, int | None] = {source: None}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        if u == target:
            arcs = []
            while parent[u] is not None:
                aid = parent[u]
                assert aid is not None
                arcs.append(aid)
                u = g.tails[aid]
            return arcs[::-1]
        for aid in out_adj[u]:
            if present[aid] and costs[aid] <= limit:
                v = heads[aid]
                if v not in parent:
                    parent[v] = aid
                    queue.append(v)
    return None


def solve_bottleneck(g: Graph, mask: ArcMask | None, source: int, target: int) -> SolveOutcome:
    """Binary search over distinct costs with reachability probes."""
    stats = {"probes": 0}
    if source == target:
        return SolveOutcome(Path.from_arcs(g, [], start=source), 0, stats)
    present = present_flags(g, mask)
    thresholds = sorted({g.costs[aid] for aid in g.arc_ids() if present[aid]})
    lo, hi = 0, len(thresholds) - 1
    found: list[int] | None = None
    while lo <= hi:
        mid = (lo + hi) // 2
        stats["probes"] += 1
        arcs = _reachable_path(g, present, source, target, thresholds[mid])
        if arcs is not None:
            found = arcs
            hi = mid - 1
        else:
            lo = mid + 1
    if found is None:
        return SolveOutcome(None, None, stats)
    return _outcome(g, found, source, Lambda.bottleneck(), stats)


def _check_k(g: Graph, k: int) -> None:
    if not 1 <= k <= max(g.n - 1, 1):
        raise LambdaError(f"k={k} outside 1..{g.n - 1}")


def _candidate_thresholds(g: Graph, present: Sequence[bool]) -> list[int]:
    return sorted({0} | {g.costs[aid] for aid in g.arc_ids() if present[aid]})


def solve_kmax(g: Graph, mask: ArcMask | None, source: int, target: int, k: int) -> SolveOutcome:
    """Minimise the k-th largest arc cost by bisection over thresholds.

    A threshold is feasible when some walk uses at most ``k - 1`` arcs costing
    more than it; feasibility is monotone in the threshold.
    """
    _check_k(g, k)
    stats = {"probes": 0}
    present = present_flags(g, mask)
    thresholds = _candidate_thresholds(g, present)
    costs = g.costs
    lo, hi = 0, len(thresholds) - 1
    found: list[int] | None = None
    while lo <= hi:
        mid = (lo + hi) // 2
        tau = thresholds[mid]
        stats["probes"] += 1
        weights = [1 if c > tau else 0 for c in costs]
        res = _lex_dijkstra(g, present, source, target, weights, stats)
        if res is None:
            # unreachable at any threshold
            return SolveOutcome(None, None, stats)
        if res[0] <= k - 1:
            found = res[1]
            hi = mid - 1
        else:
            lo = mid + 1
    assert found is not None
    return _outcome(g, found, source, Lambda.kmax(k), stats)


def solve_ksum(g: Graph, mask: ArcMask | None, source: int, target: int, k: int) -> SolveOutcome:
    """Minimise the sum of the k largest arc costs via truncated-cost shortest paths.

    For every path, ``sum of k largest == min over tau >= 0 of k*tau + sum((c - tau)+)``,
    attained at a threshold in ``{0} | costs``.
    """
    _check_k(g, k)
    stats = {"probes": 0}
    present = present_flags(g, mask)
    costs = g.costs
    best: tuple[int, list[int]] | None = None
    for tau in _candidate_thresholds(g, present):
        stats["probes"] += 1
        weights = [c - tau if c > tau else 0 for c in costs]
        res = _lex_dijkstra(g, present, source, target, weights, stats)
        if res is None:
            return SolveOutcome(None, None, stats)
        score = k * tau + res[0]
        if best is None or score < best[0]:
            best = (score, res[1])
    assert best is not None
    return _outcome(g, best[1], source, Lambda.ksum(k), stats)


def size_gate_vertices() -> int:
    raw = os.environ.get("UNSSP_SIZE_GATE")
    return int(raw) if raw else BRUTE_MAX_VERTICES


def check_size_gate(
    g: Graph,
    source: int | None = None,
    target: int | None = None,
    present: Sequence[bool] | None = None,
) -> None:
    """Accept small graphs outright, otherwise count paths up to the cap."""
    if g.n <= size_gate_vertices():
        return
    source = g.source if source is None else source
    target = g.sink if target is None else target
    for count, _ in enumerate(iter_simple_paths(g, source, target, present), start=1):
        if count > BRUTE_MAX_PATHS:
            raise SizeGateError(
                f"instance has n={g.n} > {size_gate_vertices()} and more than {BRUTE_MAX_PATHS} simple paths"
            )


def solve_brute(g: Graph, mask: ArcMask | None, source: int, target: int, lam: Lambda) -> SolveOutcome:
    """Exhaustive minimum over all simple paths; any sign of weights is allowed."""
    present = present_flags(g, mask)
    check_size_gate(g, source, target, present)
    stats = {"paths": 0}
    best_arcs: list[int] | None = None
    best_value = 0
    costs = g.costs
    for arcs in iter_simple_paths(g, source, target, present):
        stats["paths"] += 1
        value = value_of_costs([costs[a] for a in arcs], lam)
        if best_arcs is None or value < best_value:
            best_arcs, best_value = arcs, value
    if best_arcs is None:
        return SolveOutcome(None, None, stats)
    return SolveOutcome(Path.from_arcs(g, best_arcs, start=source), best_value, stats)


def solve(
    g: Graph,
    mask: ArcMask | None,
    source: int,
    target: int,
    lam: Lambda,
) -> SolveOutcome:
    """Dispatch to the specialised solver for ``lam``'s family."""
    family = lam.family
    if family == SUM:
        return solve_sum(g, mask, source, target)
    if family == BOTTLENECK:
        return solve_bottleneck(g, mask, source, target)
    if family == KMAX:
        assert lam.k is not None
        return solve_kmax(g, mask, source, target, lam.k)
    if family == KSUM:
        assert lam.k is not None
        return solve_ksum(g, mask, source, target, lam.k)
    return solve_brute(g, mask, source, target, lam)
