"""Minimal complete sets, the next-value oracle, and interval representatives.

Everything here is exhaustive and only meant for desk-scale graphs: finding
the next achievable value is NP-hard for the sum, k-sum and k-max objectives.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import SizeGateError, ValidationError
from .graph import Graph, Path, iter_simple_paths
from .objective import Bound, Lambda, value_of_costs
from .solvers import check_size_gate, solve

SUBSET_SEARCH_MAX_K = 3
SUBSET_SEARCH_MAX_ARCS = 25


@dataclass(frozen=True)
class NextUspQuery:
    lam: Lambda
    mu: int | None = None
    psi: int | None = None
    xi: int | None = None

    def __post_init__(self) -> None:
        if self.mu is not None and self.psi is not None and self.psi <= self.mu:
            raise ValidationError(f"cap psi={self.psi} must exceed mu={self.mu}")
        if self.mu is None and self.xi is None:
            raise ValidationError("query needs mu or xi")

    @property
    def lower(self) -> int:
        """Smallest admissible value: ``xi`` when given, else ``mu + 1``."""
        if self.xi is not None:
            return self.xi
        assert self.mu is not None
        return self.mu + 1


def next_usp(g: Graph, q: NextUspQuery) -> tuple[int, Path] | None:
    """Cheapest simple s-t path whose value is at least ``q.lower`` (and at most ``q.psi``).

    Ties go to the lexicographically smallest arc-id sequence.  With
    nonnegative weights, prefixes already above ``psi`` are pruned.
    """
    lam = q.lam
    lam.check(g.n)
    check_size_gate(g)
    costs = g.costs
    lower, cap = q.lower, q.psi
    def over_cap(arcs: list[int]) -> bool:
        return value_of_costs([costs[a] for a in arcs], lam) > cap  # type: ignore[operator]

    prune = over_cap if cap is not None and lam.nonnegative else None

    best: tuple[int, list[int]] | None = None
    for arcs in iter_simple_paths(g, g.source, g.sink, prune=prune):
        value = value_of_costs([costs[a] for a in arcs], lam)
        if value < lower or (cap is not None and value > cap):
            continue
        if best is None or value < best[0]:
            best = (value, arcs)
    if best is None:
        return None
    return best[0], Path.from_arcs(g, best[1], start=g.source)


def _subsets_by_sum(arcs: Sequence[int], costs: Sequence[int], size: int) -> Iterator[tuple[int, tuple[int, ...]]]:
    """``size``-subsets of ``arcs`` in nondecreasing cost-sum order, generated lazily."""
    order = sorted(arcs, key=lambda a: (costs[a], a))
    m = len(order)
    if size > m or size < 1:
        return
    start = tuple(range(size))
    heap = [(sum(costs[order[i]] for i in start), start)]
    seen = {start}
    while heap:
        total, idx = heapq.heappop(heap)
        yield total, tuple(order[i] for i in idx)
        for p in range(size):
            nxt = idx[p] + 1
            limit = idx[p + 1] if p + 1 < size else m
            if nxt < limit:
                cand = idx[:p] + (nxt,) + idx[p + 1 :]
                if cand not in seen:
                    seen.add(cand)
                    step = costs[order[nxt]] - costs[order[idx[p]]]
                    heapq.heappush(heap, (total + step, cand))


def _thread(g: Graph, allowed: set[int], sequence: Sequence[int]) -> list[int] | None:
    """Simple s-t path over ``allowed`` arcs that uses ``sequence`` in this order.

    The segments between consecutive required arcs are searched depth-first
    one after another, backtracking across segments so the result stays simple.
    """
    s, t = g.source, g.sink
    required = set(sequence)
    heads, out_adj = g.heads, g.out_adj
    k = len(sequence)
    on_path = [False] * (g.n + 1)
    on_path[s] = True
    arcs: list[int] = []
    # frame: (arc iterator, index of next required arc on entry)
    stack: list[tuple[Iterator[int], int]] = [(iter(out_adj[s]), 0)]
    while stack:
        it, nxt = stack[-1]
        descended = False
        for aid in it:
            if aid not in allowed:
                continue
            if aid in required:
                if nxt >= k or sequence[nxt] != aid:
                    continue
                after = nxt + 1
            else:
                after = nxt
            v = heads[aid]
            if on_path[v]:
                continue
            if v == t:
                if after == k:
                    return arcs + [aid]
                continue
            arcs.append(aid)
            on_path[v] = True
            stack.append((iter(out_adj[v]), after))
            descended = True
            break
        if not descended:
            stack.pop()
            if arcs:
                on_path[heads[arcs.pop()]] = False
    return None


def _tagged(stream: Iterator[tuple[int, tuple[int, ...]]], size: int) -> Iterator[tuple[int, int, tuple[int, ...]]]:
    for total, subset in stream:
        yield total, size, subset


def next_usp_by_subsets(
    g: Graph,
    k: int,
    mu: int,
    psi: int,
    max_k: int = SUBSET_SEARCH_MAX_K,
    max_arcs: int = SUBSET_SEARCH_MAX_ARCS,
) -> tuple[bool, Path | None]:
    """Decide whether some simple s-t path has k-sum value in ``(mu, psi]``.

    Arc sets ``R`` are visited in ascending cost sum, starting above ``mu``.
    For ``|R| = k`` only arcs no dearer than the cheapest arc of ``R`` may be
    added, and each of the ``k!`` orders of ``R`` is tried.  Paths with fewer
    than ``k`` arcs have their whole cost as k-sum value, so sets of size
    ``j < k`` are tried as complete paths on their own.
    """
    if not 1 <= k <= max_k:
        raise SizeGateError(f"k={k} outside the supported range 1..{max_k}")
    if g.m > max_arcs:
        raise SizeGateError(f"m={g.m} exceeds the limit {max_arcs} for this procedure")
    if psi <= mu:
        raise ValidationError(f"cap psi={psi} must exceed mu={mu}")
    costs = g.costs
    all_arcs = list(g.arc_ids())
    streams = [_tagged(_subsets_by_sum(all_arcs, costs, size), size) for size in range(1, k + 1)]
    for total, size, subset in heapq.merge(*streams):
        if total <= mu:
            continue
        if total > psi:
            break
        if size == k:
            cheapest = min(costs[a] for a in subset)
            allowed = set(subset) | {a for a in all_arcs if costs[a] <= cheapest}
        else:
            allowed = set(subset)
        for order in itertools.permutations(subset):
            arcs = _thread(g, allowed, order)
            if arcs is not None:
                path = Path.from_arcs(g, arcs, start=g.source)
                return True, path
    return False, None


@dataclass
class MinimalCompleteSet:
    entries: list[tuple[int, Path]]

    @property
    def values(self) -> list[int]:
        return [v for v, _ in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def to_json(self) -> list[dict]:
        return [{"value": v, "path": p.to_json()} for v, p in self.entries]


def minimal_complete_set(
    g: Graph,
    lam: Lambda,
    eps: Fraction | int | str,
    literal: bool = False,
) -> MinimalCompleteSet:
    """One representative per distinct value in ``[f*, B]``.

    Runs the ``xi <- OPT(xi) + 1`` loop until ``xi`` passes ``floor(B)``.  By
    default the next-value queries are answered from a single memoised
    enumeration pass; ``literal=True`` issues a fresh :func:`next_usp` per step.
    """
    lam.check(g.n)
    if not lam.nonnegative:
        raise ValidationError("minimal complete sets require a nonnegative weight vector")
    check_size_gate(g)
    opt = solve(g, None, g.source, g.sink, lam)
    if not opt.found:
        return MinimalCompleteSet([])
    assert opt.value is not None
    bound = Bound(opt.value, eps)
    stop = bound.floor + 1

    if literal:
        def oracle(xi: int) -> tuple[int, Path] | None:
            return next_usp(g, NextUspQuery(lam, xi=xi))
    else:
        costs = g.costs
        memo: dict[int, list[int]] = {}

        def over(arcs: list[int]) -> bool:
            return value_of_costs([costs[a] for a in arcs], lam) > bound.floor

        for arcs in iter_simple_paths(g, g.source, g.sink, prune=over):
            memo.setdefault(value_of_costs([costs[a] for a in arcs], lam), arcs)
        ordered = sorted(memo)

        def oracle(xi: int) -> tuple[int, Path] | None:
            for value in ordered:
                if value >= xi:
                    return value, Path.from_arcs(g, memo[value], start=g.source)
            return None

    first = oracle(opt.value)
    assert first is not None and first[0] == opt.value
    entries = [first]
    xi = opt.value + 1
    while xi != stop:
        nxt = oracle(xi)
        if nxt is None or not bound.admits(nxt[0]):
            break
        entries.append(nxt)
        xi = nxt[0] + 1
    return MinimalCompleteSet(entries)


@dataclass
class IntervalPartition:
    """Consecutive intervals ``[lo, hi)`` tiling ``[U, B]``; the last one is closed."""

    u: int
    eps: Fraction
    delta: Fraction
    bounds: list[tuple[Fraction, Fraction]]

    def __len__(self) -> int:
        return len(self.bounds)

    @property
    def upper(self) -> Fraction:
        return (1 + self.eps) * self.u

    def locate(self, value: Fraction | int) -> int | None:
        last = len(self.bounds) - 1
        for i, (lo, hi) in enumerate(self.bounds):
            if lo <= value < hi or (i == last and lo <= value <= hi):
                return i
        return None

    def to_json(self) -> list[dict]:
        return [
            {"lo": str(lo), "hi": str(hi), "closed": i == len(self.bounds) - 1}
            for i, (lo, hi) in enumerate(self.bounds)
        ]


MAX_INTERVALS = 100_000


def interval_count(eps: Fraction, delta: Fraction) -> int:
    """Smallest ``J >= 1`` with ``(1 + delta)**J >= 1 + eps``, computed exactly."""
    target = 1 + eps
    ratio = 1 + delta
    count, power = 1, ratio
    while power < target:
        count += 1
        power *= ratio
        if count > MAX_INTERVALS:
            raise ValidationError(f"more than {MAX_INTERVALS} intervals; increase delta")
    return count


def interval_partition(u: int, eps: Fraction | int | str, delta: Fraction | int | str) -> IntervalPartition:
    """Split ``[U, (1+eps) U]`` at the points ``(1+delta)**i * U``."""
    eps, delta = Fraction(eps), Fraction(delta)
    if u == 0:
        raise ValidationError("U = 0 collapses [U, B] to a single point; handle it as one interval")
    if u < 0:
        raise ValidationError("U must be positive")
    if eps <= 0 or delta <= 0:
        raise ValidationError("eps and delta must be positive")
    count = interval_count(eps, delta)
    ratio = 1 + delta
    upper = (1 + eps) * u
    bounds = []
    lo = Fraction(u)
    for _ in range(count - 1):
        hi = lo * ratio
        bounds.append((lo, hi))
        lo = hi
    bounds.append((lo, upper))
    return IntervalPartition(u, eps, delta, bounds)


def representatives(
    g: Graph,
    lam: Lambda,
    eps: Fraction | int | str,
    delta: Fraction | int | str,
) -> tuple[IntervalPartition | None, list[tuple[int, Path] | None]]:
    """One witness per nonempty interval, from a single binned enumeration pass.

    The witness of an interval is its cheapest path, ties broken by arc ids.
    When the optimum is 0 the range is the single point 0 and the partition
    is ``None``.
    """
    lam.check(g.n)
    if not lam.nonnegative:
        raise ValidationError("representatives require a nonnegative weight vector")
    check_size_gate(g)
    opt = solve(g, None, g.source, g.sink, lam)
    if not opt.found:
        return None, []
    assert opt.value is not None and opt.path is not None
    bound = Bound(opt.value, eps)
    if opt.value == 0:
        return None, [(0, opt.path)]
    part = interval_partition(opt.value, eps, delta)
    picks: list[tuple[int, list[int]] | None] = [None] * len(part)
    costs = g.costs

    def over(arcs: list[int]) -> bool:
        return value_of_costs([costs[a] for a in arcs], lam) > bound.floor

    for arcs in iter_simple_paths(g, g.source, g.sink, prune=over):
        value = value_of_costs([costs[a] for a in arcs], lam)
        i = part.locate(value)
        if i is None:
            continue
        cur = picks[i]
        if cur is None or value < cur[0]:
            picks[i] = (value, arcs)
    out = [None if p is None else (p[0], Path.from_arcs(g, p[1], start=g.source)) for p in picks]
    return part, out
