"""Generators for the exponential-path families and for seeded random digraphs."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import ValidationError
from .graph import Graph


def gen_triplet_chain(b: int) -> Graph:
    """``b`` diamonds in series with unit costs: 2**b s-t paths, all with 2b arcs.

    Block ``i`` starts at joint vertex ``j = 3i + 1`` and has arcs
    ``(j, j+1), (j, j+2), (j+1, j+3), (j+2, j+3)``.
    """
    if b < 1:
        raise ValidationError("triplet chain needs at least one block")
    arcs = []
    for i in range(b):
        j = 3 * i + 1
        arcs += [(j, j + 1, 1), (j, j + 2, 1), (j + 1, j + 3, 1), (j + 2, j + 3, 1)]
    n = 3 * b + 1
    return Graph(n, arcs, 1, n)


def gen_binary_doubling(n: int) -> Graph:
    """Chain of parallel arc pairs whose path sums cover ``1..2**(n-2)`` twice each.

    The first pair both cost 1; pair ``i >= 2`` costs 0 and ``2**(i-2)``.
    """
    if n < 3:
        raise ValidationError("binary doubling family needs n >= 3")
    arcs = [(1, 2, 1), (1, 2, 1)]
    for i in range(2, n):
        arcs += [(i, i + 1, 0), (i, i + 1, 2 ** (i - 2))]
    return Graph(n, arcs, 1, n)


@dataclass(frozen=True)
class RandomSpec:
    n: int
    m: int
    cost_max: int = 10
    seed: int = 0


def gen_random(spec: RandomSpec) -> Graph:
    """Seeded digraph on ``1..n`` (source 1, sink n) with an s-t spine.

    The spine visits a random subset of the inner vertices in random order;
    the remaining arcs join uniformly drawn distinct endpoints, so parallel
    arcs may occur.  Costs are uniform on ``0..cost_max``.
    """
    n, m = spec.n, spec.m
    if n < 2:
        raise ValidationError("random graph needs n >= 2")
    if m < 1:
        raise ValidationError("random graph needs m >= 1 for the s-t spine")
    if spec.cost_max < 0:
        raise ValidationError("cost_max must be nonnegative")
    rng = random.Random(spec.seed)
    inner = list(range(2, n))
    rng.shuffle(inner)
    spine_len = rng.randint(0, min(len(inner), m - 1))
    spine = [1] + inner[:spine_len] + [n]
    pairs = list(zip(spine, spine[1:]))
    while len(pairs) < m:
        u = rng.randint(1, n)
        v = rng.randint(1, n)
        if u != v:
            pairs.append((u, v))
    rng.shuffle(pairs)
    arcs = [(u, v, rng.randint(0, spec.cost_max)) for u, v in pairs]
    return Graph(n, arcs, 1, n)
