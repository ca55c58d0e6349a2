"""End-to-end acceptance checks, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; a PASS/FAIL line per criterion
is printed in the terminal summary.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from conftest import A, B, C, SAMPLE_ARCS, S, T, oracle_paths, suite_instance
from lp_grammar import parse_lp
from unssp.complete_set import NextUspQuery, interval_partition, minimal_complete_set, next_usp, next_usp_by_subsets
from unssp.enumeration import PathSink, enumerate_alg1, enumerate_alg2, enumerate_brute
from unssp.graph import Graph
from unssp.instances import gen_binary_doubling, gen_triplet_chain
from unssp.lp_export import build_unspip, emit_nspip
from unssp.objective import Bound, Lambda, value_of_costs
from unssp.solvers import solve, solve_bottleneck, solve_brute, solve_kmax

SUITE_SIZE = 500
LAMS = [Lambda.sum(), Lambda.bottleneck(), Lambda.ksum(2), Lambda.kmax(2)]
EPSILONS = [Fraction(0), Fraction(1, 4), Fraction(1), Fraction(3)]


@pytest.fixture(scope="module")
def suite():
    return [suite_instance(seed) for seed in range(SUITE_SIZE)]


def run_collect(fn, g, lam, eps, **kw):
    sink = PathSink()
    stats = fn(g, lam, eps, sink, **kw)
    return sink.paths, stats


def test_criterion_1_golden_example():
    g = Graph(5, SAMPLE_ARCS, S, T)
    lam, eps = Lambda.kmax(2), Fraction(1, 2)
    start = time.perf_counter()
    p1, _ = run_collect(enumerate_alg1, g, lam, eps)
    p2, stats = run_collect(enumerate_alg2, g, lam, eps, trace=True)
    elapsed = time.perf_counter() - start
    expected = {(S, A, B, T): 2, (S, A, C, B, T): 3}
    for paths in (p1, p2):
        found = {p.vertices: v for p, v in paths}
        assert found == expected and (S, A, C, T) not in found
    rows = [(t.path, t.value, t.v, t.consumed) for t in stats.trace]
    assert rows[:6] == [
        ((S, A, B, T), 2, B, {B: (5,)}),
        (None, None, A, {A: (2,)}),
        ((S, A, C, B, T), 3, B, {A: (2,), B: (5,)}),
        (None, None, C, {A: (2,), C: (4,)}),
        ((S, A, C, T), 4, A, {A: (2, 3)}),
        (None, None, S, {S: (1,)}),
    ]
    assert elapsed < 0.010


def test_criterion_2_triplet_chain():
    for b in range(1, 6):
        g = gen_triplet_chain(b)
        length = (2 * g.n - 2) // 3
        for fn in (enumerate_alg1, enumerate_alg2):
            start = time.perf_counter()
            paths, _ = run_collect(fn, g, Lambda.sum(), 0)
            elapsed = time.perf_counter() - start
            assert len(paths) == 2**b
            assert len({p.arc_ids for p, _ in paths}) == 2**b
            assert all(p.hops == length and v == length for p, v in paths)
            assert elapsed < 1.0


def test_criterion_3_doubling_family():
    for n in range(3, 11):
        g = gen_binary_doubling(n)
        eps = 2 ** (n - 2) - 1
        start = time.perf_counter()
        paths, _ = run_collect(enumerate_brute, g, Lambda.sum(), eps)
        mcs = minimal_complete_set(g, Lambda.sum(), eps)
        elapsed = time.perf_counter() - start
        assert len(paths) == 2 ** (n - 1)
        assert len(mcs) == 2 ** (n - 2)
        assert mcs.values == list(range(1, 2 ** (n - 2) + 1))
        assert elapsed < 5.0


def test_criterion_4_oracle_equivalence(suite):
    start = time.perf_counter()
    mismatches = 0
    for g in suite:
        for lam in LAMS:
            for eps in EPSILONS:
                sets = []
                for fn in (enumerate_alg1, enumerate_alg2, enumerate_brute):
                    paths, _ = run_collect(fn, g, lam, eps)
                    sets.append({p.arc_ids for p, _ in paths})
                    assert len(sets[-1]) == len(paths)
                mismatches += not (sets[0] == sets[1] == sets[2])
    elapsed = time.perf_counter() - start
    assert mismatches == 0
    assert elapsed < 60.0


def test_criterion_5_solver_correctness(suite):
    for g in suite:
        for lam in LAMS + [Lambda.ksum(1), Lambda.kmax(1)]:
            assert solve(g, None, g.source, g.sink, lam).value == solve_brute(g, None, g.source, g.sink, lam).value
        assert solve_bottleneck(g, None, g.source, g.sink).value == solve_kmax(g, None, g.source, g.sink, 1).value


def test_criterion_6_work_per_path(suite):
    for g in suite:
        for lam in LAMS:
            for eps in EPSILONS:
                _, s1 = run_collect(enumerate_alg1, g, lam, eps)
                _, s2 = run_collect(enumerate_alg2, g, lam, eps)
                assert s1.uspp_solves <= 2 * g.m * (s1.paths + 1)
                assert s2.uspp_solves <= 2 * g.n * (s2.paths + 1)


def test_criterion_7_next_usp(suite):
    rng = random.Random(7)
    checked = 0
    for g in suite[:300]:
        paths = oracle_paths(g)
        for k in (1, 2):
            lam = Lambda.ksum(k)
            values = sorted(value_of_costs([g.costs[a] for a in p], lam) for p in paths)
            top = values[-1] if values else 10
            mu = rng.randint(-1, top)
            psi = mu + rng.randint(1, 6)
            ok, path = next_usp_by_subsets(g, k, mu, psi)
            assert ok == any(mu < v <= psi for v in values)
            if ok:
                assert mu < value_of_costs(path.costs(g), lam) <= psi
            xi = rng.randint(0, top + 1)
            above = [v for v in values if v >= xi]
            res = next_usp(g, NextUspQuery(lam, xi=xi))
            assert (res[0] if res else None) == (min(above) if above else None)
        checked += 1
    assert checked == 300


def _nspip_matches(g, xi):
    model = parse_lp(emit_nspip(g, xi))
    names = model.binaries
    arc_of = [int(name.rsplit("_", 1)[1]) for name in names]
    rows = [([(names.index(v), c) for v, c in expr.items()], rel, rhs) for expr, rel, rhs in model.rows.values()]
    expected = {frozenset(p) for p in oracle_paths(g) if sum(g.costs[a] for a in p) >= xi}
    shaped = set()
    for bits in itertools.product((0, 1), repeat=len(names)):
        ok = True
        for terms, rel, rhs in rows:
            lhs = sum(c * bits[i] for i, c in terms)
            if (rel == "=" and lhs != rhs) or (rel == ">=" and lhs < rhs) or (rel == "<=" and lhs > rhs):
                ok = False
                break
        if not ok:
            continue
        chosen = frozenset(arc_of[i] for i, b in enumerate(bits) if b)
        # a path-shaped support visits each vertex at most once from s to t
        if any(frozenset(p) == chosen for p in oracle_paths(g, removed=set(g.arc_ids()) - chosen)):
            shaped.add(chosen)
    return shaped == expected


def test_criterion_8_lp_export(suite):
    small = [g for g in suite if g.m <= 12]
    assert small
    for i, g in enumerate(small):
        xi = solve(g, None, g.source, g.sink, Lambda.sum()).value or 0
        assert _nspip_matches(g, xi + i % 3)
    sample = Graph(5, SAMPLE_ARCS, S, T)
    model = build_unspip(sample, Lambda.kmax(2), 1)
    counts = (
        model.count_vars("x_"),
        model.count_vars("s_"),
        model.count_vars("y_"),
        model.count("flow_"),
        model.count("subtour_"),
        model.count("assign_"),
        model.count("sort_"),
        model.count("lin_"),
        model.count("bound_"),
    )
    n, m = sample.n, sample.m
    assert counts == (m, (n - 1) * m, (n - 1) * m, n, 2**n - n - 1, m + n - 1, n - 2, 3 * (n - 1) * m, 1)
    parsed = parse_lp(model.to_text())
    assert len(parsed.rows) == len(model.constraints)
    assert len(parsed.binaries) == m + 2 * (n - 1) * m


def test_criterion_9_interval_partition():
    for n in range(3, 60):
        for u in range(1, n - 1):
            eps = Fraction(n - 1, u) - 1
            delta = Fraction(2 * n - 3, 2 * u) - 1
            assert len(interval_partition(u, eps, delta)) == 2
    rng = random.Random(9)
    for _ in range(100):
        u = rng.randint(1, 10**6)
        eps = Fraction(rng.randint(1, 400), rng.randint(1, 100))
        delta = Fraction(rng.randint(1, 100), rng.randint(1, 200))
        part = interval_partition(u, eps, delta)
        bounds = part.bounds
        assert bounds[0][0] == u and bounds[-1][1] == Bound(u, eps).value
        assert all(lo < hi for lo, hi in bounds)
        assert all(a[1] == b[0] for a, b in zip(bounds, bounds[1:]))
        probes = [Fraction(rng.randint(0, 10**9), 10**9) * (bounds[-1][1] - u) + u for _ in range(20)]
        for x in probes + [lo for lo, _ in bounds] + [bounds[-1][1]]:
            hits = [i for i, (lo, hi) in enumerate(bounds) if lo <= x < hi or (i == len(bounds) - 1 and x == hi)]
            assert len(hits) == 1 and part.locate(x) == hits[0]
