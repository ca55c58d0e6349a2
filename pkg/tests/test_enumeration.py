from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import A, B, C, S, T
from strategies import graphs
from unssp.enumeration import PathSink, enumerate_alg1, enumerate_alg2, enumerate_brute, near_shortest_paths
from unssp.errors import ValidationError
from unssp.graph import Graph
from unssp.instances import gen_binary_doubling, gen_triplet_chain
from unssp.objective import Lambda

HALF = Fraction(1, 2)
ENUMERATORS = [enumerate_alg1, enumerate_alg2, enumerate_brute]


def emitted(fn, g, lam, eps, **kw):
    sink = PathSink()
    stats = fn(g, lam, eps, sink, **kw)
    return {p.vertices: v for p, v in sink.paths}, stats


@pytest.mark.parametrize("fn", ENUMERATORS)
def test_kmax2_example(sample, fn):
    found, stats = emitted(fn, sample, Lambda.kmax(2), HALF)
    assert found == {(S, A, B, T): 2, (S, A, C, B, T): 3}
    assert stats.f_star == 2 and stats.paths == 2


def test_deviation_trace(sample):
    _, stats = emitted(enumerate_alg2, sample, Lambda.kmax(2), HALF, trace=True)
    rows = [(t.path, t.value, t.v, t.consumed) for t in stats.trace]
    assert rows == [
        ((S, A, B, T), 2, B, {B: (5,)}),
        (None, None, A, {A: (2,)}),
        ((S, A, C, B, T), 3, B, {A: (2,), B: (5,)}),
        (None, None, C, {A: (2,), C: (4,)}),
        ((S, A, C, T), 4, A, {A: (2, 3)}),
        (None, None, S, {S: (1,)}),
        (None, None, None, {}),
    ]


@pytest.mark.parametrize("fn", ENUMERATORS)
def test_huge_epsilon_gives_every_path(sample, fn):
    found, _ = emitted(fn, sample, Lambda.sum(), 1000)
    assert found == {(S, A, B, T): 9, (S, A, C, B, T): 10, (S, A, C, T): 10}


@pytest.mark.parametrize("fn", ENUMERATORS)
def test_triplet_chain_ties(fn):
    found, _ = emitted(fn, gen_triplet_chain(3), Lambda.sum(), 0)
    assert len(found) == 8 and set(found.values()) == {6}


@pytest.mark.parametrize("fn", ENUMERATORS)
def test_doubling_family(fn):
    sink = PathSink()
    fn(gen_binary_doubling(6), Lambda.sum(), 15, sink)
    values = sorted(v for _, v in sink.paths)
    assert values == sorted(list(range(1, 17)) * 2)


@pytest.mark.parametrize("fn", [enumerate_alg1, enumerate_alg2])
def test_no_path(fn):
    g = Graph(3, [(1, 2, 1)], 1, 3)
    found, stats = emitted(fn, g, Lambda.sum(), 1)
    assert found == {} and stats.uspp_solves == 1 and stats.f_star is None


@pytest.mark.parametrize("fn", ENUMERATORS)
def test_truncation(fn):
    sink = PathSink(max_paths=3)
    stats = fn(gen_triplet_chain(3), Lambda.sum(), 0, sink)
    assert len(sink.paths) == 3 and stats.truncated and sink.truncated


def test_callback_sink(sample):
    seen = []
    sink = PathSink(lambda p, v: seen.append(v))
    enumerate_alg2(sample, Lambda.sum(), 1000, sink)
    assert sorted(seen) == [9, 10, 10] and sink.paths == []


def test_negative_weights(sample):
    neg = Lambda.explicit([-1, 0, 0, 0])
    for fn in (enumerate_alg1, enumerate_alg2):
        with pytest.raises(ValidationError):
            fn(sample, neg, 0, PathSink())
    # f* = -6 and B = -3 under eps = 1/2, strict filter drops everything
    found, _ = emitted(enumerate_brute, sample, neg, HALF, strict=True)
    assert found == {}
    found, _ = emitted(enumerate_brute, sample, neg, 0)
    assert found == {(S, A, B, T): -6}


def test_exact_bound_is_inclusive():
    g = Graph(3, [(1, 3, 3), (1, 2, 2), (2, 3, 2)], 1, 3)  # f* = 3, B = 4
    for fn in ENUMERATORS:
        found, _ = emitted(fn, g, Lambda.sum(), Fraction(1, 3))
        assert set(found.values()) == {3, 4}


def test_wrapper(sample):
    paths, stats = near_shortest_paths(sample, Lambda.kmax(2), HALF, algorithm="alg1")
    assert [v for _, v in paths] == [2, 3] and stats.paths == 2


LAMS = [Lambda.sum(), Lambda.bottleneck(), Lambda.ksum(2), Lambda.kmax(2)]


@settings(max_examples=150, deadline=None)
@given(graphs(min_n=3), st.sampled_from(LAMS), st.sampled_from([0, Fraction(1, 4), 1, 3]))
def test_all_enumerators_agree(g, lam, eps):
    results = []
    for fn in ENUMERATORS:
        sink = PathSink()
        fn(g, lam, eps, sink)
        arcs = [p.arc_ids for p, _ in sink.paths]
        assert len(arcs) == len(set(arcs))
        results.append(set(arcs))
    assert results[0] == results[1] == results[2]
    sink = PathSink()
    enumerate_alg1(g, lam, eps, sink, fast_sum=True)
    assert {p.arc_ids for p, _ in sink.paths} == results[0]


@settings(max_examples=150, deadline=None)
@given(graphs(min_n=3), st.sampled_from(LAMS), st.sampled_from([0, Fraction(1, 4), 1, 3]))
def test_work_per_path(g, lam, eps):
    # the initial solve alone exceeds 2m(K+1) when m = 0
    assume(g.m >= 1)
    s1 = enumerate_alg1(g, lam, eps, PathSink())
    s2 = enumerate_alg2(g, lam, eps, PathSink())
    assert s1.uspp_solves <= 2 * g.m * (s1.paths + 1)
    assert s2.uspp_solves <= 2 * g.n * (s2.paths + 1)
