import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hypertile.constructions import generate
from hypertile.core import Hypergraph3
from hypertile.errors import InvalidArgument, SizeLimitError
from hypertile.tiler import (
    KCopy, Tiling, augment_universal, count_copies_through, enumerate_copies, factor_within,
    greedy_regular_tiling, has_perfect_tiling, iter_copies, max_tiling,
)

from .oracles import brute_copies, brute_max_packing


def test_kcopy_canonical_form():
    cp = KCopy.from_parts([5, 4], [1], [2])
    assert cp.parts == ((1,), (2,), (4, 5))
    assert cp.sizes == (1, 1, 2)
    assert KCopy.from_parts([2], [1], [5, 4]) == cp


def test_enumerate_examples():
    K112 = Hypergraph3(4, [(0, 1, 2), (0, 1, 3)])
    assert len(enumerate_copies(K112, (1, 1, 2))) == 1
    assert len(enumerate_copies(Hypergraph3.complete(4), (1, 1, 1))) == 4
    # 15 choices of the 2-part, then C(4,2)=6 choices for the singleton pair
    assert len(enumerate_copies(Hypergraph3.complete(6), (1, 1, 2))) == 90
    assert len(enumerate_copies(Hypergraph3.complete(8), (2, 2, 2))) == 420


def test_enumerate_limit_raises():
    with pytest.raises(SizeLimitError):
        enumerate_copies(Hypergraph3.complete(8), (1, 1, 1), limit=10)


def test_max_tiling_examples():
    assert len(max_tiling(Hypergraph3.complete(4), (1, 1, 1))) == 1
    d1 = generate("divisibility_I", (1, 1, 1), 6)
    T = max_tiling(d1.graph, (1, 1, 1))
    assert len(T) == 1 and len(T.covered) == 3
    s1 = generate("space_I", (1, 1, 1), 9)
    T = max_tiling(s1.graph, (1, 1, 1))
    assert len(T) == 2 and T.optimal


def test_perfect_tiling_examples():
    res = has_perfect_tiling(Hypergraph3.complete(6), (1, 1, 1))
    assert res and res.witness.is_perfect(6) and res.witness.is_valid_in(Hypergraph3.complete(6))
    assert not has_perfect_tiling(Hypergraph3.complete(7), (1, 1, 1))
    assert not has_perfect_tiling(generate("divisibility_I", (1, 1, 1), 6).graph, (1, 1, 1))


def test_node_limit_returns_partial():
    rnd = random.Random(1)
    H = Hypergraph3(12, [t for t in itertools.combinations(range(12), 3) if rnd.random() < 0.15])
    with pytest.raises(SizeLimitError) as info:
        max_tiling(H, (1, 1, 2), node_limit=1)
    partial = info.value.partial
    assert isinstance(partial, Tiling) and not partial.optimal and partial.is_valid_in(H)
    assert len(max_tiling(H, (1, 1, 2))) >= len(partial)


def test_tiling_rejects_overlap():
    with pytest.raises(InvalidArgument):
        Tiling((KCopy.from_parts([0], [1], [2]), KCopy.from_parts([2], [3], [4])))


def test_greedy_examples():
    H = Hypergraph3.complete_tripartite((10, 15, 20))
    res = greedy_regular_tiling(H, range(10), range(10, 25), range(25, 45), (2, 3, 4), Fraction(1, 4))
    assert res.residual == (4, 6, 8) and res.leftover == 18 and res.stop_reason == "threshold"
    assert res.invariant_checks >= 1

    H = Hypergraph3.complete_tripartite((5, 5, 5))
    res = greedy_regular_tiling(H, range(5), range(5, 10), range(10, 15), (1, 1, 1), Fraction(1, 5))
    assert res.trace[0][0] == "kkk"
    assert res.leftover <= 3 * Fraction(1, 5) * 15

    res = greedy_regular_tiling(Hypergraph3(15), range(5), range(5, 10), range(10, 15), (1, 1, 1), Fraction(1, 5))
    assert res.stalled and len(res.tiling) == 0


def test_greedy_precondition():
    H = Hypergraph3.complete_tripartite((2, 9, 9))
    with pytest.raises(InvalidArgument):
        greedy_regular_tiling(H, range(2), range(2, 11), range(11, 20), (1, 1, 1), Fraction(1, 4))


def test_augment_universal():
    H = Hypergraph3(4)
    assert augment_universal(H, 0) == H
    G = augment_universal(H, Fraction(1, 4))
    assert G.n == 6
    assert all(e[2] >= 4 for e in G.edges)
    # an old vertex sees both new vertices: 2*3 triples with one new vertex plus 1 with both
    assert G.degree([0]) == 2 * 3 + 1
    K6 = Hypergraph3.complete(6)
    assert has_perfect_tiling(augment_universal(K6, Fraction(1, 4)), (1, 1, 1)).exists is (
        (6 + 3) % 3 == 0)


def test_factor_within_subset():
    H = Hypergraph3.complete(9)
    copies = enumerate_copies(H, (1, 1, 1))
    masks = [c.mask for c in copies]
    idx = factor_within(masks, 0b111111, 9, 3)
    assert idx is not None and len(idx) == 2
    assert factor_within(masks, 0b11111, 9, 3) is None


@st.composite
def small_hosts(draw, n_max=8):
    n = draw(st.integers(4, n_max))
    seed = draw(st.integers(0, 10**6))
    p = draw(st.sampled_from([0.2, 0.4, 0.7]))
    rnd = random.Random(seed)
    return Hypergraph3(n, [t for t in itertools.combinations(range(n), 3) if rnd.random() < p])


@settings(max_examples=40, deadline=None)
@given(small_hosts(7), st.sampled_from([(1, 1, 1), (1, 1, 2), (1, 2, 2)]))
def test_copies_match_brute_force(H, spec):
    got = {frozenset(map(frozenset, c.parts)) for c in enumerate_copies(H, spec)}
    assert got == brute_copies(H.n, H.edges, spec)
    assert all(c.is_copy_in(H) for c in enumerate_copies(H, spec))


@settings(max_examples=30, deadline=None)
@given(small_hosts(8), st.randoms(use_true_random=False))
def test_copy_count_invariant_under_relabel(H, rnd):
    perm = list(range(H.n))
    rnd.shuffle(perm)
    for spec in [(1, 1, 1), (1, 1, 2)]:
        assert len(enumerate_copies(H, spec)) == len(enumerate_copies(H.relabel(perm), spec))


@settings(max_examples=30, deadline=None)
@given(small_hosts(8))
def test_copies_through_vertex_partition_the_count(H):
    spec = (1, 1, 2)
    copies = enumerate_copies(H, spec)
    for v in range(H.n):
        assert count_copies_through(H, spec, v) == sum(v in c.vertices for c in copies)
    assert sorted(iter_copies(H, spec, within=range(H.n))) == sorted(copies)


@settings(max_examples=40, deadline=None)
@given(small_hosts(9), st.sampled_from([(1, 1, 1), (1, 1, 2)]))
def test_max_tiling_matches_packing_oracle(H, spec):
    T = max_tiling(H, spec)
    assert T.is_valid_in(H)
    assert len(T) == brute_max_packing(H.n, [c.vertices for c in enumerate_copies(H, spec)])
    perfect = has_perfect_tiling(H, spec).exists
    assert perfect == (len(T) * sum(spec) == H.n)
