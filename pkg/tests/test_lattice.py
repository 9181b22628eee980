import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hypertile import lattice as L
from hypertile.constructions import applicable_kinds, generate
from hypertile.core import Hypergraph3, VertexPartition
from hypertile.errors import InvalidArgument
from hypertile.kspec import check_gcd_fact


def test_index_vector_examples():
    P = VertexPartition.from_parts([[0, 1], [2, 3]], n=5, v0=[4])
    assert L.index_vector(P, []) == (0, 0)
    assert L.index_vector(P, [0, 2, 3]) == (1, 2)
    assert L.index_vector(P, [4]) == (0, 0)
    with pytest.raises(InvalidArgument):
        L.index_vector(P, [7])


def test_lattice_contains_examples():
    res = L.lattice_contains([(11, -11), (8, -8), (5, -5)], (1, -1))
    assert res.member
    assert sum(c * g[0] for c, g in zip(res.coefficients, [(11, -11), (8, -8), (5, -5)])) == 1
    assert not L.lattice_contains([(2, -2)], (1, -1))
    assert L.lattice_contains(L.LatticeBasis([], dim=2), (0, 0))
    assert not L.lattice_contains(L.LatticeBasis([], dim=2), (1, 0))
    with pytest.raises(InvalidArgument):
        L.lattice_contains(L.LatticeBasis([(1, 2)]), (1, 2, 3))


def test_robust_edge_vector_examples():
    K12 = Hypergraph3.complete(12)
    one = VertexPartition.from_parts([range(12)])
    assert L.robust_edge_vectors(K12, one, mu=Fraction(math.comb(12, 3), 12 ** 3)) == {(3,): 220}
    inst = generate("divisibility_II", (1, 1, 1), 12)
    P = VertexPartition.from_parts(inst.parts)
    vecs = L.robust_edge_vectors(inst.graph, P, min_count=1)
    assert set(vecs) == {(3, 0), (1, 2)}
    assert vecs == {(1, 2): 70, (3, 0): 35}
    assert L.robust_edge_vectors(Hypergraph3(6), VertexPartition.from_parts([range(3), range(3, 6)]), min_count=1) == {}
    with pytest.raises(InvalidArgument):
        L.robust_edge_vectors(K12, one, mu=Fraction(1, 100), min_count=3)


def test_robust_k_vector_examples():
    K8 = Hypergraph3.complete(8)
    P = VertexPartition.from_parts([range(4), range(4, 8)])
    vecs = L.robust_k_vectors(K8, P, (1, 1, 1), mu=Fraction(1, 10**6))
    assert set(vecs) == {(3, 0), (2, 1), (1, 2), (0, 3)}
    # tripartite-link host: every edge meets V1 in exactly one vertex
    V1, V2 = range(4), range(4, 10)
    H = Hypergraph3(10, [(x, y, z) for x in V1 for y, z in itertools.combinations(V2, 2)])
    P = VertexPartition.from_parts([V1, V2])
    assert set(L.robust_k_vectors(H, P, (1, 1, 1), min_count=1)) == {(1, 2)}
    assert L.robust_k_vectors(Hypergraph3(10), P, (1, 1, 1), min_count=1) == {}


def test_transferral_examples():
    K12 = Hypergraph3.complete(12)
    P = VertexPartition.from_parts([range(6), range(6, 12)])
    assert L.transferral_check(K12, P, (1, 1, 1), mu=Fraction(1, 10**6)).passed
    inst = generate("divisibility_II", (1, 1, 1), 12)
    res = L.transferral_check(inst.graph, VertexPartition.from_parts(inst.parts), (1, 1, 1), min_count=1)
    assert not res.passed and res.missing == [(1, 2)]
    assert L.transferral_check(K12, VertexPartition.from_parts([range(12)]), (1, 1, 1), min_count=1).passed


@pytest.mark.parametrize("spec,n", [((1, 1, 1), 9), ((1, 1, 2), 8), ((1, 1, 4), 12)])
def test_divisibility_barriers_fail_transferral(spec, n):
    kinds = [k for k in applicable_kinds(spec) if k.value.startswith("divisibility")]
    assert kinds
    for kind in kinds:
        inst = generate(kind, spec, n)
        P = VertexPartition.from_parts(inst.parts)
        assert not L.transferral_check(inst.graph, P, spec, min_count=1).passed, kind


@pytest.mark.parametrize("spec", [(1, 1, 1), (1, 1, 2)])
def test_complete_hosts_with_random_balanced_parts_pass(spec):
    rnd = random.Random(5)
    for _ in range(3):
        verts = list(range(8))
        rnd.shuffle(verts)
        P = VertexPartition.from_parts([verts[:4], verts[4:]])
        assert L.transferral_check(Hypergraph3.complete(8), P, spec, min_count=1).passed


def test_edge_vector_counts_partition_edges():
    rnd = random.Random(3)
    H = Hypergraph3(10, [t for t in itertools.combinations(range(10), 3) if rnd.random() < 0.4])
    P = VertexPartition.from_parts([[0, 1, 2], [3, 4, 5, 6]], n=10, v0=[7, 8, 9])
    counts, touching = L.edge_vector_counts(H, P)
    assert sum(counts.values()) + touching == len(H)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 60), st.integers(1, 60), st.integers(1, 60))
def test_gcd_regression_on_difference_vectors(a, b, c):
    gens = [(b + c, -(b + c)), (a + c, -(a + c)), (a + b, -(a + b))]
    assert L.lattice_contains(gens, (1, -1)).member == check_gcd_fact(a, b, c)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(lambda dim: st.tuples(
    st.lists(st.lists(st.integers(-10, 10), min_size=dim, max_size=dim), min_size=0, max_size=4),
    st.lists(st.integers(-6, 6), min_size=4, max_size=4),
    st.just(dim))))
def test_combinations_are_members_with_verified_witness(data):
    gens, coeffs, dim = data
    target = [sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(dim)]
    res = L.lattice_contains(L.LatticeBasis(gens, dim=dim), target)
    assert res.member
    assert [sum(c * g[i] for c, g in zip(res.coefficients, gens)) for i in range(dim)] == target


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-10, 10), min_size=3, max_size=3), min_size=1, max_size=4))
def test_hermite_form_is_unimodular_transform(rows):
    A, U, pivots = L.hermite_form(rows, 3)
    prod = [[sum(U[i][k] * rows[k][j] for k in range(len(rows))) for j in range(3)] for i in range(len(rows))]
    assert prod == A
    assert all(A[r][c] > 0 for r, c in pivots)
    assert abs(round(_det(U))) == 1


def _det(M):
    M = [[Fraction(x) for x in row] for row in M]
    n, det = len(M), Fraction(1)
    for i in range(n):
        p = next((r for r in range(i, n) if M[r][i]), None)
        if p is None:
            return 0
        if p != i:
            M[i], M[p] = M[p], M[i]
            det = -det
        det *= M[i][i]
        for r in range(i + 1, n):
            f = M[r][i] / M[i][i]
            M[r] = [x - f * y for x, y in zip(M[r], M[i])]
    return det
