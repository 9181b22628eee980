"""Index vectors, robust edge/K-vectors and integer lattice membership.

Lattice elements are plain tuples of Python ints.  Membership is decided by a
row-style Hermite normal form computed with a tracked unimodular transform,
so a positive answer comes with integer coefficients over the original
generators.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import Hypergraph3, VertexPartition
from .errors import InvalidArgument
from .kspec import as_spec
from .tiler import enumerate_copies

IndexVector = tuple


def index_vector(P: VertexPartition, S: Iterable[int]) -> IndexVector:
    """``|S ∩ V_j|`` for ``j = 1..r``; vertices of ``V_0`` are ignored."""
    owner = P.part_of
    out = [0] * P.r
    for v in S:
        if not 0 <= v < P.n:
            raise InvalidArgument(f"vertex {v} out of range")
        j = owner[v]
        if j:
            out[j - 1] += 1
    return tuple(out)


@dataclass(frozen=True)
class LatticeBasis:
    generators: tuple

    def __init__(self, generators: Iterable[Sequence[int]] = (), dim: int | None = None):
        gens = tuple(tuple(int(x) for x in g) for g in generators)
        dims = {len(g) for g in gens}
        if len(dims) > 1:
            raise InvalidArgument("generators must share a dimension")
        if dim is not None and dims and dims != {dim}:
            raise InvalidArgument(f"generators have dimension {dims.pop()}, expected {dim}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "_dim", dims.pop() if dims else dim)

    @property
    def dim(self) -> int | None:
        return self._dim


def hermite_form(rows: Sequence[Sequence[int]], dim: int):
    """Row echelon Hermite form ``A = U @ rows`` with ``U`` unimodular.

    Returns ``(A, U, pivots)`` where ``pivots`` lists ``(row, column)`` with
    positive pivot entries in increasing column order.
    """
    m = len(rows)
    A = [list(r) for r in rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    pivots = []
    r = 0
    for col in range(dim):
        if r >= m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][col]]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(A[i][col]), i))
            A[r], A[p] = A[p], A[r]
            U[r], U[p] = U[p], U[r]
            clean = True
            for i in range(r + 1, m):
                if A[i][col]:
                    q = A[i][col] // A[r][col]
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    clean = clean and A[i][col] == 0
            if clean:
                break
        if A[r][col]:
            if A[r][col] < 0:
                A[r] = [-x for x in A[r]]
                U[r] = [-x for x in U[r]]
            # reduce rows above into [0, pivot)
            for i in range(r):
                q = A[i][col] // A[r][col]
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
            pivots.append((r, col))
            r += 1
    return A, U, pivots


@dataclass(frozen=True)
class Membership:
    member: bool
    coefficients: tuple | None = None

    def __bool__(self):
        return self.member


def lattice_contains(basis, target: Sequence[int]) -> Membership:
    """Is ``target`` an integer combination of the generators?  Coefficients when it is."""
    if not isinstance(basis, LatticeBasis):
        basis = LatticeBasis(basis)
    t = [int(x) for x in target]
    gens = basis.generators
    if basis.dim is not None and len(t) != basis.dim:
        raise InvalidArgument(f"target has dimension {len(t)}, lattice has {basis.dim}")
    if not gens:
        return Membership(True, ()) if not any(t) else Membership(False)
    A, U, pivots = hermite_form(gens, len(t))
    y = [0] * len(gens)
    for row, col in pivots:
        piv = A[row][col]
        if t[col] % piv:
            return Membership(False)
        q = t[col] // piv
        y[row] = q
        t = [x - q * a for x, a in zip(t, A[row])]
    if any(t):
        return Membership(False)
    coeffs = tuple(sum(y[i] * U[i][j] for i in range(len(gens))) for j in range(len(gens)))
    check = [sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(len(target))]
    assert check == [int(x) for x in target], "lattice witness failed to reproduce target"
    return Membership(True, coeffs)


def _threshold(n: int, power: int, mu, min_count) -> int:
    if (mu is None) == (min_count is None):
        raise InvalidArgument("give exactly one of mu and min_count")
    if min_count is not None:
        if min_count < 0:
            raise InvalidArgument("min_count must be nonnegative")
        return max(1, int(min_count))
    mu = Fraction(mu)
    if mu < 0:
        raise InvalidArgument("mu must be nonnegative")
    return max(1, math.ceil(mu * n ** power))


def edge_vector_counts(H: Hypergraph3, P: VertexPartition) -> tuple[Counter, int]:
    """Edge counts per index vector (edges avoiding ``V_0``) and the number of edges meeting ``V_0``."""
    if P.n != H.n:
        raise InvalidArgument("partition and host disagree on n")
    owner = P.part_of
    counts: Counter = Counter()
    touching = 0
    for e in H.sorted_edges:
        if any(owner[v] == 0 for v in e):
            touching += 1
            continue
        counts[index_vector(P, e)] += 1
    return counts, touching


def robust_edge_vectors(H: Hypergraph3, P: VertexPartition, mu=None, min_count=None) -> dict:
    """Index vectors realised by at least ``ceil(mu*n^3)`` (or ``min_count``) edges, with counts."""
    thr = _threshold(H.n, 3, mu, min_count)
    counts, _ = edge_vector_counts(H, P)
    return {v: c for v, c in sorted(counts.items()) if c >= thr}


def k_vector_counts(H: Hypergraph3, P: VertexPartition, spec) -> tuple[Counter, int]:
    owner = P.part_of
    counts: Counter = Counter()
    touching = 0
    for cp in enumerate_copies(H, spec):
        vs = cp.vertices
        if any(owner[v] == 0 for v in vs):
            touching += 1
            continue
        counts[index_vector(P, vs)] += 1
    return counts, touching


def robust_k_vectors(H: Hypergraph3, P: VertexPartition, spec, mu=None, min_count=None) -> dict:
    """Index vectors of at least ``ceil(mu*n^k)`` (or ``min_count``) copies of K, with counts."""
    s = as_spec(spec)
    thr = _threshold(H.n, s.k, mu, min_count)
    counts, _ = k_vector_counts(H, P, s)
    return {v: c for v, c in sorted(counts.items()) if c >= thr}


@dataclass
class TransferralResult:
    passed: bool
    missing: list
    vectors: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed


def unit_difference(r: int, j: int, l: int) -> tuple:
    """``u_j - u_l`` in ``Z^r`` for 1-based ``j, l``."""
    return tuple(int(i == j - 1) - int(i == l - 1) for i in range(r))


def transferral_check(H: Hypergraph3, P: VertexPartition, spec, mu=None, min_count=None) -> TransferralResult:
    """Test ``u_j - u_l`` against the lattice of robust K-vectors for all ``j < l``."""
    vecs = robust_k_vectors(H, P, spec, mu=mu, min_count=min_count)
    r = P.r
    basis = LatticeBasis(vecs.keys(), dim=r)
    missing = [
        (j, l) for j, l in itertools.combinations(range(1, r + 1), 2)
        if not lattice_contains(basis, unit_difference(r, j, l))
    ]
    return TransferralResult(not missing, missing, vecs)
