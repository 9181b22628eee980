"""Absorbing toolkit at desk scale.

Edge reduction by codegree, reachability witness counting, absorbing sets,
a seeded absorbing-family builder and a reachability-graph partition.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .core import Hypergraph3, VertexPartition
from .errors import InvalidArgument, SizeLimitError, guard_limit
from .kspec import KSpec, as_spec
from .tiler import _mask, enumerate_copies, factor_within, iter_copies

ENUMERATION_GUARD = 10**7


# ---------------------------------------------------------------- H_eps


@dataclass(frozen=True)
class Reduction:
    graph: Hypergraph3
    removed: frozenset
    weak_edges: frozenset

    def __iter__(self):
        # allows ``H_eps, removed = epsilon_reduction(...)``
        return iter((self.graph, self.removed))


def epsilon_reduction(H: Hypergraph3, eps) -> Reduction:
    """Drop weak edges and the vertices lying in many of them.

    An edge is weak when one of its pairs has codegree at most ``eps^2 n``.
    Vertices in at least ``eps*C(n,2)`` weak edges are removed; the result
    keeps the strong edges avoiding them.  Vertex labels are unchanged and
    removed vertices are left isolated.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise InvalidArgument("eps must lie in (0, 1)")
    n = H.n
    cut = eps * eps * n
    pm = H.pair_masks

    def weak(e):
        x, y, z = e
        return any(pm[p].get(q, 0).bit_count() <= cut for p, q in ((x, y), (x, z), (y, z)))

    weak_edges = frozenset(e for e in H.edges if weak(e))
    count = [0] * n
    for e in weak_edges:
        for v in e:
            count[v] += 1
    bar = eps * comb(n, 2)
    removed = frozenset(v for v in range(n) if count[v] >= bar and count[v] > 0)
    keep = [e for e in H.edges if e not in weak_edges and not any(v in removed for v in e)]
    return Reduction(Hypergraph3(n, keep), removed, weak_edges)


def reduction_guarantees(H: Hypergraph3, red: Reduction, eps) -> dict[str, bool]:
    """Direct check of the three properties the reduction promises."""
    eps = Fraction(eps)
    n = H.n
    He = red.graph
    size_ok = len(red.removed) <= 3 * eps * n
    dH, dE = H.degrees(), He.degrees()
    loss_ok = all(dH[v] - dE[v] <= 7 * eps * comb(n, 2) for v in range(n) if v not in red.removed)
    pm = H.pair_masks
    cut = eps * eps * n
    pairs_ok = all(
        pm[p].get(q, 0).bit_count() > cut
        for e in He.edges for p, q in itertools.combinations(e, 2)
    )
    return {"removed": size_ok, "degree_loss": loss_ok, "shadow_codegree": pairs_ok}


# ---------------------------------------------------------------- factor oracle


class FactorOracle:
    """Answers "does ``H[S]`` have a K-factor?" using one global copy list."""

    def __init__(self, H: Hypergraph3, spec):
        self.H = H
        self.spec = as_spec(spec)
        self.copies = enumerate_copies(H, self.spec)
        self.masks = [c.mask for c in self.copies]
        self._memo: dict[int, bool] = {}

    def has_factor(self, S: Iterable[int] | int) -> bool:
        m = S if isinstance(S, int) else _mask(S)
        hit = self._memo.get(m)
        if hit is None:
            hit = factor_within(self.masks, m, self.H.n, self.spec.k) is not None
            self._memo[m] = hit
        return hit


# ---------------------------------------------------------------- reachability


@dataclass(frozen=True)
class ReachabilityReport:
    u: int
    v: int
    i: int
    witness_count: int
    total: int
    sampled: bool = False

    @property
    def normalized(self) -> Fraction:
        return Fraction(self.witness_count, self.total) if self.total else Fraction(0)


def _check_pair(H: Hypergraph3, u: int, v: int):
    if u == v:
        raise InvalidArgument("u and v must differ")
    for x in (u, v):
        if not 0 <= x < H.n:
            raise InvalidArgument(f"vertex {x} out of range")


def _depth_one_sets(H: Hypergraph3, s: KSpec, x: int, avoid: int) -> set[frozenset]:
    out = set()
    for cp in iter_copies(H, s, containing=x):
        W = cp.vertices - {x}
        if avoid not in W:
            out.add(W)
    return out


def reachability_witnesses(H: Hypergraph3, u: int, v: int, spec, i: int = 1,
                           guard: int | None = None) -> list[frozenset]:
    """All ``(ik-1)``-sets ``W`` avoiding ``u, v`` with K-factors on ``W+u`` and ``W+v``."""
    s = as_spec(spec)
    _check_pair(H, u, v)
    if i < 1:
        raise InvalidArgument("depth i must be positive")
    size = i * s.k - 1
    if size > H.n - 2:
        return []
    if i == 1:
        return sorted(_depth_one_sets(H, s, u, v) & _depth_one_sets(H, s, v, u), key=sorted)
    total = comb(H.n - 2, size)
    guard = guard_limit(ENUMERATION_GUARD) if guard is None else guard
    if total > guard:
        raise SizeLimitError(f"C({H.n - 2}, {size}) = {total} witness candidates; use estimate_reachability")
    oracle = FactorOracle(H, s)
    rest = [w for w in range(H.n) if w not in (u, v)]
    out = []
    for W in itertools.combinations(rest, size):
        m = _mask(W)
        if oracle.has_factor(m | (1 << u)) and oracle.has_factor(m | (1 << v)):
            out.append(frozenset(W))
    return out


def reachability_count(H: Hypergraph3, u: int, v: int, spec, i: int = 1,
                       guard: int | None = None) -> ReachabilityReport:
    s = as_spec(spec)
    size = i * s.k - 1
    total = comb(H.n - 2, size) if size <= H.n - 2 else 0
    W = reachability_witnesses(H, u, v, s, i, guard)
    return ReachabilityReport(u, v, i, len(W), total)


def estimate_reachability(H: Hypergraph3, u: int, v: int, spec, i: int = 1,
                          samples: int = 2000, seed: int = 0) -> ReachabilityReport:
    """Monte Carlo estimate of the witness count (flagged ``sampled``)."""
    s = as_spec(spec)
    _check_pair(H, u, v)
    size = i * s.k - 1
    rest = np.array([w for w in range(H.n) if w not in (u, v)])
    total = comb(len(rest), size) if size <= len(rest) else 0
    if total == 0:
        return ReachabilityReport(u, v, i, 0, 0, True)
    rng = np.random.default_rng(seed)
    oracle = FactorOracle(H, s)
    hits = 0
    for _ in range(samples):
        W = rng.choice(rest, size=size, replace=False)
        m = _mask(int(w) for w in W)
        if oracle.has_factor(m | (1 << u)) and oracle.has_factor(m | (1 << v)):
            hits += 1
    est = round(Fraction(hits, samples) * total)
    return ReachabilityReport(u, v, i, int(est), total, True)


# ---------------------------------------------------------------- absorbing sets


def _absorbing_args(H: Hypergraph3, A, S, s: KSpec) -> tuple[int, int]:
    A, S = set(A), set(S)
    if A & S:
        raise InvalidArgument("A and S must be disjoint")
    if len(S) != s.k:
        raise InvalidArgument(f"S must have k = {s.k} vertices")
    if len(A) % s.k:
        raise InvalidArgument(f"|A| must be a multiple of k = {s.k}")
    for v in A | S:
        if not 0 <= v < H.n:
            raise InvalidArgument(f"vertex {v} out of range")
    return _mask(A), _mask(S)


def is_absorbing_set(H: Hypergraph3, A, S, spec, oracle: FactorOracle | None = None) -> bool:
    """Both ``H[A]`` and ``H[A ∪ S]`` have K-factors."""
    s = as_spec(spec)
    a, sm = _absorbing_args(H, A, S, s)
    oracle = oracle or FactorOracle(H, s)
    return oracle.has_factor(a) and oracle.has_factor(a | sm)


def count_absorbing_sets(H: Hypergraph3, S, m: int, spec, guard: int | None = None,
                         oracle: FactorOracle | None = None) -> int:
    """Exact number of absorbing ``m``-sets for the ``k``-set ``S``."""
    s = as_spec(spec)
    _absorbing_args(H, range(0), S, s)
    if m % s.k:
        raise InvalidArgument(f"m must be a multiple of k = {s.k}")
    rest = [v for v in range(H.n) if v not in set(S)]
    total = comb(len(rest), m)
    guard = guard_limit(ENUMERATION_GUARD) if guard is None else guard
    if total > guard:
        raise SizeLimitError(f"C({len(rest)}, {m}) = {total} candidate sets; use estimate_absorbing_sets")
    oracle = oracle or FactorOracle(H, s)
    sm = _mask(S)
    count = 0
    for A in itertools.combinations(rest, m):
        a = _mask(A)
        if oracle.has_factor(a) and oracle.has_factor(a | sm):
            count += 1
    return count


def estimate_absorbing_sets(H: Hypergraph3, S, m: int, spec, samples: int = 2000, seed: int = 0) -> int:
    """Monte Carlo estimate of :func:`count_absorbing_sets`."""
    s = as_spec(spec)
    rest = np.array([v for v in range(H.n) if v not in set(S)])
    total = comb(len(rest), m)
    if total == 0:
        return 0
    rng = np.random.default_rng(seed)
    oracle = FactorOracle(H, s)
    sm = _mask(S)
    hits = 0
    for _ in range(samples):
        a = _mask(int(v) for v in rng.choice(rest, size=m, replace=False))
        if oracle.has_factor(a) and oracle.has_factor(a | sm):
            hits += 1
    return round(Fraction(hits, samples) * total)


def unrank_combination(rank: int, n: int, m: int) -> tuple[int, ...]:
    """The ``rank``-th ``m``-subset of ``range(n)`` in lexicographic order."""
    out = []
    x = 0
    for slot in range(m, 0, -1):
        while True:
            c = comb(n - x - 1, slot - 1)
            if rank < c:
                break
            rank -= c
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


@dataclass
class AbsorbingFamily:
    m: int
    sets: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)  # a k-set each member absorbs
    sampled: int = 0
    after_disjoint: int = 0
    _oracle: FactorOracle | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.sets)

    def coverage(self, S) -> int:
        """Number of members absorbing the ``k``-set ``S``."""
        if self._oracle is None:
            return 0
        S = frozenset(S)
        return sum(
            1 for A in self.sets
            if not A & S and self._oracle.has_factor(_mask(A)) and self._oracle.has_factor(_mask(A | S))
        )


def build_absorbing_family(H: Hypergraph3, spec, i0: int, seed: int, p,
                           queries: Sequence[Iterable[int]] | None = None) -> AbsorbingFamily:
    """Seeded random family of disjoint absorbing ``m``-sets, ``m = i0*k^2 - i0*k``.

    Every ``m``-set is kept independently with probability ``p`` (sampled as
    a binomial count of uniformly chosen distinct sets, in random order).
    Intersecting members are resolved in favour of the earlier one, then
    members absorbing none of ``queries`` (default: every ``k``-set) are
    dropped.
    """
    s = as_spec(spec)
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise InvalidArgument("p must lie in [0, 1]")
    if i0 < 1:
        raise InvalidArgument("i0 must be positive")
    m = i0 * s.k * s.k - i0 * s.k
    fam = AbsorbingFamily(m)
    total = comb(H.n, m)
    if p == 0 or total == 0:
        return fam
    if total >= 2**62:
        raise SizeLimitError("too many m-sets to sample from")
    rng = np.random.default_rng(seed)
    N = int(rng.binomial(total, float(p)))
    fam.sampled = N
    if N == 0:
        return fam
    ranks = rng.choice(total, size=N, replace=False)
    used = 0
    kept: list[frozenset] = []
    for r in ranks:
        A = unrank_combination(int(r), H.n, m)
        am = _mask(A)
        if am & used:
            continue
        used |= am
        kept.append(frozenset(A))
    fam.after_disjoint = len(kept)
    oracle = FactorOracle(H, s)
    fam._oracle = oracle
    qs = None if queries is None else [frozenset(q) for q in queries]
    for A in kept:
        am = _mask(A)
        if not oracle.has_factor(am):
            continue
        pool = qs if qs is not None else (
            frozenset(S) for S in itertools.combinations([v for v in range(H.n) if v not in A], s.k)
        )
        for S in pool:
            if len(S) != s.k or S & A:
                continue
            if oracle.has_factor(am | _mask(S)):
                fam.sets.append(A)
                fam.witnesses.append(S)
                break
    return fam


# ---------------------------------------------------------------- partition


@dataclass(frozen=True)
class ReachabilityPartition:
    partition: VertexPartition
    witness_counts: dict

    def __iter__(self):
        return iter((self.partition, self.witness_counts))


def reachability_partition(H: Hypergraph3, spec, min_witnesses: int) -> ReachabilityPartition:
    """Components of the graph joining pairs with at least ``min_witnesses`` depth-one witnesses.

    Components with two or more vertices become ``V_1, V_2, ...`` (ordered by
    smallest vertex); isolated vertices go to ``V_0``.
    """
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    s = as_spec(spec)
    if min_witnesses < 1:
        raise InvalidArgument("min_witnesses must be at least 1")
    n = H.n
    # all depth-one witness sets per vertex, computed once
    per_vertex = [set() for _ in range(n)]
    for cp in iter_copies(H, s):
        vs = cp.vertices
        for x in vs:
            per_vertex[x].add(vs - {x})
    counts = {}
    rows, cols = [], []
    for u, v in itertools.combinations(range(n), 2):
        c = sum(1 for W in per_vertex[u] & per_vertex[v] if u not in W and v not in W)
        counts[(u, v)] = c
        if c >= min_witnesses:
            rows.append(u)
            cols.append(v)
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    ncomp, labels = connected_components(graph, directed=False)
    groups: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(v)
    parts, v0 = [], []
    for members in sorted(groups.values()):
        if len(members) == 1:
            v0.extend(members)
        else:
            parts.append(members)
    return ReachabilityPartition(VertexPartition.from_parts(parts, n=n, v0=v0), counts)
