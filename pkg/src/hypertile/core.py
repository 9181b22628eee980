"""3-graph data model and elementary statistics.

Vertices are the integers ``0..n-1``; an edge is a sorted 3-tuple.  All
densities are exact :class:`fractions.Fraction` values.  The only
floating-point quantity here is :func:`shadow_bound`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import InvalidArgument, SizeLimitError

Edge = tuple[int, int, int]

# Exhaustive regularity checking enumerates every subset of every part.
REGULARITY_PART_LIMIT = 14

SHADOW_INTERVAL = (0.25, (47 - 5 * math.sqrt(57)) / 24)


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    return Fraction(x)


@dataclass(frozen=True)
class Hypergraph3:
    """A 3-uniform hypergraph on the vertex set ``range(n)``.

    ``edges`` may be given as any iterable of 3-element collections; it is
    normalised to a frozenset of sorted tuples (duplicates collapse).
    """

    n: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        if self.n < 0:
            raise InvalidArgument(f"vertex count must be nonnegative, got {self.n}")
        canon = set()
        for e in self.edges:
            t = tuple(sorted(int(v) for v in e))
            if len(t) != 3 or len(set(t)) != 3:
                raise InvalidArgument(f"edge {e!r} does not have 3 distinct vertices")
            if t[0] < 0 or t[2] >= self.n:
                raise InvalidArgument(f"edge {e!r} has a vertex outside 0..{self.n - 1}")
            canon.add(t)
        object.__setattr__(self, "edges", frozenset(canon))

    @classmethod
    def complete(cls, n: int) -> "Hypergraph3":
        return cls(n, itertools.combinations(range(n), 3))

    @classmethod
    def complete_tripartite(cls, sizes: Sequence[int]) -> "Hypergraph3":
        """Complete 3-partite 3-graph with consecutive blocks of the given sizes."""
        s1, s2, s3 = sizes
        V1 = range(s1)
        V2 = range(s1, s1 + s2)
        V3 = range(s1 + s2, s1 + s2 + s3)
        return cls(s1 + s2 + s3, itertools.product(V1, V2, V3))

    def __len__(self):
        return len(self.edges)

    def __contains__(self, triple) -> bool:
        return tuple(sorted(triple)) in self.edges

    @property
    def vertices(self) -> range:
        return range(self.n)

    @cached_property
    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[Edge, ...], ...]:
        inc: list[list[Edge]] = [[] for _ in range(self.n)]
        for e in self.sorted_edges:
            for v in e:
                inc[v].append(e)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def pair_masks(self) -> tuple[dict, ...]:
        """``pair_masks[u][v]`` is the bitmask of all ``w`` with ``uvw`` an edge."""
        masks: list[dict] = [dict() for _ in range(self.n)]
        for x, y, z in self.edges:
            for u, v, w in ((x, y, z), (x, z, y), (y, z, x)):
                masks[u][v] = masks[u].get(v, 0) | (1 << w)
                masks[v][u] = masks[v].get(u, 0) | (1 << w)
        return tuple(masks)

    def codegree_mask(self, u: int, v: int) -> int:
        return self.pair_masks[u].get(v, 0)

    def degree(self, S: Iterable[int]) -> int:
        return degree(self, S)

    def degrees(self) -> list[int]:
        return [len(es) for es in self.incidence]

    def min_degree(self, d: int = 1) -> int:
        """Minimum ``d``-degree over all ``d``-sets (``d`` in {1, 2})."""
        if d == 1:
            return min(self.degrees(), default=0)
        if d == 2:
            if self.n < 2:
                return 0
            return min(
                self.codegree_mask(u, v).bit_count()
                for u, v in itertools.combinations(range(self.n), 2)
            )
        raise InvalidArgument(f"d must be 1 or 2, got {d}")

    def induced(self, vertices: Iterable[int]) -> tuple["Hypergraph3", list[int]]:
        """Induced subgraph, relabelled to ``0..m-1``; returns it with the old labels."""
        old = sorted(set(vertices))
        for v in old:
            if not 0 <= v < self.n:
                raise InvalidArgument(f"vertex {v} out of range")
        new = {v: i for i, v in enumerate(old)}
        keep = set(old)
        if len(old) * 3 < self.n:
            cand = {e for v in old for e in self.incidence[v]}
        else:
            cand = self.edges
        edges = [(new[a], new[b], new[c]) for a, b, c in cand if a in keep and b in keep and c in keep]
        return Hypergraph3(len(old), edges), old

    def relabel(self, perm: Sequence[int]) -> "Hypergraph3":
        """Image under the vertex bijection ``v -> perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise InvalidArgument("perm must be a permutation of range(n)")
        return Hypergraph3(self.n, ((perm[a], perm[b], perm[c]) for a, b, c in self.edges))

    def with_edges(self, extra: Iterable[Iterable[int]]) -> "Hypergraph3":
        return Hypergraph3(self.n, itertools.chain(self.edges, extra))


@dataclass(frozen=True)
class VertexPartition:
    """An ordered partition ``V_0, V_1, ..., V_r`` of ``range(n)``.

    ``V_0`` is the exceptional part and may be empty; every vertex lies in
    exactly one part.
    """

    n: int
    parts: tuple

    def __post_init__(self):
        parts = tuple(frozenset(int(v) for v in p) for p in self.parts)
        if not parts:
            raise InvalidArgument("a partition needs at least the V_0 slot")
        seen: set[int] = set()
        for p in parts:
            if seen & p:
                raise InvalidArgument(f"parts overlap on {sorted(seen & p)}")
            seen |= p
        if seen != set(range(self.n)):
            missing = sorted(set(range(self.n)) - seen)
            extra = sorted(seen - set(range(self.n)))
            raise InvalidArgument(f"partition does not cover range(n): missing {missing}, extra {extra}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_parts(cls, parts: Sequence[Iterable[int]], n: int | None = None, v0: Iterable[int] = ()) -> "VertexPartition":
        """Build from the non-exceptional parts ``V_1..V_r`` (``V_0`` given separately)."""
        parts = [list(p) for p in parts]
        v0 = list(v0)
        if n is None:
            n = sum(map(len, parts)) + len(v0)
        return cls(n, (v0, *parts))

    @property
    def r(self) -> int:
        return len(self.parts) - 1

    @property
    def clusters(self) -> tuple:
        return self.parts[1:]

    @cached_property
    def part_of(self) -> list[int]:
        owner = [0] * self.n
        for i, p in enumerate(self.parts):
            for v in p:
                owner[v] = i
        return owner


def _check_vertices(H: Hypergraph3, S) -> tuple[int, ...]:
    S = tuple(sorted(set(S)))
    for v in S:
        if not 0 <= v < H.n:
            raise InvalidArgument(f"vertex {v} out of range for n={H.n}")
    return S


def degree(H: Hypergraph3, S: Iterable[int]) -> int:
    """Number of edges containing every vertex of ``S`` (``|S|`` is 1 or 2)."""
    S = _check_vertices(H, S)
    if len(S) == 1:
        return len(H.incidence[S[0]])
    if len(S) == 2:
        return H.codegree_mask(*S).bit_count()
    raise InvalidArgument(f"|S| must be 1 or 2, got {len(S)}")


def shadow(H: Hypergraph3) -> set[tuple[int, int]]:
    """Pairs of vertices lying in at least one edge."""
    out = set()
    for a, b, c in H.edges:
        out.update(((a, b), (a, c), (b, c)))
    return out


class ShadowBound(NamedTuple):
    value: float
    in_range: bool


def shadow_bound(d: float) -> ShadowBound:
    """Lower bound coefficient ``4*sqrt(d) - 2*d - 1`` for the shadow density.

    The bound is only valid for ``d`` in ``[1/4, (47 - 5*sqrt(57))/24]``;
    values outside that interval are still evaluated but reported with
    ``in_range=False``.
    """
    d = float(d)
    if d < 0:
        raise InvalidArgument(f"d must be nonnegative, got {d}")
    lo, hi = SHADOW_INTERVAL
    return ShadowBound(4 * math.sqrt(d) - 2 * d - 1, lo <= d <= hi)


def _disjoint_parts(H: Hypergraph3, *sets) -> list[list[int]]:
    parts = []
    seen: set[int] = set()
    for s in sets:
        s = sorted(set(s))
        if not s:
            raise InvalidArgument("parts must be nonempty")
        for v in s:
            if not 0 <= v < H.n:
                raise InvalidArgument(f"vertex {v} out of range for n={H.n}")
        if seen & set(s):
            raise InvalidArgument("parts must be pairwise disjoint")
        seen |= set(s)
        parts.append(s)
    return parts


def crossing_edges(H: Hypergraph3, V1, V2, V3) -> int:
    """``e(V1, V2, V3)``: edges with one vertex in each of three disjoint sets."""
    A, B, C = (set(x) for x in (V1, V2, V3))
    cmask = sum(1 << z for z in C)
    total = 0
    for x in A:
        for y in B:
            total += (H.codegree_mask(x, y) & cmask).bit_count()
    return total


def tripartite_density(H: Hypergraph3, V1, V2, V3) -> Fraction:
    """``e(V1,V2,V3) / (|V1||V2||V3|)`` as an exact rational."""
    A, B, C = _disjoint_parts(H, V1, V2, V3)
    return Fraction(crossing_edges(H, A, B, C), len(A) * len(B) * len(C))


def _subset_matrix(size: int, min_size: int) -> np.ndarray:
    rows = [
        [(m >> i) & 1 for i in range(size)]
        for m in range(1, 1 << size)
        if (m.bit_count()) >= min_size
    ]
    rows.sort(key=sum)
    return np.array(rows, dtype=np.int64).reshape(-1, size)


def _min_subset_size(eps: Fraction, size: int) -> int:
    return max(1, math.ceil(eps * size))


def density_extremes(H: Hypergraph3, V1, V2, V3, eps) -> dict[tuple[int, int, int], tuple[int, int]]:
    """Least and greatest crossing-edge count for every admissible size triple.

    Admissible means ``A_i`` a subset of ``V_i`` with ``|A_i| >= eps*|V_i|``.
    The keys are ``(|A_1|, |A_2|, |A_3|)``.  For fixed ``A_1, A_2`` the best and
    worst ``A_3`` of a given size are read off a sorted weight vector, so only
    the first two parts are enumerated.
    """
    eps = _as_fraction(eps)
    if eps <= 0:
        raise InvalidArgument("eps must be positive")
    parts = _disjoint_parts(H, V1, V2, V3)
    big = [len(p) for p in parts if len(p) > REGULARITY_PART_LIMIT]
    if big:
        raise SizeLimitError(
            f"exhaustive regularity check limited to parts of size <= {REGULARITY_PART_LIMIT}; "
            "use sampled_regularity_violation for larger parts"
        )
    A, B, C = parts
    n1, n2, n3 = len(A), len(B), len(C)
    T = np.zeros((n1, n2, n3), dtype=np.int64)
    for i, x in enumerate(A):
        for j, y in enumerate(B):
            m = H.codegree_mask(x, y)
            if m:
                for l, z in enumerate(C):
                    if (m >> z) & 1:
                        T[i, j, l] = 1
    S1 = _subset_matrix(n1, _min_subset_size(eps, n1))
    S2 = _subset_matrix(n2, _min_subset_size(eps, n2))
    min3 = _min_subset_size(eps, n3)
    sizes1 = S1.sum(axis=1)
    sizes2 = S2.sum(axis=1)
    bounds2 = {int(s): np.flatnonzero(sizes2 == s) for s in np.unique(sizes2)}
    out: dict[tuple[int, int, int], tuple[int, int]] = {}
    W = np.einsum("ai,ijk->ajk", S1, T)  # per-A1 (y, z) weight matrices
    chunk = max(1, 4_000_000 // max(1, len(S2) * n3))
    for start in range(0, len(S1), chunk):
        block = W[start:start + chunk]
        # C[a, b, z] = number of edges x in A1, y in A2 through z
        Cw = np.einsum("bj,ajk->abk", S2, block)
        Cw.sort(axis=2)
        lo = np.cumsum(Cw, axis=2)
        hi = np.cumsum(Cw[:, :, ::-1], axis=2)
        for s1 in np.unique(sizes1[start:start + chunk]):
            rows = np.flatnonzero(sizes1[start:start + chunk] == s1)
            for s2, idx in bounds2.items():
                sub_lo = lo[np.ix_(rows, idx)].reshape(-1, n3).min(axis=0)
                sub_hi = hi[np.ix_(rows, idx)].reshape(-1, n3).max(axis=0)
                for s3 in range(min3, n3 + 1):
                    key = (int(s1), s2, s3)
                    e_lo, e_hi = int(sub_lo[s3 - 1]), int(sub_hi[s3 - 1])
                    if key in out:
                        old_lo, old_hi = out[key]
                        out[key] = (min(old_lo, e_lo), max(old_hi, e_hi))
                    else:
                        out[key] = (e_lo, e_hi)
    return out


def density_range(H: Hypergraph3, V1, V2, V3, eps) -> tuple[Fraction, Fraction]:
    """Smallest and largest density over all admissible sub-triples."""
    ext = density_extremes(H, V1, V2, V3, eps)
    lo = min(Fraction(e, s1 * s2 * s3) for (s1, s2, s3), (e, _) in ext.items())
    hi = max(Fraction(e, s1 * s2 * s3) for (s1, s2, s3), (_, e) in ext.items())
    return lo, hi


def is_regular(H: Hypergraph3, V1, V2, V3, eps, d) -> bool:
    """Exact ``(eps, d)``-regularity: ``|d(A1,A2,A3) - d| <= eps`` on all large sub-triples."""
    eps, d = _as_fraction(eps), _as_fraction(d)
    if d < 0:
        raise InvalidArgument("d must be nonnegative")
    lo, hi = density_range(H, V1, V2, V3, eps)
    return hi - d <= eps and d - lo <= eps


def is_epsilon_regular(H: Hypergraph3, V1, V2, V3, eps) -> tuple[bool, Fraction]:
    """Whether the triple is ``(eps, d)``-regular for *some* ``d >= 0``.

    Returns the verdict and the witnessing ``d`` (the midpoint of the
    observed density range, which is optimal).
    """
    eps = _as_fraction(eps)
    lo, hi = density_range(H, V1, V2, V3, eps)
    return hi - lo <= 2 * eps, (lo + hi) / 2


def sampled_regularity_violation(H: Hypergraph3, V1, V2, V3, eps, d, samples: int = 10_000, seed: int = 0):
    """Heuristic search for a sub-triple violating ``(eps, d)``-regularity.

    Returns a violating ``(A1, A2, A3)`` or ``None``.  ``None`` is *not* a
    proof of regularity.
    """
    eps, d = _as_fraction(eps), _as_fraction(d)
    parts = _disjoint_parts(H, V1, V2, V3)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        pick = []
        for p in parts:
            k = int(rng.integers(_min_subset_size(eps, len(p)), len(p) + 1))
            pick.append(sorted(int(v) for v in rng.choice(p, size=k, replace=False)))
        dens = Fraction(crossing_edges(H, *pick), math.prod(map(len, pick)))
        if abs(dens - d) > eps:
            return tuple(pick)
    return None


def cluster_hypergraph(H: Hypergraph3, P: VertexPartition, eps, d) -> Hypergraph3:
    """Reduced 3-graph on the clusters ``V_1..V_t`` (cluster ``V_i`` is vertex ``i-1``).

    ``{i, j, l}`` is an edge iff the triple of clusters is eps-regular (for
    some density) and its density is at least ``d``.
    """
    eps, d = _as_fraction(eps), _as_fraction(d)
    clusters = [sorted(p) for p in P.clusters]
    if len({len(c) for c in clusters}) > 1:
        raise InvalidArgument("clusters V_1..V_t must all have the same size")
    edges = []
    for i, j, l in itertools.combinations(range(len(clusters)), 3):
        Vi, Vj, Vl = clusters[i], clusters[j], clusters[l]
        if tripartite_density(H, Vi, Vj, Vl) < d:
            continue
        ok, _ = is_epsilon_regular(H, Vi, Vj, Vl, eps)
        if ok:
            edges.append((i, j, l))
    return Hypergraph3(len(clusters), edges)
