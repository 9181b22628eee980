"""Copies of K_{a,b,c}, exact tiling search, and the regular-triple greedy.

Vertex sets are handled as Python ``int`` bitmasks throughout; a 3-graph's
``pair_masks`` give, for every pair, the bitmask of vertices completing it
to an edge, so the third class of a copy is an AND of pair masks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import Hypergraph3
from .errors import InvalidArgument, SizeLimitError, guard_limit
from .kspec import KSpec, as_spec

COPY_LIMIT = 2_000_000
NODE_LIMIT = 2_000_000
LP_COPY_LIMIT = 60_000


def _mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _bits(m: int) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


@dataclass(frozen=True, order=True)
class KCopy:
    """A copy of K_{a,b,c}: three disjoint vertex classes.

    Classes are sorted tuples, ordered by (size, smallest vertex), so equal-size
    classes do not produce duplicate copies.
    """

    parts: tuple

    @classmethod
    def from_parts(cls, *parts: Iterable[int]) -> "KCopy":
        ps = [tuple(sorted(p)) for p in parts]
        if len(ps) != 3 or any(not p for p in ps):
            raise InvalidArgument("a copy needs three nonempty classes")
        ps.sort(key=lambda p: (len(p), p[0]))
        return cls(tuple(ps))

    @property
    def sizes(self) -> tuple[int, int, int]:
        return tuple(len(p) for p in self.parts)

    @property
    def vertices(self) -> frozenset:
        return frozenset(itertools.chain.from_iterable(self.parts))

    @property
    def mask(self) -> int:
        return _mask(itertools.chain.from_iterable(self.parts))

    def edges(self) -> Iterator[tuple[int, int, int]]:
        for t in itertools.product(*self.parts):
            yield tuple(sorted(t))

    def is_copy_in(self, H: Hypergraph3) -> bool:
        """Independent membership check: every cross triple is an edge of ``H``."""
        if len(self.vertices) != sum(self.sizes):
            return False
        return all(e in H.edges for e in self.edges())


class _Budget(Exception):
    pass


def _labeled_search(H: Hypergraph3, sizes: Sequence[int], allowed: Sequence[int],
                    forced: tuple[int, int] | None = None, symmetry: bool = True,
                    budget: list[int] | None = None) -> Iterator[tuple[tuple, tuple, tuple]]:
    """Yield labeled class triples ``(P0, P1, P2)`` with ``|Pi| = sizes[i]``.

    ``allowed[i]`` is a bitmask of vertices allowed in class ``i``.  With
    ``forced = (role, v)`` only triples with ``v`` in class ``role`` are
    produced.  ``symmetry`` breaks ties between equal-size classes by their
    smallest vertex (valid only for unforced searches with sorted sizes).
    """
    pm = H.pair_masks
    order = [0, 1, 2]
    if forced is not None:
        r = forced[0]
        order = [r] + [i for i in (0, 1, 2) if i != r]
        symmetry = False
    r0, r1, r2 = order
    s0, s1, s2 = sizes[r0], sizes[r1], sizes[r2]
    A0, A1, A2 = allowed[r0], allowed[r1], allowed[r2]
    sym01 = symmetry and s0 == s1
    sym12 = symmetry and s1 == s2

    if forced is not None:
        v = forced[1]
        if not (A0 >> v) & 1:
            return
        pool = [u for u in _bits(A0) if u != v]
        firsts = (tuple(sorted((v, *rest))) for rest in itertools.combinations(pool, s0 - 1))
    else:
        firsts = itertools.combinations(_bits(A0), s0)

    def relabel(P0, P1, P2):
        out = [None, None, None]
        out[r0], out[r1], out[r2] = P0, P1, P2
        return tuple(out)

    for P0 in firsts:
        used0 = _mask(P0)
        cands = [y for y in _bits(A1 & ~used0) if all(y in pm[x] for x in P0)]
        if sym01:
            cands = [y for y in cands if y > P0[0]]
        if len(cands) < s1:
            continue
        zbase = A2 & ~used0

        def pick(start, chosen, zmask):
            if budget is not None:
                budget[0] -= 1
                if budget[0] < 0:
                    raise _Budget
            if len(chosen) == s1:
                zpool = zmask & zbase & ~_mask(chosen)
                if sym12:
                    zpool &= ~((1 << (chosen[0] + 1)) - 1)
                zb = _bits(zpool)
                for P2 in itertools.combinations(zb, s2):
                    yield relabel(P0, tuple(chosen), P2)
                return
            need = s1 - len(chosen)
            for idx in range(start, len(cands) - need + 1):
                y = cands[idx]
                zm = zmask
                for x in P0:
                    zm &= pm[x][y]
                if (zm & zbase).bit_count() < s2:
                    continue
                yield from pick(idx + 1, chosen + [y], zm)

        yield from pick(0, [], zbase)


def iter_copies(H: Hypergraph3, spec, within: Iterable[int] | None = None,
                containing: int | None = None) -> Iterator[KCopy]:
    """Stream copies of K_{a,b,c} in ``H`` (optionally inside ``within``).

    Without ``containing`` every copy is produced exactly once, in a
    deterministic order.  With ``containing=v`` only copies through ``v`` are
    produced, sorted.
    """
    s = as_spec(spec)
    full = (1 << H.n) - 1 if within is None else _mask(within)
    sizes = s.sizes
    if containing is None:
        for P in _labeled_search(H, sizes, (full, full, full)):
            yield KCopy.from_parts(*P)
        return
    found = set()
    for role in dict.fromkeys(i for i in range(3)):
        if role > 0 and sizes[role] == sizes[role - 1]:
            continue  # equal-size classes: the earlier role already covers it
        for P in _labeled_search(H, sizes, (full, full, full), forced=(role, containing)):
            found.add(KCopy.from_parts(*P))
    yield from sorted(found)


def enumerate_copies(H: Hypergraph3, spec, limit: int | None = None, **kw) -> list[KCopy]:
    """All copies of K_{a,b,c} in ``H``, each once, in deterministic order."""
    limit = guard_limit(COPY_LIMIT) if limit is None else limit
    out = []
    for c in iter_copies(H, spec, **kw):
        out.append(c)
        if len(out) > limit:
            raise SizeLimitError(f"more than {limit} copies; use iter_copies to stream them")
    return out


def count_copies_through(H: Hypergraph3, spec, v: int) -> int:
    return sum(1 for _ in iter_copies(H, spec, containing=v))


@dataclass(frozen=True)
class Tiling:
    """Vertex-disjoint copies of K.  ``optimal`` is False for best-effort results."""

    copies: tuple = ()
    optimal: bool = True

    def __post_init__(self):
        object.__setattr__(self, "copies", tuple(self.copies))
        seen = 0
        for c in self.copies:
            m = c.mask
            if seen & m:
                raise InvalidArgument("tiling copies must be vertex-disjoint")
            seen |= m

    def __len__(self):
        return len(self.copies)

    @property
    def covered(self) -> frozenset:
        return frozenset(v for c in self.copies for v in c.vertices)

    def is_perfect(self, n: int) -> bool:
        return len(self.covered) == n

    def is_valid_in(self, H: Hypergraph3) -> bool:
        return all(c.is_copy_in(H) for c in self.copies)


@dataclass(frozen=True)
class PerfectTiling:
    exists: bool
    witness: Tiling | None = None

    def __bool__(self):
        return self.exists


def _lp_bound(n: int, masks: list[int]) -> float | None:
    """Optimum of the fractional packing LP, or None if it was not solved."""
    if not masks or len(masks) > LP_COPY_LIMIT:
        return None
    from scipy.optimize import linprog
    from scipy.sparse import csr_matrix

    rows, cols = [], []
    for j, m in enumerate(masks):
        for v in _bits(m):
            rows.append(v)
            cols.append(j)
    A = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, len(masks)))
    res = linprog(-np.ones(len(masks)), A_ub=A, b_ub=np.ones(n), bounds=(0, 1), method="highs")
    if res.status != 0:
        return None
    return -res.fun


class _Search:
    def __init__(self, n, k, masks, node_limit, perfect):
        self.n, self.k = n, k
        self.masks = masks
        self.verts = [_bits(m) for m in masks]
        self.node_limit = node_limit
        self.perfect = perfect
        self.goal = n  # vertices a perfect tiling must cover
        self.nodes = 0
        self.best: list[int] = []
        self.best_size = -1
        self.seen: dict[int, int] = {}

    def run(self, target_floor: int):
        # only strictly larger tilings than target_floor are of interest
        self.best_size = max(self.best_size, target_floor)
        self._rec(sum(1 << v for v in range(self.n)), list(range(len(self.masks))), [])

    def _rec(self, alive: int, cand: list[int], chosen: list[int]):
        self.nodes += 1
        if self.nodes > self.node_limit:
            raise _Budget
        if len(chosen) > self.best_size:
            self.best_size = len(chosen)
            self.best = list(chosen)
            if self.perfect and len(chosen) * self.k == self.goal:
                raise _Found
        if not cand:
            return
        cnt: dict[int, int] = {}
        for i in cand:
            for v in self.verts[i]:
                cnt[v] = cnt.get(v, 0) + 1
        coverable = _mask(cnt)
        if self.perfect and coverable != alive:
            return
        if len(chosen) + coverable.bit_count() // self.k <= self.best_size:
            return
        if self.seen.get(coverable, -1) >= len(chosen):
            return
        self.seen[coverable] = len(chosen)
        v = min(cnt, key=lambda u: (cnt[u], u))
        bit = 1 << v
        for i in cand:
            m = self.masks[i]
            if m & bit:
                self._rec(coverable & ~m, [j for j in cand if not self.masks[j] & m], chosen + [i])
        if not self.perfect:
            self._rec(coverable & ~bit, [j for j in cand if not self.masks[j] & bit], chosen)


class _Found(Exception):
    pass


def _greedy(masks: list[int]) -> list[int]:
    used, out = 0, []
    for i, m in enumerate(masks):
        if not used & m:
            used |= m
            out.append(i)
    return out


def max_tiling(H: Hypergraph3, spec, node_limit: int | None = None,
               copies: list[KCopy] | None = None) -> Tiling:
    """A maximum-cardinality K-tiling, certified by exhaustive branch and bound.

    Upper bounds: coverable vertices divided by ``k`` at every node, plus the
    fractional packing LP at the root.  Raises :class:`SizeLimitError` (with
    the best tiling so far, flagged non-optimal) when the node guard trips.
    """
    s = as_spec(spec)
    copies = enumerate_copies(H, s) if copies is None else copies
    masks = [c.mask for c in copies]
    k = s.k
    greedy = _greedy(masks)
    ub = _mask(v for m in masks for v in _bits(m)).bit_count() // k if masks else 0
    lp = _lp_bound(H.n, masks)
    if lp is not None:
        ub = min(ub, math.floor(lp + 1e-7))
    if len(greedy) >= ub:
        return Tiling(tuple(copies[i] for i in greedy))
    search = _Search(H.n, k, masks, guard_limit(NODE_LIMIT) if node_limit is None else node_limit, False)
    search.best, search.best_size = greedy, len(greedy)
    try:
        search._rec((1 << H.n) - 1, list(range(len(masks))), [])
    except _Budget:
        partial = Tiling(tuple(copies[i] for i in search.best), optimal=False)
        raise SizeLimitError(f"tiling search exceeded {search.node_limit} nodes", partial)
    return Tiling(tuple(copies[i] for i in search.best))


def has_perfect_tiling(H: Hypergraph3, spec, node_limit: int | None = None,
                       copies: list[KCopy] | None = None) -> PerfectTiling:
    """Decide whether ``H`` has a K-factor; the witness is returned when it does."""
    s = as_spec(spec)
    k = s.k
    if H.n % k:
        return PerfectTiling(False)
    if H.n == 0:
        return PerfectTiling(True, Tiling())
    copies = enumerate_copies(H, s) if copies is None else copies
    masks = [c.mask for c in copies]
    target = H.n // k
    covered = 0
    for m in masks:
        covered |= m
    if covered.bit_count() < H.n:
        return PerfectTiling(False)
    lp = _lp_bound(H.n, masks)
    if lp is not None and math.floor(lp + 1e-7) < target:
        return PerfectTiling(False)
    search = _Search(H.n, k, masks, guard_limit(NODE_LIMIT) if node_limit is None else node_limit, True)
    try:
        search.run(target - 1)
    except _Found:
        return PerfectTiling(True, Tiling(tuple(copies[i] for i in search.best)))
    except _Budget:
        raise SizeLimitError(f"perfect tiling search exceeded {search.node_limit} nodes")
    return PerfectTiling(False)


@dataclass
class GreedyResult:
    """Outcome of :func:`greedy_regular_tiling`.

    ``stop_reason`` is ``"threshold"`` (smallest residual fell below
    ``eps*|V3|``), ``"exhausted"`` (residual too small to hold the next piece)
    or ``"stalled"`` (no copy found although the residual was large enough).
    """

    tiling: Tiling
    stop_reason: str
    residual: tuple[int, int, int]
    trace: list = field(default_factory=list)
    invariant_checks: int = 0

    @property
    def stalled(self) -> bool:
        return self.stop_reason == "stalled"

    @property
    def leftover(self) -> int:
        return sum(self.residual)


def _ratio_chain(sizes, spec: KSpec) -> bool:
    # |U1|/a >= |U2|/b >= |U3|/c, cross-multiplied
    u1, u2, u3 = sizes
    return u1 * spec.b >= u2 * spec.a and u2 * spec.c >= u3 * spec.b


def find_tripartite_copy(H: Hypergraph3, sets: Sequence[Iterable[int]], sizes: Sequence[int],
                         budget: int = 200_000) -> tuple | None:
    """First ``(X, Y, Z)`` with ``X`` in ``sets[0]`` etc. spanning a complete 3-partite graph.

    Returns ``None`` if none exists or the search budget runs out.
    """
    allowed = [_mask(s) for s in sets]
    b = [budget]
    try:
        for P in _labeled_search(H, sizes, allowed, symmetry=False, budget=b):
            return P
    except _Budget:
        return None
    return None


def greedy_regular_tiling(H: Hypergraph3, V1, V2, V3, spec, eps) -> GreedyResult:
    """Greedy K-tiling of a (presumed regular) triple ``(V1, V2, V3)``.

    Residual classes are kept sorted by size.  While the largest and smallest
    residuals differ by at most ``c - a`` a K_{k,k,k} is removed (as three
    disjoint copies of K with rotated class roles); otherwise one copy takes
    ``a``, ``b``, ``c`` vertices from the smallest, middle and largest
    residual.  The loop stops once the smallest residual drops below
    ``eps*|V3|``.  When a K_{k,k,k} no longer fits, a single copy is taken
    instead.
    """
    s = as_spec(spec)
    eps = Fraction(eps)
    sets = [sorted(set(V)) for V in (V1, V2, V3)]
    if set(sets[0]) & set(sets[1]) or set(sets[0]) & set(sets[2]) or set(sets[1]) & set(sets[2]):
        raise InvalidArgument("V1, V2, V3 must be disjoint")
    sizes = [len(x) for x in sets]
    if not (sizes[0] <= sizes[1] <= sizes[2]):
        raise InvalidArgument("need |V1| <= |V2| <= |V3|")
    if not _ratio_chain(sizes, s):
        raise InvalidArgument("need |V1|/a >= |V2|/b >= |V3|/c")
    a, b, c = s.sizes
    threshold = eps * sizes[2]
    residual = [list(x) for x in sets]
    copies: list[KCopy] = []
    trace = []
    checks = 0

    def ordered():
        # stable sort by size keeps the original order on ties
        return sorted(range(3), key=lambda i: len(residual[i]))

    def take(idx_order, piece_sizes) -> bool:
        P = find_tripartite_copy(H, [residual[i] for i in idx_order], piece_sizes)
        if P is None:
            return False
        copies.append(KCopy.from_parts(*P))
        for i, part in zip(idx_order, P):
            drop = set(part)
            residual[i] = [v for v in residual[i] if v not in drop]
        return True

    reason = "threshold"
    while True:
        idx = ordered()
        u = [len(residual[i]) for i in idx]
        if u[0] < threshold:
            break
        equal_triple = u[2] - u[0] <= c - a
        if equal_triple and u[0] >= s.k:
            trace.append(("kkk", tuple(u)))
            for rot in ((a, b, c), (b, c, a), (c, a, b)):
                if not take(idx, rot):
                    reason = "stalled"
                    break
            if reason == "stalled":
                break
            continue
        if u[0] < a or u[1] < b or u[2] < c:
            reason = "exhausted"
            break
        trace.append(("abc", tuple(u)))
        held = _ratio_chain(u, s) and min(u) >= b + c
        if not take(idx, (a, b, c)):
            reason = "stalled"
            break
        if held and not equal_triple:
            after = sorted(len(x) for x in residual)
            checks += 1
            assert _ratio_chain(after, s), f"ratio invariant broken: {u} -> {after}"
    res = tuple(len(x) for x in residual)
    return GreedyResult(Tiling(tuple(copies)), reason, res, trace, checks)


def augment_universal(H: Hypergraph3, rho) -> Hypergraph3:
    """Add ``ceil(2*rho*n)`` new vertices and every triple meeting them."""
    rho = Fraction(rho)
    if rho < 0:
        raise InvalidArgument("rho must be nonnegative")
    extra = math.ceil(2 * rho * H.n)
    if extra == 0:
        return H
    N = H.n + extra
    new = [t for t in itertools.combinations(range(N), 3) if t[2] >= H.n]
    return Hypergraph3(N, itertools.chain(H.edges, new))


def factor_within(masks: Sequence[int], subset: int, n: int, k: int,
                  node_limit: int | None = None) -> list[int] | None:
    """Indices of copies (given as vertex bitmasks) forming a K-factor of ``subset``, or None.

    ``masks`` may include copies not inside ``subset``; they are ignored.
    """
    size = subset.bit_count()
    if size % k:
        return None
    if size == 0:
        return []
    cand = [i for i, m in enumerate(masks) if not m & ~subset]
    covered = 0
    for i in cand:
        covered |= masks[i]
    if covered != subset:
        return None
    search = _Search(n, k, list(masks), guard_limit(NODE_LIMIT) if node_limit is None else node_limit, True)
    search.best_size = size // k - 1
    search.goal = size
    try:
        search._rec(subset, cand, [])
    except _Found:
        return list(search.best)
    except _Budget:
        raise SizeLimitError(f"factor search exceeded {search.node_limit} nodes")
    return None
