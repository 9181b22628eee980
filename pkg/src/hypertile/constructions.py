"""Extremal 3-graphs that have no perfect K_{a,b,c}-tiling.

Each generator returns a :class:`BarrierInstance` carrying the host graph, its
defining vertex partition, the closed-form minimum vertex degree, and enough
data for :func:`check_certificate` to re-verify the obstruction.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from .core import Hypergraph3
from .errors import InfeasibleSize, InvalidArgument, NotApplicable
from .kspec import SIX_MINUS_FOUR_SQRT2, KSpec, QuadraticSurd, as_spec, space1_coefficient, space2_coefficient
from .tiler import KCopy, _bits, _mask, iter_copies

ENUMERATION_GUARD = 10**7
SAMPLE_SIZE = 10**5


class Kind(str, enum.Enum):
    SPACE_I = "space_I"
    SPACE_II = "space_II"
    DIV_I = "divisibility_I"
    DIV_II = "divisibility_II"
    DIV_III = "divisibility_III"
    TILING = "tiling"

    @classmethod
    def parse(cls, name) -> "Kind":
        if isinstance(name, Kind):
            return name
        key = str(name).strip()
        if key in SHORT_NAMES:
            return SHORT_NAMES[key]
        try:
            return cls(key)
        except ValueError:
            raise InvalidArgument(f"unknown construction kind {name!r}") from None


SHORT_NAMES = {
    "s1": Kind.SPACE_I,
    "s2": Kind.SPACE_II,
    "d1": Kind.DIV_I,
    "d2": Kind.DIV_II,
    "d3": Kind.DIV_III,
    "t": Kind.TILING,
}

ALL_KINDS = tuple(Kind)


@dataclass(frozen=True)
class BarrierInstance:
    """A generated barrier.

    ``parts`` lists the defining classes in order (``V1, V2`` for the two-part
    constructions; ``V1, V2, V3`` for the tiling barrier, whose apex is kept
    in ``apex``).
    """

    kind: Kind
    spec: KSpec
    n: int
    graph: Hypergraph3
    parts: tuple
    predicted_min_degree: int
    apex: int | None = None

    @property
    def part_sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)


@dataclass
class CertificateResult:
    """Verdict of :func:`check_certificate`; truthy iff the certificate holds.

    ``mode`` is ``"exhaustive"`` or ``"sampled"``; ``copies_checked`` counts the
    copies of K that were inspected.
    """

    valid: bool
    mode: str
    copies_checked: int
    reason: str
    counterexample: KCopy | None = None

    def __bool__(self):
        return self.valid


# ---------------------------------------------------------------- sizes


def _two_part_sizes(kind: Kind, s: KSpec, n: int) -> tuple[int, int]:
    k, a, b = s.k, s.a, s.b
    if kind is Kind.SPACE_I:
        v1 = a * n // k - 1
    elif kind is Kind.SPACE_II:
        v1 = (a + b) * n // k - 1
    elif kind is Kind.DIV_I:
        v1 = n // 2 + 1
    elif kind is Kind.DIV_II:
        if not (s.is_type0 or s.d % 2 == 0):
            raise NotApplicable(f"{s} is of odd type; the parity barrier does not apply")
        half = Fraction(n, 2)
        v2 = None
        for cand in range(math.ceil(half - 2), math.floor(half + 2) + 1):
            if cand % 2 == 1 and (s.g == 1 or cand % s.g):
                v2 = cand
                break
        if v2 is None:
            raise InfeasibleSize(f"no admissible |V2| for n={n}")
        v1 = n - v2
    elif kind is Kind.DIV_III:
        if s.is_type0 or s.d < 3 or s.d % 2 == 0:
            raise NotApplicable(f"{s} is not of odd type d >= 3")
        if n % k:
            raise InfeasibleSize(f"k={k} must divide n={n}")
        third = Fraction(n, 3)
        shift = n // k * a
        v1 = None
        for cand in range(math.ceil(third) - 1, math.ceil(third) + 2):
            if third - 1 <= cand <= third + 1 and (cand - shift) % s.d:
                v1 = cand
                break
        if v1 is None:
            raise InfeasibleSize(f"no admissible |V1| for n={n}")
    else:
        raise InvalidArgument(f"{kind} is not a two-part construction")
    v2 = n - v1
    if v1 < 1 or v2 < 1:
        raise InfeasibleSize(f"n={n} is too small for {kind.value} with {s}")
    return v1, v2


def _tiling_sizes(s: KSpec, n: int) -> tuple[int, int]:
    if s.a < 2:
        raise NotApplicable("the tiling barrier needs a >= 2")
    side = round((math.sqrt(2) - 1) * n)
    rest = n - 1 - 2 * side
    if side < 1 or rest < 0:
        raise InfeasibleSize(f"n={n} is too small for the tiling barrier")
    return side, rest


def part_sizes(kind, spec, n: int) -> tuple[int, ...]:
    """Class sizes the generator would use, without building the graph."""
    kind, s = Kind.parse(kind), as_spec(spec)
    if n < s.k:
        raise InfeasibleSize(f"need n >= k = {s.k}")
    if kind is Kind.TILING:
        side, rest = _tiling_sizes(s, n)
        return (side, side, rest)
    return _two_part_sizes(kind, s, n)


# ---------------------------------------------------------------- degrees


def _c2(x: int) -> int:
    return comb(x, 2) if x >= 2 else 0


def predicted_degree(kind, spec, n: int) -> int:
    """Exact minimum vertex degree of the generated instance."""
    kind = Kind.parse(kind)
    sizes = part_sizes(kind, spec, n)
    if kind is Kind.TILING:
        s, _, t = sizes
        return min(s * s, s + _c2(s + t - 1), _c2(2 * s + t - 1) - s * s)
    v1, v2 = sizes
    if kind is Kind.SPACE_I:
        return _c2(n - 1) - _c2(v2 - 1)
    if kind is Kind.SPACE_II:
        return min(_c2(v1), _c2(v1 - 1) + (v1 - 1) * v2)
    if kind is Kind.DIV_I:
        return min(_c2(v1 - 1), _c2(v2 - 1))
    if kind is Kind.DIV_II:
        return min(_c2(v1 - 1) + _c2(v2), v1 * (v2 - 1))
    return min(v1 * (v2 - 1), _c2(v2))  # DIV_III


def kind_coefficient(kind, spec) -> QuadraticSurd:
    """Limit of ``predicted_degree / C(n, 2)`` as ``n`` grows."""
    kind, s = Kind.parse(kind), as_spec(spec)
    table = {
        Kind.SPACE_I: space1_coefficient(s),
        Kind.SPACE_II: space2_coefficient(s),
        Kind.DIV_I: Fraction(1, 4),
        Kind.DIV_II: Fraction(1, 2),
        Kind.DIV_III: Fraction(4, 9),
    }
    if kind is Kind.TILING:
        return SIX_MINUS_FOUR_SQRT2
    return QuadraticSurd(table[kind])


def applicable_kinds(spec) -> list[Kind]:
    s = as_spec(spec)
    out = [Kind.SPACE_I, Kind.SPACE_II, Kind.DIV_I]
    if s.is_type0 or s.d % 2 == 0:
        out.append(Kind.DIV_II)
    if not s.is_type0 and s.d >= 3 and s.d % 2 == 1:
        out.append(Kind.DIV_III)
    if s.a >= 2:
        out.append(Kind.TILING)
    return out


def smallest_feasible_n(kind, spec, multiple_of_k: bool = True, limit: int = 10_000) -> int:
    kind, s = Kind.parse(kind), as_spec(spec)
    step = s.k if multiple_of_k else 1
    for n in range(s.k, limit + 1, step):
        try:
            part_sizes(kind, s, n)
            return n
        except InfeasibleSize:
            continue
    raise InfeasibleSize(f"no feasible n <= {limit}")


# ---------------------------------------------------------------- generators


def _edges_by_rule(n: int, inside: Sequence[int], rule) -> list[tuple[int, int, int]]:
    mark = [False] * n
    for v in inside:
        mark[v] = True
    return [t for t in itertools.combinations(range(n), 3) if rule(mark[t[0]] + mark[t[1]] + mark[t[2]])]


def generate(kind, spec, n: int) -> BarrierInstance:
    """Build the barrier of the given kind on ``n`` vertices; ``V1`` takes the lowest labels."""
    kind, s = Kind.parse(kind), as_spec(spec)
    sizes = part_sizes(kind, s, n)
    pred = predicted_degree(kind, s, n)
    if kind is Kind.TILING:
        side, _, rest = sizes
        V1 = tuple(range(side))
        V2 = tuple(range(side, 2 * side))
        V3 = tuple(range(2 * side, 2 * side + rest))
        apex = n - 1
        in1 = set(V1)
        in2 = set(V2)
        body = [
            t for t in itertools.combinations(range(n - 1), 3)
            if not any(v in in1 for v in t) or not any(v in in2 for v in t)
        ]
        links = [(x, y, apex) for x in V1 for y in V2]
        G = Hypergraph3(n, body + links)
        return BarrierInstance(kind, s, n, G, (V1, V2, V3), pred, apex)
    v1, _ = sizes
    V1, V2 = tuple(range(v1)), tuple(range(v1, n))
    if kind is Kind.SPACE_I:
        edges = _edges_by_rule(n, V1, lambda j: j >= 1)
    elif kind is Kind.SPACE_II:
        edges = _edges_by_rule(n, V1, lambda j: j >= 2)
    elif kind is Kind.DIV_I:
        edges = _edges_by_rule(n, V1, lambda j: j in (0, 3))
    elif kind is Kind.DIV_II:
        edges = _edges_by_rule(n, V2, lambda j: j in (0, 2))
    else:
        edges = _edges_by_rule(n, V1, lambda j: j == 1)
    return BarrierInstance(kind, s, n, Hypergraph3(n, edges), (V1, V2), pred)


# ---------------------------------------------------------------- certificates


def _labeled_candidates(n: int, s: KSpec) -> int:
    a, b, c = s.sizes
    if a + b + c > n:
        return 0
    return comb(n, a) * comb(n - a, b) * comb(n - a - b, c)


def sample_copies(H: Hypergraph3, spec, count: int, seed: int = 0, attempts_per_copy: int = 4) -> list[KCopy]:
    """Randomised copy sampler (heuristic): grow random classes inside common neighbourhoods."""
    s = as_spec(spec)
    rng = np.random.default_rng(seed)
    pm = H.pair_masks
    a, b, c = s.sizes
    out = []
    for _ in range(count * attempts_per_copy):
        if len(out) >= count:
            break
        perm = rng.permutation(H.n)
        X = [int(v) for v in perm[:a]]
        used = _mask(X)
        Y, zmask = [], (1 << H.n) - 1
        for v in perm[a:]:
            v = int(v)
            if len(Y) == b:
                break
            if all(v in pm[x] for x in X):
                zm = zmask
                for x in X:
                    zm &= pm[x][v]
                if (zm & ~used & ~(1 << v)).bit_count() >= c:
                    Y.append(v)
                    zmask = zm
                    used |= 1 << v
        if len(Y) < b:
            continue
        pool = _bits(zmask & ~used)
        if len(pool) < c:
            continue
        Z = sorted(int(v) for v in rng.choice(pool, size=c, replace=False))
        out.append(KCopy.from_parts(X, Y, Z))
    return out


def _class_rule(inst: BarrierInstance):
    """Per-copy predicate for the instance's kind, returning None when the copy is fine."""
    s, kind = inst.spec, inst.kind
    a, b, c = s.sizes
    if kind in (Kind.SPACE_I, Kind.SPACE_II):
        V1 = set(inst.parts[0])
        need = 1 if kind is Kind.SPACE_I else 2

        def rule(cp: KCopy):
            inside = sum(1 for p in cp.parts if set(p) <= V1)
            return None if inside >= need else f"only {inside} classes inside V1"
    elif kind is Kind.DIV_I:
        V1, V2 = set(inst.parts[0]), set(inst.parts[1])

        def rule(cp: KCopy):
            vs = cp.vertices
            return None if vs <= V1 or vs <= V2 else "copy meets both parts"
    elif kind is Kind.DIV_II:
        V2 = set(inst.parts[1])
        allowed = {0, a + b, a + c, b + c}

        def rule(cp: KCopy):
            hit = len(cp.vertices & V2)
            return None if hit in allowed else f"copy meets V2 in {hit} vertices"
    elif kind is Kind.DIV_III:
        V1 = set(inst.parts[0])

        def rule(cp: KCopy):
            hit = len(cp.vertices & V1)
            if hit not in (a, b, c) or (hit - a) % s.d:
                return f"copy meets V1 in {hit} vertices"
            return None
    else:
        apex = inst.apex

        def rule(cp: KCopy):
            return "copy contains the apex" if apex in cp.vertices else None
    return rule


def _arithmetic(inst: BarrierInstance) -> tuple[bool, str]:
    s, kind, n = inst.spec, inst.kind, inst.n
    a, b, c = s.sizes
    k = s.k
    if kind is Kind.SPACE_I:
        cover = k * (len(inst.parts[0]) // a)
        return cover < n, f"coverage at most {cover} < n = {n}"
    if kind is Kind.SPACE_II:
        cover = k * (len(inst.parts[0]) // (a + b))
        return cover < n, f"coverage at most {cover} < n = {n}"
    if kind is Kind.DIV_I:
        v1, v2 = inst.part_sizes
        ok = n % k != 0 or (v1 % k != 0 and v2 % k != 0)
        return ok, f"|V1| = {v1}, |V2| = {v2} mod k = {k}"
    if kind is Kind.DIV_II:
        v2 = inst.part_sizes[1]
        if s.g > 1:
            return v2 % s.g != 0, f"gcd {s.g} does not divide |V2| = {v2}"
        ok = (a + b) % 2 == 0 and (a + c) % 2 == 0 and v2 % 2 == 1
        return ok, f"all copy traces on V2 even, |V2| = {v2} odd"
    if kind is Kind.DIV_III:
        v1 = inst.part_sizes[0]
        if n % k:
            return True, "k does not divide n"
        resid = v1 - n // k * a
        return resid % s.d != 0, f"d = {s.d} does not divide |V1| - na/k = {resid}"
    return True, "apex lies in no copy"


def check_certificate(inst: BarrierInstance, spec=None, seed: int = 0,
                      guard: int = ENUMERATION_GUARD, samples: int = SAMPLE_SIZE) -> CertificateResult:
    """Re-verify the instance's obstruction to a perfect tiling.

    The per-copy class condition is checked on every copy when the labeled
    candidate count is at most ``guard``; otherwise on ``samples`` randomly
    grown copies, and the result says so.  The tiling barrier is always
    exhaustive since only copies through the apex matter.
    """
    s = inst.spec if spec is None else as_spec(spec)
    if s != inst.spec:
        inst = BarrierInstance(inst.kind, s, inst.n, inst.graph, inst.parts, inst.predicted_min_degree, inst.apex)
    ok, why = _arithmetic(inst)
    if not ok:
        return CertificateResult(False, "exhaustive", 0, "arithmetic condition fails: " + why)
    rule = _class_rule(inst)
    H = inst.graph
    if inst.kind is Kind.TILING:
        source, mode = iter_copies(H, s, containing=inst.apex), "exhaustive"
    elif _labeled_candidates(H.n, s) <= guard:
        source, mode = iter_copies(H, s), "exhaustive"
    else:
        source, mode = sample_copies(H, s, samples, seed), "sampled"
    checked = 0
    for cp in source:
        checked += 1
        bad = rule(cp)
        if bad is not None:
            return CertificateResult(False, mode, checked, bad, cp)
    return CertificateResult(True, mode, checked, why)


# ---------------------------------------------------------------- r-uniform space barrier


@dataclass(frozen=True)
class UniformHypergraph:
    """An r-uniform hypergraph on ``range(n)`` with edges stored as sorted tuples."""

    n: int
    r: int
    edges: frozenset = field(default_factory=frozenset)

    def degree(self, S) -> int:
        S = set(S)
        return sum(1 for e in self.edges if S.issubset(e))

    def min_degree(self, d: int) -> int:
        if not 1 <= d < self.r:
            raise InvalidArgument(f"need 1 <= d < r, got d={d}")
        counts: dict[tuple, int] = {}
        for e in self.edges:
            for sub in itertools.combinations(e, d):
                counts[sub] = counts.get(sub, 0) + 1
        return min((counts.get(S, 0) for S in itertools.combinations(range(self.n), d)), default=0)


@dataclass(frozen=True)
class GeneralSpaceBarrier:
    graph: UniformHypergraph
    A: tuple
    B: tuple
    i: int
    sizes: tuple

    def predicted_min_degree(self, d: int) -> int:
        return general_predicted_degree(self.graph.r, self.i, len(self.A), self.graph.n, d)


def _general_a_size(r: int, i: int, sizes: Sequence[int], n: int) -> int:
    sizes = list(sizes)
    if len(sizes) != r or any(x < 1 for x in sizes) or sizes != sorted(sizes):
        raise InvalidArgument("sizes must be r nondecreasing positive integers")
    if not 1 <= i < r:
        raise InvalidArgument("need 1 <= i < r")
    return sum(sizes[:i]) * n // sum(sizes) - 1


def general_predicted_degree(r: int, i: int, a_size: int, n: int, d: int) -> int:
    """Minimum ``d``-degree of the r-graph whose edges meet ``A`` in at least ``i`` vertices."""
    b_size = n - a_size
    best = None
    for j in range(0, d + 1):
        if j > a_size or d - j > b_size:
            continue
        deg = sum(
            comb(a_size - j, t) * comb(b_size - (d - j), r - d - t)
            for t in range(max(0, i - j), r - d + 1)
        )
        best = deg if best is None else min(best, deg)
    return 0 if best is None else best


def generate_general(r: int, i: int, sizes: Sequence[int], n: int) -> GeneralSpaceBarrier:
    """r-uniform space barrier: every edge has at least ``i`` vertices in ``A``."""
    a_size = _general_a_size(r, i, sizes, n)
    if a_size < 1 or a_size >= n:
        raise InfeasibleSize(f"n={n} too small for this barrier")
    A = tuple(range(a_size))
    edges = frozenset(e for e in itertools.combinations(range(n), r) if sum(1 for v in e if v < a_size) >= i)
    return GeneralSpaceBarrier(UniformHypergraph(n, r, edges), A, tuple(range(a_size, n)), i, tuple(sizes))
