"""Fractional hom(K)-tilings: verification, standard weights, gadgets, conversion.

A weighting assigns an exact rational ``h(v, e)`` to vertex-edge pairs.  It
is a fractional hom(K)-tiling when weights vanish off incidences, each vertex
carries total weight at most one, and every edge's three weights can be
labeled ``h_u <= h_v <= h_w`` with ``h_u/a >= h_v/b >= h_w/c``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .core import Hypergraph3, VertexPartition
from .errors import InvalidArgument, NotApplicable
from .kspec import KSpec, as_spec
from .tiler import GreedyResult, KCopy, Tiling, greedy_regular_tiling

Edge = tuple[int, int, int]


@dataclass(frozen=True)
class FractionalHomTiling:
    """Exact weights ``h(v, e)`` on a host; absent pairs are zero."""

    host: Hypergraph3
    weights: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (v, e), w in dict(self.weights).items():
            e = tuple(sorted(e))
            w = Fraction(w)
            if w != 0:
                clean[(int(v), e)] = clean.get((int(v), e), 0) + w
        object.__setattr__(self, "weights", clean)

    def edge_weights(self, e: Iterable[int]) -> tuple[Fraction, Fraction, Fraction]:
        e = tuple(sorted(e))
        return tuple(self.weights.get((v, e), Fraction(0)) for v in e)

    def vertex_totals(self) -> dict[int, Fraction]:
        h = {v: Fraction(0) for v in range(self.host.n)}
        for (v, _), w in self.weights.items():
            h[v] = h.get(v, Fraction(0)) + w
        return h

    @property
    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def relabel(self, perm) -> "FractionalHomTiling":
        H = self.host.relabel(perm)
        w = {(perm[v], tuple(perm[x] for x in e)): val for (v, e), val in self.weights.items()}
        return FractionalHomTiling(H, w)


@dataclass(frozen=True)
class Verification:
    valid: bool
    weight: Fraction
    hmin: Fraction | None
    violation: str | None = None

    def __bool__(self):
        return self.valid


def _admissible(ws, s: KSpec) -> bool:
    a, b, c = s.sizes
    for p, q, r in itertools.permutations(ws):
        if p <= q <= r and p * b >= q * a and q * c >= r * b:
            return True
    return False


def verify(ft: FractionalHomTiling, spec) -> Verification:
    """Check the three defining conditions exactly, plus the range ``[0, 1]``."""
    s = as_spec(spec)
    H = ft.host
    weight = ft.total
    positive = [w for w in ft.weights.values() if w > 0]
    hmin = min(positive) if positive else None
    for (v, e), w in ft.weights.items():
        if not 0 <= v < H.n:
            raise InvalidArgument(f"vertex {v} out of range")
        if e not in H.edges:
            raise InvalidArgument(f"edge {e} is not an edge of the host")
        if w < 0 or w > 1:
            return Verification(False, weight, hmin, f"h({v}, {e}) = {w} outside [0, 1]")
        if v not in e:
            return Verification(False, weight, hmin, f"condition (1): h({v}, {e}) = {w} but {v} not in edge")
    for v, tot in sorted(ft.vertex_totals().items()):
        if tot > 1:
            return Verification(False, weight, hmin, f"condition (2): h({v}) = {tot} > 1")
    touched = {e for (_, e) in ft.weights}
    for e in sorted(touched):
        if not _admissible(ft.edge_weights(e), s):
            return Verification(False, weight, hmin, f"condition (3): no admissible labeling of {e}")
    return Verification(True, weight, hmin)


def _k_layout(s: KSpec, offset: int = 0) -> tuple[tuple, tuple, tuple]:
    a, b, c = s.sizes
    X = tuple(range(offset, offset + a))
    Y = tuple(range(offset + a, offset + a + b))
    Z = tuple(range(offset + a + b, offset + a + b + c))
    return X, Y, Z


def _standard(s: KSpec, X, Y, Z) -> dict:
    a, b, c = s.sizes
    wx, wy, wz = Fraction(1, b * c), Fraction(1, a * c), Fraction(1, a * b)
    w = {}
    for x, y, z in itertools.product(X, Y, Z):
        e = tuple(sorted((x, y, z)))
        w[(x, e)], w[(y, e)], w[(z, e)] = wx, wy, wz
    return w


def standard_weighting(spec) -> FractionalHomTiling:
    """Standard weight ``(1/bc, 1/ac, 1/ab)`` on every edge of K_{a,b,c} itself."""
    s = as_spec(spec)
    X, Y, Z = _k_layout(s)
    H = Hypergraph3(s.k, itertools.product(X, Y, Z))
    return FractionalHomTiling(H, _standard(s, X, Y, Z))


@dataclass(frozen=True)
class GadgetResult:
    graph: Hypergraph3
    tiling: FractionalHomTiling
    weight: Fraction
    hmin: Fraction
    case_label: str
    link_triples: int
    copies: tuple = ()
    extra: tuple = ()  # u, or (u, u')

    def vertex_totals(self) -> dict[int, Fraction]:
        return self.tiling.vertex_totals()


def _assign(w: dict, labeled: tuple, values: tuple):
    """Set ``h`` on the edge spanned by ``labeled`` to ``values`` coordinatewise."""
    e = tuple(sorted(labeled))
    if len(set(e)) != 3:
        raise InvalidArgument(f"degenerate edge {labeled}")
    for v, val in zip(labeled, values):
        w[(v, e)] = Fraction(val)


def _finish(s: KSpec, edges: set, w: dict, n: int, label: str, links: int, copies, extra) -> GadgetResult:
    H = Hypergraph3(n, edges)
    ft = FractionalHomTiling(H, w)
    res = verify(ft, s)
    if not res.valid:
        raise AssertionError(f"gadget {label} for {s} failed verification: {res.violation}")
    return GadgetResult(H, ft, res.weight, res.hmin, label, links, tuple(copies), tuple(extra))


L1_CASES = ("z", "y-a<b", "y-a=b")
_L1_ALIASES = {
    "z": "z", "z-neighbor": "z", "Z-neighbor": "z",
    "y-a<b": "y-a<b", "Y-neighbor-a<b": "y-a<b", "y-neighbor-a<b": "y-a<b",
    "y-a=b": "y-a=b", "Y-neighbor-a=b": "y-a=b", "y-neighbor-a=b": "y-a=b",
}


def l1_cases(spec) -> list[str]:
    s = as_spec(spec)
    if s.a == s.c:
        return []
    return ["z", "y-a<b" if s.a < s.b else "y-a=b"]


def gadget_L1(spec, case: str) -> GadgetResult:
    """Smallest host with one copy of K and two outside vertices ``u, u'``, with its weighting.

    ``u u'`` gets ``a + 1`` common neighbours in the copy: all of ``X`` plus
    one vertex of ``Z`` (case ``"z"``) or of ``Y`` (the two ``y`` cases).
    """
    s = as_spec(spec)
    a, b, c = s.sizes
    if a == c:
        raise NotApplicable("the L1 gadget needs a < c")
    label = _L1_ALIASES.get(case)
    if label is None:
        raise InvalidArgument(f"unknown L1 case {case!r}; choose from {L1_CASES}")
    if label == "y-a<b" and a == b:
        raise InvalidArgument("case y-a<b needs a < b")
    if label == "y-a=b" and a != b:
        raise InvalidArgument("case y-a=b needs a = b")
    X, Y, Z = _k_layout(s)
    u, u2 = s.k, s.k + 1
    x, y, z = X[0], Y[0], Z[0]
    hub = z if label == "z" else y
    edges = set(itertools.product(X, Y, Z))
    for v in (*X, hub):
        edges.add((v, u, u2))
    w = _standard(s, X, Y, Z)
    std = (Fraction(1, b * c), Fraction(1, a * c), Fraction(1, a * b))
    if label == "z":
        _assign(w, (z, u, u2), std)
        scale = Fraction(c - a, a * b * c * c)
        _assign(w, (x, y, z), (scale * a, scale * b, scale * c))
    elif label == "y-a<b":
        _assign(w, (y, u, u2), std)
        scale = Fraction(b - a, a * b * b * c)
        _assign(w, (x, y, z), (scale * a, scale * b, scale * c))
    else:
        t = (Fraction(1, 2 * a * c), Fraction(1, 2 * a * c), Fraction(1, 2 * a * a))
        _assign(w, (x, u, u2), t)
        _assign(w, (y, u, u2), t)
        _assign(w, (x, y, z), t)
    copy = KCopy.from_parts(X, Y, Z)
    return _finish(s, edges, w, s.k + 2, label, a + 1, [copy], (u, u2))


L2_CASES = ("1-zz", "1.1-zy", "1.1-yy+zx", "1.2-two-zx-zy", "1.2-cross", "2.1", "2.2", "2.3")


def l2_cases(spec) -> list[str]:
    """Case labels whose equality pattern matches ``spec`` (requires ``a < c``)."""
    s = as_spec(spec)
    a, b, c = s.sizes
    if a == c:
        return []
    out = []
    if b < c:
        out.append("1-zz")
        if a < b:
            out += ["1.1-zy", "1.1-yy+zx"]
        else:
            out += ["1.2-two-zx-zy", "1.2-cross"]
    else:
        out += ["2.1", "2.2", "2.3"]
    return out


def l2_variants(spec, case: str) -> list[bool]:
    """Feasible values of ``coincident`` for a case (only two cases have a choice)."""
    s = as_spec(spec)
    if case == "1.2-two-zx-zy":
        return [False, True] if s.a >= 2 else [False]
    if case == "2.3":
        return [False, True]
    return [False]


def l2_link_threshold(spec) -> int:
    s = as_spec(spec)
    a, b, c = s.sizes
    return max(a * a + 2 * a * (b + c), (a + b) ** 2) + 1


_FORBIDDEN = {
    "1.1-zy": ("ZZ",),
    "1.1-yy+zx": ("ZZ", "ZY", "YZ"),
    "1.2-two-zx-zy": ("ZZ",),
    "1.2-cross": ("ZZ", "ZY", "YZ"),
    "2.3": ("YX", "YY"),
}


def gadget_L2(spec, case: str, coincident: bool = False) -> GadgetResult:
    """Host with two copies ``K1, K2`` of K plus ``u``, and the case's weighting.

    The link of ``u`` holds the pairs the case uses plus filler pairs (never
    of the classes the case assumes absent) up to the family's minimum of
    ``max{a^2 + 2a(b+c), (a+b)^2} + 1`` triples.  ``coincident`` selects the
    variant where the two distinguished class vertices coincide (cases
    ``1.2-two-zx-zy`` and ``2.3``).
    """
    s = as_spec(spec)
    a, b, c = s.sizes
    if a == c:
        raise NotApplicable("the L2 gadget needs a < c")
    if case not in L2_CASES:
        raise InvalidArgument(f"unknown L2 case {case!r}; choose from {L2_CASES}")
    if case not in l2_cases(s):
        raise InvalidArgument(f"case {case} does not match the equality pattern of {s}")
    if coincident not in l2_variants(s, case):
        raise InvalidArgument(f"coincident={coincident} is infeasible for case {case} with {s}")
    k = s.k
    X1, Y1, Z1 = _k_layout(s, 0)
    X2, Y2, Z2 = _k_layout(s, k)
    u = 2 * k
    lam = Fraction(1, a * b * c)
    ac = Fraction(a, c) * lam
    bc = Fraction(b, c) * lam
    iac, ibc, iab = Fraction(1, a * c), Fraction(1, b * c), Fraction(1, a * b)
    x1, y1, z1 = X1[0], Y1[0], Z1[0]
    x2, y2, z2 = X2[0], Y2[0], Z2[0]
    w = {**_standard(s, X1, Y1, Z1), **_standard(s, X2, Y2, Z2)}
    links: list[tuple[int, int]] = []

    if case == "1-zz":
        links = [(z1, z2)]
        _assign(w, (u, z1, z2), (lam, lam, lam))
        _assign(w, (x1, y1, z1), (ibc, iac, iab - lam))
        _assign(w, (x2, y2, z2), (ibc, iac, iab - lam))
    elif case == "1.1-zy":
        links = [(z1, y2)]
        _assign(w, (y2, z1, u), (ac, bc, lam))
        _assign(w, (x1, y1, z1), (ibc, iac, iab - bc))
        _assign(w, (x2, y2, z2), (ibc, iac - ac, iab - Fraction(a, b) * lam))
    elif case == "1.1-yy+zx":
        links = [(y1, y2), (z1, x2)]
        _assign(w, (y1, y2, u), (bc, bc, lam))
        _assign(w, (x2, u, z1), (ac, bc, lam))
        _assign(w, (x1, y1, z1), (ibc, iac - bc, iab - lam))
        _assign(w, (x2, y2, z2), (ibc - ac, iac - bc, iab - lam))
    elif case == "1.2-two-zx-zy":
        # a = b: X and Y weights coincide
        z1b = z1 if coincident else Z1[1]
        x1b = X1[1] if coincident else x1
        links = [(z1, x2), (z1b, y2)]
        _assign(w, (z1, x2, u), (ac, ac, lam))
        _assign(w, (z1b, y2, u), (ac, ac, lam))
        first = (iac, iac, Fraction(1, a * a) - ac)
        _assign(w, (x1, y1, z1), first)
        _assign(w, (x1b, y1, z1b), first)
        _assign(w, (x2, y2, z2), (iac - ac, iac - ac, Fraction(1, a * a) - lam))
    elif case == "1.2-cross":
        links = [(z1, x2), (x1, z2), (y1, y2)]
        t = (ac, ac, lam)
        _assign(w, (u, x2, z1), t)
        _assign(w, (u, x1, z2), t)
        _assign(w, (y1, y2, u), t)
        inner = (iac - ac, iac - ac, Fraction(1, a * a) - lam)
        _assign(w, (x1, y1, z1), inner)
        _assign(w, (x2, y2, z2), inner)
    elif case == "2.1":
        links = [(z1, z2), (y1, x2)]
        _assign(w, (u, z1, z2), (lam, lam, lam))
        _assign(w, (x2, y1, u), (ac, lam, lam))
        _assign(w, (x1, y1, z1), (Fraction(1, c * c), iac - lam, iac - lam))
        _assign(w, (x2, y2, z2), (Fraction(1, c * c) - ac, iac - lam, iac - lam))
    elif case == "2.2":
        links = [(z1, z2), (y1, y2)]
        _assign(w, (u, z1, z2), (lam, lam, lam))
        _assign(w, (u, y1, y2), (lam, lam, lam))
        t = (Fraction(1, c * c), iac - lam, iac - lam)
        _assign(w, (x1, y1, z1), t)
        _assign(w, (x2, y2, z2), t)
    else:  # 2.3
        z2b = z2 if coincident else Z2[1]
        y2b = Y2[1] if coincident else y2
        links = [(z1, z2), (y1, z2b)]
        _assign(w, (z2, u, z1), (ac, lam, lam))
        _assign(w, (z2b, u, y1), (ac, lam, lam))
        _assign(w, (x1, y1, z1), (Fraction(1, c * c), iac - lam, iac - lam))
        t = (Fraction(1, c * c), iac - ac, iac - ac)
        _assign(w, (x2, y2, z2), t)
        _assign(w, (x2, y2b, z2b), t)

    cls1 = {v: "X" for v in X1} | {v: "Y" for v in Y1} | {v: "Z" for v in Z1}
    cls2 = {v: "X" for v in X2} | {v: "Y" for v in Y2} | {v: "Z" for v in Z2}
    banned = set(_FORBIDDEN.get(case, ()))
    for p, q in links:
        if cls1[p] + cls2[q] in banned:
            raise AssertionError(f"case {case} uses a pair it assumes absent")
    chosen = list(dict.fromkeys(links))
    need = l2_link_threshold(s)
    for p, q in itertools.product(range(k), range(k, 2 * k)):
        if len(chosen) >= need:
            break
        if (p, q) not in chosen and cls1[p] + cls2[q] not in banned:
            chosen.append((p, q))
    if len(chosen) < need:
        raise AssertionError(f"not enough admissible link pairs for case {case}")
    edges = set(itertools.product(X1, Y1, Z1)) | set(itertools.product(X2, Y2, Z2))
    edges |= {(u, p, q) for p, q in chosen}
    label = case + ("/coincident" if coincident else "")
    copies = [KCopy.from_parts(X1, Y1, Z1), KCopy.from_parts(X2, Y2, Z2)]
    return _finish(s, edges, w, 2 * k + 1, label, len(chosen), copies, (u,))


@dataclass
class Conversion:
    """Integer tiling obtained from a fractional tiling of a cluster graph."""

    tiling: Tiling
    per_edge: dict = field(default_factory=dict)

    @property
    def stalled_edges(self) -> list:
        return [e for e, g in self.per_edge.items() if g.stalled]

    @property
    def covered(self) -> int:
        return len(self.tiling.covered)


def _trimmed_sizes(ws, ell: int, s: KSpec) -> list[tuple[int, int]]:
    """Sizes ``floor(h*ell)`` per edge position, cut back to satisfy the ratio chain.

    Returns ``(position, size)`` pairs ordered by the admissible labeling.
    """
    a, b, c = s.sizes
    for perm in itertools.permutations(range(3)):
        p, q, r = (ws[i] for i in perm)
        if p <= q <= r and p * b >= q * a and q * c >= r * b:
            break
    else:
        raise InvalidArgument(f"weights {ws} admit no labeling")
    s0, s1, s2 = (int(ws[i] * ell) for i in perm)
    s1 = min(s1, b * s0 // a)
    s2 = min(s2, c * s1 // b)
    return list(zip(perm, (s0, s1, s2)))


def convert_fractional(H: Hypergraph3, P: VertexPartition, R: Hypergraph3, ft: FractionalHomTiling,
                       spec, eps) -> Conversion:
    """Turn a fractional hom(K)-tiling of the cluster graph ``R`` into a K-tiling of ``H``.

    Cluster ``i`` of ``R`` is ``P.clusters[i]``.  For every weighted edge each
    of its clusters gives up a fresh block of ``floor(h(u,e)*ell)`` vertices
    (blocks trimmed so the ratio chain holds), and the greedy tiler runs on
    the three blocks with ``eps' = b*c^2*eps``.
    """
    s = as_spec(spec)
    eps = Fraction(eps)
    clusters = [sorted(p) for p in P.clusters]
    if R.n != len(clusters):
        raise InvalidArgument("R must have one vertex per cluster")
    sizes = {len(p) for p in clusters}
    if len(sizes) > 1:
        raise InvalidArgument("clusters must be equal-sized")
    ell = sizes.pop() if sizes else 0
    if ft.host != R:
        raise InvalidArgument("the fractional tiling must live on R")
    res = verify(ft, s)
    if not res.valid:
        raise InvalidArgument(f"invalid fractional tiling: {res.violation}")
    cursor = [0] * R.n
    eps2 = s.b * s.c * s.c * eps
    copies: list[KCopy] = []
    per_edge = {}
    weighted = sorted({e for (_, e) in ft.weights})
    for e in weighted:
        ws = ft.edge_weights(e)
        if any(w == 0 for w in ws):
            continue
        blocks = [None, None, None]
        for pos, size in _trimmed_sizes(ws, ell, s):
            cl = e[pos]
            start = cursor[cl]
            if start + size > ell:
                raise InvalidArgument(f"cluster {cl} over-committed")
            blocks[pos] = clusters[cl][start:start + size]
            cursor[cl] = start + size
        order = sorted(range(3), key=lambda i: (len(blocks[i]), i))
        g = greedy_regular_tiling(H, *(blocks[i] for i in order), s, eps2)
        per_edge[e] = g
        copies.extend(g.tiling.copies)
    return Conversion(Tiling(tuple(copies)), per_edge)
