"""Acceptance suite: thirteen end-to-end criteria, each with its own oracle.

Every test records a one-line verdict; ``conftest.py`` prints the collected
lines at the end of the run (they are also printed inline under ``-s``).
"""

from __future__ import annotations

import itertools
import math
import random
import time
from fractions import Fraction
from functools import lru_cache

import numpy as np
import pytest

from hypertile import absorb, constructions, core, fractional, kspec, lattice, tiler
from hypertile.core import Hypergraph3, VertexPartition
from hypertile.kspec import KSpec, QuadraticSurd

from .helpers import record_criterion

# ---------------------------------------------------------------- shared oracles


def sqrt2_surd_gt(p: Fraction, q: Fraction, r: Fraction) -> bool:
    """Exact test ``p + q*sqrt(2) > r`` for rationals (q of either sign)."""
    lhs = p - r  # need lhs + q*sqrt2 > 0
    if q == 0:
        return lhs > 0
    if q > 0:
        return lhs >= 0 or 2 * q * q > lhs * lhs
    return lhs > 0 and lhs * lhs > 2 * q * q


def oracle_f(a: int, b: int, c: int) -> tuple[Fraction, Fraction]:
    """f as ``(p, q)`` meaning ``p + q*sqrt(2)``, transcribed case by case."""
    g = math.gcd(a, math.gcd(b, c))
    d = math.gcd(b - a, c - b)
    if a == 1 and g == 1 and d == 1:
        return Fraction(1, 4), Fraction(0)
    if a >= 2 and g == 1 and d == 1:
        return Fraction(6), Fraction(-4)
    if g == 1 and d >= 3 and d % 2 == 1:
        return Fraction(4, 9), Fraction(0)
    return Fraction(1, 2), Fraction(0)


def oracle_threshold(a, b, c):
    k = a + b + c
    p, q = oracle_f(a, b, c)
    s1 = 1 - Fraction(b + c, k) ** 2
    s2 = Fraction(a + b, k) ** 2
    best_rational = max(s1, s2)
    if q and sqrt2_surd_gt(p, q, best_rational):
        return (p, q)
    if not q and p > best_rational:
        return (p, Fraction(0))
    return (best_rational, Fraction(0))


def oracle_codegree(a, b, c):
    k = a + b + c
    g = math.gcd(a, math.gcd(b, c))
    if g > 1 or a == b == c == 1:
        return Fraction(1, 2)
    d = math.gcd(b - a, c - b)
    if d == 1:
        return Fraction(a, k)
    p = next(x for x in range(2, d + 1) if d % x == 0)
    return max(Fraction(a, k), Fraction(1, p))


def surd_pair(x: QuadraticSurd) -> tuple[Fraction, Fraction]:
    return Fraction(x.p), Fraction(x.q)


def brute_min_degree(n, edges) -> int:
    deg = [0] * n
    for e in edges:
        for v in e:
            deg[v] += 1
    return min(deg)


def brute_copies_111(n, edges):
    return [frozenset(e) for e in edges]


def brute_copies_112(n, edges):
    """4-sets {x,y,z,w} holding edges xyz and xyw for some pair xy."""
    E = set(edges)
    out = set()
    for quad in itertools.combinations(range(n), 4):
        for x, y in itertools.combinations(quad, 2):
            z, w = (v for v in quad if v not in (x, y))
            if tuple(sorted((x, y, z))) in E and tuple(sorted((x, y, w))) in E:
                out.add(frozenset(quad))
                break
    return list(out)


def brute_max_packing(n, copies) -> int:
    """Maximum number of disjoint sets: branch on the lowest vertex (skip it or cover it)."""
    by_min = [[] for _ in range(n)]
    for cp in copies:
        by_min[min(cp)].append(sum(1 << v for v in cp))

    @lru_cache(maxsize=None)
    def best(v, used):
        if v == n:
            return 0
        if used >> v & 1:
            return best(v + 1, used)
        top = best(v + 1, used)  # leave v uncovered
        for m in by_min[v]:  # copies whose smallest vertex is v
            if not m & used:
                top = max(top, 1 + best(v + 1, used | m))
        return top

    return best(0, 0)


def brute_has_factor(n, copies) -> bool:
    k = len(next(iter(copies))) if copies else None
    return bool(copies) and n % k == 0 and brute_max_packing(n, copies) == n // k


# ---------------------------------------------------------------- 1


def test_criterion_01_formula_engine():
    with record_criterion(1, "formula engine matches a second case evaluator") as rec:
        t0 = time.perf_counter()
        checked = 0
        for a in range(1, 13):
            for b in range(a, 13):
                for c in range(b, 13):
                    s = KSpec(a, b, c)
                    assert surd_pair(kspec.f_coefficient(s)) == oracle_f(a, b, c)
                    assert surd_pair(kspec.threshold_coefficient(s).coefficient) == oracle_threshold(a, b, c)
                    assert kspec.codegree_coefficient(s) == oracle_codegree(a, b, c)
                    checked += 1
        dt = time.perf_counter() - t0
        assert dt < 1.0, f"took {dt:.2f}s"
        rec.detail = f"{checked} specs, exact agreement, {dt:.2f}s"


# ---------------------------------------------------------------- 2


def _criterion2_cases():
    cases = []
    for spec in [(1, 1, 1), (1, 1, 2)]:
        for kind in constructions.applicable_kinds(spec):
            cases.append((kind, spec))
    covered = {kind for kind, _ in cases}
    # kinds the two named specs cannot realise get their own small witness spec
    extra = {constructions.Kind.DIV_III: (1, 1, 4), constructions.Kind.TILING: (2, 2, 2)}
    for kind, spec in extra.items():
        if kind not in covered:
            cases.append((kind, spec))
    return cases


def test_criterion_02_barrier_correctness():
    with record_criterion(2, "barriers: brute-force degree equals prediction, no perfect tiling") as rec:
        t0 = time.perf_counter()
        rows = []
        for kind, spec in _criterion2_cases():
            s = KSpec(*spec)
            n = constructions.smallest_feasible_n(kind, s)
            assert n <= 24 and n % s.k == 0
            inst = constructions.generate(kind, s, n)
            assert all(len(p) >= 1 for p in inst.parts)
            assert brute_min_degree(n, inst.graph.edges) == constructions.predicted_degree(kind, s, n)
            assert not tiler.has_perfect_tiling(inst.graph, s).exists
            if n <= 12 and s.k <= 4:
                copies = (brute_copies_111 if spec == (1, 1, 1) else brute_copies_112)(n, inst.graph.edges) \
                    if spec in ((1, 1, 1), (1, 1, 2)) else None
                if copies is not None:
                    assert not brute_has_factor(n, copies)
            rows.append(f"{kind.value}{spec}@{n}")
        assert {k for k, _ in _criterion2_cases()} == set(constructions.ALL_KINDS)
        dt = time.perf_counter() - t0
        assert dt < 60, f"took {dt:.1f}s"
        rec.detail = f"{len(rows)} instances ({', '.join(rows)}), {dt:.1f}s"


# ---------------------------------------------------------------- 3


def test_criterion_03_asymptotic_consistency():
    with record_criterion(3, "predicted degree / C(n,2) within 5% of coefficient at n = 120k") as rec:
        t0 = time.perf_counter()
        worst = 0.0
        count = 0
        for spec in [(1, 1, 2), (2, 3, 7), (1, 4, 7), (1, 3, 5)]:
            s = KSpec(*spec)
            n = 120 * s.k
            for kind in constructions.applicable_kinds(s):
                ratio = constructions.predicted_degree(kind, s, n) / math.comb(n, 2)
                coef = float(constructions.kind_coefficient(kind, s))
                rel = abs(ratio - coef) / coef
                worst = max(worst, rel)
                assert rel <= 0.05, f"{kind.value} {spec}: {ratio} vs {coef}"
                count += 1
        dt = time.perf_counter() - t0
        assert dt < 5
        rec.detail = f"{count} (kind, spec) pairs, worst relative gap {worst:.4f}, {dt:.2f}s"


# ---------------------------------------------------------------- 4


def test_criterion_04_solver_oracle_equivalence():
    with record_criterion(4, "max_tiling equals exhaustive optimum on 200 random hosts") as rec:
        t0 = time.perf_counter()
        rng = random.Random(20240404)
        mismatches = 0
        for trial in range(200):
            spec = (1, 1, 1) if trial < 100 else (1, 1, 2)
            n = rng.randint(4, 10) if spec == (1, 1, 1) else rng.randint(5, 12)
            p = rng.uniform(0.1, 0.7)
            edges = [e for e in itertools.combinations(range(n), 3) if rng.random() < p]
            H = Hypergraph3(n, edges)
            T = tiler.max_tiling(H, spec)
            assert T.is_valid_in(H)
            copies = (brute_copies_111 if spec == (1, 1, 1) else brute_copies_112)(n, edges)
            mismatches += len(T) != brute_max_packing(n, copies)
        dt = time.perf_counter() - t0
        assert mismatches == 0
        assert dt < 120
        rec.detail = f"200 instances, {mismatches} mismatches, {dt:.1f}s"


# ---------------------------------------------------------------- 5


def test_criterion_05_fractional_gadgets():
    with record_criterion(5, "every gadget case verifies with exact weight bounds") as rec:
        t0 = time.perf_counter()
        total = 0
        for a in range(1, 6):
            for b in range(a, 6):
                for c in range(max(b, a + 1), 6):
                    s = KSpec(a, b, c)
                    k = s.k
                    l1_bound = k + Fraction(1, a * b * c)
                    l2_bound = 2 * k + Fraction(1, a * b * c * c)
                    h_floor = Fraction(1, b * c * c)
                    outs = [(fractional.gadget_L1(s, case), l1_bound) for case in fractional.l1_cases(s)]
                    outs += [
                        (fractional.gadget_L2(s, case, co), l2_bound)
                        for case in fractional.l2_cases(s)
                        for co in fractional.l2_variants(s, case)
                    ]
                    for g, bound in outs:
                        res = fractional.verify(g.tiling, s)
                        assert res.valid, (s, g.case_label, res.violation)
                        weights = list(g.tiling.weights.values())
                        assert sum(weights, Fraction(0)) == res.weight >= bound, (s, g.case_label)
                        assert min(weights) >= h_floor, (s, g.case_label)
                        assert all(t <= 1 for t in g.vertex_totals().values())
                        total += 1
        dt = time.perf_counter() - t0
        assert dt < 10
        rec.detail = f"{total} gadget outputs verified exactly, {dt:.2f}s"


# ---------------------------------------------------------------- 6


def test_criterion_06_standard_weighting():
    with record_criterion(6, "standard weighting has weight k and full vertex load") as rec:
        count = 0
        for a in range(1, 7):
            for b in range(a, 7):
                for c in range(b, 7):
                    s = KSpec(a, b, c)
                    ft = fractional.standard_weighting(s)
                    assert fractional.verify(ft, s).valid
                    assert ft.total == s.k
                    assert set(ft.vertex_totals().values()) == {1}
                    assert len(ft.vertex_totals()) == s.k
                    count += 1
        rec.detail = f"{count} specs"


# ---------------------------------------------------------------- 7


def _greedy_instances(count=100, seed=7):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        a = rng.randint(1, 3)
        b = rng.randint(a, 4)
        c = rng.randint(b, 5)
        eps = Fraction(rng.choice([1, 2, 3]), rng.choice([5, 6, 8, 10]))
        m = rng.randint(2, 8)
        sizes = [a * m, b * m, c * m]
        # perturb while keeping the ordering and ratio chain
        sizes[0] += rng.randint(0, 2)
        v1, v2, v3 = sizes
        if not (v1 <= v2 <= v3 and v1 * b >= v2 * a and v2 * c >= v3 * b):
            continue
        if eps * v3 < b + c:
            continue
        out.append(((a, b, c), (v1, v2, v3), eps))
    return out


def test_criterion_07_greedy_regular_tiling():
    with record_criterion(7, "greedy leftover bound and ratio invariant on complete tripartite hosts") as rec:
        t0 = time.perf_counter()
        abc_steps = 0
        slack = []
        for spec, sizes, eps in _greedy_instances():
            a, b, c = spec
            H = core.Hypergraph3.complete_tripartite(sizes)
            offs = [0, sizes[0], sizes[0] + sizes[1]]
            V = [list(range(o, o + s)) for o, s in zip(offs, sizes)]
            res = tiler.greedy_regular_tiling(H, *V, spec, eps)
            assert not res.stalled
            assert all(cp.is_copy_in(H) for cp in res.tiling.copies)
            bound = Fraction(c, a) * eps * sum(sizes) + 2 * (c - a)
            assert res.leftover <= bound, (spec, sizes, eps, res.residual)
            slack.append(float(bound - res.leftover))
            # replay the trace: every abc step that started in the invariant keeps it
            states = [u for _, u in res.trace] + [tuple(sorted(res.residual))]
            for (step, u), after in zip(res.trace, states[1:]):
                if step != "abc":
                    continue
                chain = lambda x: x[0] * b >= x[1] * a and x[1] * c >= x[2] * b
                if chain(u) and min(u) >= b + c and u[2] - u[0] > c - a:
                    assert chain(sorted(after)), (spec, u, after)
                    abc_steps += 1
        dt = time.perf_counter() - t0
        assert dt < 30
        rec.detail = f"100 instances, {abc_steps} invariant steps replayed, min slack {min(slack):.2f}, {dt:.1f}s"


# ---------------------------------------------------------------- 8


def _rank_and_minor_gcd(rows):
    """Rank and gcd of maximal nonzero minors of an integer row set."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0, 0
    dim = len(rows[0])
    M = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    for col in range(dim):
        piv = next((i for i in range(rank, len(M)) if M[i][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(len(M)):
            if i != rank and M[i][col]:
                f = M[i][col] / M[rank][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[rank])]
        rank += 1
    if rank == 0:
        return 0, 0
    g = 0
    for rsel in itertools.combinations(range(len(rows)), rank):
        for csel in itertools.combinations(range(dim), rank):
            sub = [[rows[i][j] for j in csel] for i in rsel]
            g = math.gcd(g, round(np.linalg.det(np.array(sub, dtype=float))))
    return rank, g


def determinant_oracle(gens, target) -> bool:
    """Complete membership test: adding the target changes neither rank nor minor gcd."""
    if not any(target):
        return True
    r0, g0 = _rank_and_minor_gcd(gens)
    r1, g1 = _rank_and_minor_gcd(list(gens) + [list(target)])
    return r0 == r1 and g0 == g1


def test_criterion_08_lattice_membership():
    with record_criterion(8, "lattice membership vs coefficient box search; transferral verdicts") as rec:
        t0 = time.perf_counter()
        rng = np.random.default_rng(8)
        box = np.arange(-8, 9)
        agree = box_misses = 0
        for trial in range(500):
            dim = int(rng.integers(1, 4))
            m = int(rng.integers(1, 4))
            G = rng.integers(-10, 11, size=(m, dim))
            if trial % 2 == 0:
                coeffs = rng.integers(-8, 9, size=m)
                t = coeffs @ G
            else:
                t = rng.integers(-10, 11, size=dim)
            grid = np.array(list(itertools.product(box, repeat=m)))
            in_box = bool(np.any(np.all(grid @ G == t, axis=1)))
            res = lattice.lattice_contains(G.tolist(), t.tolist())
            if in_box:
                assert res.member, (G.tolist(), t.tolist())
            if res.member:
                assert (np.array(res.coefficients) @ G == t).all()
            if res.member == in_box:
                agree += 1
            else:
                # membership with coefficients outside the box: confirm with a complete oracle
                assert res.member and determinant_oracle(G.tolist(), t.tolist()), (G.tolist(), t.tolist())
                box_misses += 1
            assert res.member == determinant_oracle(G.tolist(), t.tolist())
        # transferral verdicts
        inst = constructions.generate("divisibility_II", (1, 1, 1), 12)
        P = VertexPartition.from_parts(inst.parts)
        assert not lattice.transferral_check(inst.graph, P, (1, 1, 1), min_count=1).passed
        K12 = Hypergraph3.complete(12)
        P2 = VertexPartition.from_parts([range(6), range(6, 12)])
        assert lattice.transferral_check(K12, P2, (1, 1, 1), mu=Fraction(1, 10**6)).passed
        dt = time.perf_counter() - t0
        assert dt < 30
        rec.detail = (f"500 bases: {agree} agree with the box, {box_misses} members need coefficients "
                      f"outside [-8,8] (confirmed by determinant oracle); transferral fail/pass as expected; {dt:.1f}s")


# ---------------------------------------------------------------- 9


def test_criterion_09_shadow_bound():
    with record_criterion(9, "shadow bound identity at 6-4*sqrt(2) and monotonicity") as rec:
        d0 = 6 - 4 * math.sqrt(2)
        gap = abs(core.shadow_bound(d0).value + d0 - 1)
        assert gap < 1e-12
        grid = np.linspace(0.25, 0.385, 1000)
        vals = [core.shadow_bound(x).value for x in grid]
        assert all(x < y for x, y in zip(vals, vals[1:]))
        assert all(core.shadow_bound(x).in_range for x in grid)
        rec.detail = f"|g(d0)+d0-1| = {gap:.1e}; strictly increasing on 1000 points"


# ---------------------------------------------------------------- 10


def test_criterion_10_gcd_fact():
    with record_criterion(10, "gcd(a+b,a+c,b+c)=1 sweep up to 50") as rec:
        t0 = time.perf_counter()
        checked = violations = 0
        for a in range(1, 51):
            for b in range(a, 51):
                for c in range(b, 51):
                    if math.gcd(a, b, c) != 1 or math.gcd(b - a, c - b) % 2 == 0:
                        continue
                    checked += 1
                    violations += not kspec.check_gcd_fact(a, b, c)
        dt = time.perf_counter() - t0
        assert violations == 0 and dt < 1
        rec.detail = f"{checked} triples, {violations} violations, {dt:.2f}s"


# ---------------------------------------------------------------- 11


def _brute_apex_copies(H: Hypergraph3, apex: int) -> int:
    """Count 6-sets through the apex that split into three pairs spanning K_{2,2,2}."""
    E = H.edges
    others = [v for v in range(H.n) if v != apex]
    found = 0
    for rest in itertools.combinations(others, 5):
        vs = (apex,) + rest
        for p1 in itertools.combinations(vs[1:], 1):
            A = (apex, p1[0])
            left = [v for v in vs if v not in A]
            x = left[0]
            for y in left[1:]:
                B = (x, y)
                C = tuple(v for v in left if v not in B)
                if all(tuple(sorted(t)) in E for t in itertools.product(A, B, C)):
                    found += 1
    return found


def test_criterion_11_tiling_barrier():
    with record_criterion(11, "no K_{2,2,2} through the apex at n = 20, 32") as rec:
        t0 = time.perf_counter()
        for n in (20, 32):
            inst = constructions.generate("tiling", (2, 2, 2), n)
            assert tiler.count_copies_through(inst.graph, (2, 2, 2), inst.apex) == 0
            assert inst.graph.degree([inst.apex]) > 0
        # independent enumeration at the smaller size
        inst = constructions.generate("tiling", (2, 2, 2), 20)
        assert _brute_apex_copies(inst.graph, inst.apex) == 0
        dt = time.perf_counter() - t0
        assert dt < 60
        rec.detail = f"zero apex copies at n=20 and n=32 (n=20 cross-checked by brute force), {dt:.1f}s"


# ---------------------------------------------------------------- 12


def test_criterion_12_reachability_closed_form():
    with record_criterion(12, "reachability in K_n equals C(n-2,2)") as rec:
        for n in range(6, 13):
            Kn = Hypergraph3.complete(n)
            for u, v in [(0, 1), (2, n - 1)]:
                assert absorb.reachability_count(Kn, u, v, (1, 1, 1), 1).witness_count == math.comb(n - 2, 2)
        rec.detail = "n = 6..12 exact"


# ---------------------------------------------------------------- 13


def test_criterion_13_reduction_guarantees():
    with record_criterion(13, "weak-edge reduction guarantees on 50 random hosts") as rec:
        rng = np.random.default_rng(13)
        removed_total = 0
        for trial in range(50):
            n = int(rng.integers(8, 41))
            eps = Fraction(1, 10) if trial % 2 == 0 else Fraction(1, 5)
            triples = list(itertools.combinations(range(n), 3))
            if trial % 4 == 3:
                # hub hosts: one vertex sees every pair, background is sparse,
                # so the hub's edges are weak and it should be dropped
                p = float(rng.uniform(0.0, 0.01))
                hub = int(rng.integers(n))
                edges = [t for t in triples if hub in t or rng.random() < p]
            else:
                p = float(rng.uniform(0.02, 0.6))
                edges = [t for t, keep in zip(triples, rng.random(len(triples)) < p) if keep]
            H = Hypergraph3(n, edges)
            red = absorb.epsilon_reduction(H, eps)
            removed_total += len(red.removed)
            He = red.graph
            assert len(red.removed) <= 3 * eps * n
            dH = [0] * n
            dE = [0] * n
            for e in H.edges:
                for v in e:
                    dH[v] += 1
            for e in He.edges:
                for v in e:
                    dE[v] += 1
            for v in range(n):
                if v not in red.removed:
                    assert dH[v] - dE[v] <= 7 * eps * math.comb(n, 2)
            codeg = {}
            for e in H.edges:
                for pair in itertools.combinations(e, 2):
                    codeg[pair] = codeg.get(pair, 0) + 1
            for e in He.edges:
                for pair in itertools.combinations(e, 2):
                    assert codeg[pair] > eps * eps * n
            assert all(v not in red.removed for e in He.edges for v in e)
        rec.detail = f"50 hosts, {removed_total} vertices removed in total, all bounds hold"
