"""``hypertile`` command line: one subcommand per toolkit area.

Exit codes: 0 success, 1 negative verdict, 2 usage error, 3 guard exceeded.
Every subcommand accepts ``--json`` for machine-readable output.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Sequence

import numpy as np

from . import absorb, constructions, fractional, io, kspec, lattice, tiler
from .core import Hypergraph3, VertexPartition
from .errors import HypertileError, InvalidArgument, SizeLimitError

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


# ---------------------------------------------------------------- probe


@dataclass
class ProbeConfig:
    spec: kspec.KSpec
    n: int
    density_grid: list
    trials: int = 20
    seed: int = 0
    model: str = "uniform-p"

    def __post_init__(self):
        self.spec = kspec.as_spec(self.spec)
        if self.trials < 1:
            raise InvalidArgument("trials must be at least 1")
        if any(not 0 <= float(f) <= 1 for f in self.density_grid):
            raise InvalidArgument("grid fractions must lie in [0, 1]")
        if self.model != "uniform-p":
            raise InvalidArgument(f"unknown random model {self.model!r}")


@dataclass
class ProbeRow:
    fraction: float
    mean_min_degree: float
    mean_degree_fraction: float
    tileable_share: float
    label: str = "random"

    def to_json(self) -> dict:
        return {
            "fraction": self.fraction,
            "mean_min_degree": self.mean_min_degree,
            "mean_degree_fraction": self.mean_degree_fraction,
            "tileable_share": self.tileable_share,
            "label": self.label,
        }


def random_host(n: int, p: float, rng: np.random.Generator) -> Hypergraph3:
    """Binomial random 3-graph: each triple independently with probability ``p``."""
    triples = list(itertools.combinations(range(n), 3))
    keep = rng.random(len(triples)) < p
    return Hypergraph3(n, (t for t, k in zip(triples, keep) if k))


def probe(config: ProbeConfig) -> list[ProbeRow]:
    """Tileability of random hosts along a grid of target degree fractions.

    Edge probability equals the target fraction, so the expected vertex
    degree is that fraction of ``C(n-1, 2)``.  Trial ``t`` draws from
    ``default_rng([seed, t])`` at every grid point, which couples the hosts
    across the grid.
    """
    s, n = config.spec, config.n
    full = comb(n - 1, 2)
    rows = []
    for frac in config.density_grid:
        frac = float(frac)
        degs, tileable = [], 0
        for t in range(config.trials):
            H = random_host(n, frac, np.random.default_rng([config.seed, t]))
            degs.append(H.min_degree())
            tileable += tiler.has_perfect_tiling(H, s).exists
        mean = float(np.mean(degs))
        rows.append(ProbeRow(frac, mean, mean / full if full else 0.0, tileable / config.trials))
    return rows


def barrier_row(kind, spec, n: int) -> ProbeRow:
    """Replay a barrier instance as a single-trial probe row."""
    inst = constructions.generate(kind, spec, n)
    full = comb(n - 1, 2)
    d = inst.graph.min_degree()
    ok = tiler.has_perfect_tiling(inst.graph, spec).exists
    return ProbeRow(d / full, float(d), d / full, float(ok), label=f"barrier:{inst.kind.value}")


# ---------------------------------------------------------------- helpers


def _abc(text: str) -> kspec.KSpec:
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError:
        raise InvalidArgument(f"--abc expects a,b,c integers, got {text!r}") from None
    if len(vals) != 3:
        raise InvalidArgument("--abc expects exactly three integers")
    return kspec.KSpec(*vals)


def _vertex_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InvalidArgument(f"expected comma-separated vertices, got {text!r}") from None


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidArgument(f"expected a rational like 1/4 or 0.25, got {text!r}") from None


def _fs(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _copy_json(cp: tiler.KCopy) -> list:
    return [list(p) for p in cp.parts]


class _Out:
    def __init__(self, as_json: bool, stream=None):
        self.as_json = as_json
        self.stream = stream or sys.stdout

    def emit(self, payload: dict, text: str):
        if self.as_json:
            print(json.dumps(payload, sort_keys=True), file=self.stream)
        else:
            print(text, file=self.stream)


# ---------------------------------------------------------------- commands


def cmd_threshold(args, out: _Out) -> int:
    rep = kspec.threshold_coefficient(_abc(args.abc))
    coef = rep.coefficient
    text = "\n".join([
        f"tile: {rep.spec} ({rep.spec.type_label})",
        f"f: {rep.f} ≈ {float(rep.f):.5f} ({rep.f_barrier})",
        f"space I: {_fs(rep.space1)} ≈ {float(rep.space1):.5f}",
        f"space II: {_fs(rep.space2)} ≈ {float(rep.space2):.5f}",
        f"coefficient: {coef} ≈ {float(coef):.5f}",
        f"attained by: {', '.join(rep.dominant_barrier)}",
    ])
    out.emit(rep.to_json(), text)
    return EXIT_OK


def cmd_classify(args, out: _Out) -> int:
    s = _abc(args.abc)
    payload = {
        "abc": list(s.sizes),
        "k": s.k,
        "g": s.g,
        "d": s.d,
        "type": s.type_label,
        "f": kspec.exact_to_json(kspec.f_coefficient(s)),
        "codegree": _fs(kspec.codegree_coefficient(s)),
        "gcd_fact": kspec.check_gcd_fact(*s.sizes),
    }
    text = (f"{s}: k={s.k} gcd={s.g} d={s.d} {s.type_label}; f={kspec.f_coefficient(s)}; "
            f"codegree coefficient {_fs(kspec.codegree_coefficient(s))}")
    out.emit(payload, text)
    return EXIT_OK


def _general_construct(args, out: _Out) -> int:
    if args.r is None or args.i is None or not args.sizes:
        raise InvalidArgument("--kind gen needs --r, --i and --sizes")
    sizes = _vertex_list(args.sizes)
    inst = constructions.generate_general(args.r, args.i, sizes, args.n)
    r = args.r
    degs = {str(d): inst.graph.min_degree(d) for d in range(1, r)}
    pred = {str(d): inst.predicted_min_degree(d) for d in range(1, r)}
    if args.out:
        body = [f"# r-uniform space barrier, r={r}, i={args.i}", f"n {args.n}", f"r {r}"]
        body += [" ".join(map(str, e)) for e in sorted(inst.graph.edges)]
        Path(args.out).write_text("\n".join(body) + "\n")
    payload = {
        "kind": "space_general", "r": r, "i": args.i, "sizes": sizes, "n": args.n,
        "part_sizes": [len(inst.A), len(inst.B)], "min_degree": degs, "predicted_min_degree": pred,
        "out": args.out,
    }
    ok = degs == pred
    out.emit(payload, f"space barrier r={r} i={args.i}: |A|={len(inst.A)}, min degrees {degs} (predicted {pred})")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_construct(args, out: _Out) -> int:
    if args.kind == "gen":
        return _general_construct(args, out)
    s = _abc(args.abc)
    inst = constructions.generate(args.kind, s, args.n)
    cert = constructions.check_certificate(inst)
    dmin = inst.graph.min_degree()
    payload = {
        "kind": inst.kind.value, "abc": list(s.sizes), "n": inst.n,
        "part_sizes": list(inst.part_sizes), "predicted_min_degree": inst.predicted_min_degree,
        "min_degree": dmin, "apex": inst.apex,
        "certificate": {
            "valid": cert.valid, "mode": cert.mode, "copies_checked": cert.copies_checked,
            "reason": cert.reason,
            "counterexample": None if cert.counterexample is None else _copy_json(cert.counterexample),
        },
        "out": args.out,
    }
    report = io.format_report([
        ("kind", inst.kind.value), ("abc", ",".join(map(str, s.sizes))), ("n", inst.n),
        ("part_sizes", " ".join(map(str, inst.part_sizes))),
        ("predicted_min_degree", inst.predicted_min_degree), ("min_degree", dmin),
        ("certificate", "valid" if cert.valid else "violated"), ("mode", cert.mode),
        ("reason", cert.reason),
    ])
    if args.out:
        io.write_h3g(inst.graph, args.out, comment=f"{inst.kind.value} barrier for {s}")
        Path(args.out).with_suffix(".cert").write_text(report)
    out.emit(payload, report.rstrip())
    return EXIT_OK if cert.valid else EXIT_NEGATIVE


def cmd_tile(args, out: _Out) -> int:
    s = _abc(args.abc)
    H = io.read_h3g(args.file)
    if args.greedy:
        if not args.parts or args.eps is None:
            raise InvalidArgument("--greedy needs --parts and --eps")
        P = io.read_partition(args.parts, H.n)
        if P.r != 3:
            raise InvalidArgument("--greedy expects a partition with exactly three parts")
        V1, V2, V3 = sorted((sorted(p) for p in P.clusters), key=len)
        res = tiler.greedy_regular_tiling(H, V1, V2, V3, s, _frac(args.eps))
        payload = {
            "mode": "greedy", "abc": list(s.sizes), "n": H.n,
            "copies": [_copy_json(c) for c in res.tiling.copies],
            "covered": len(res.tiling.covered), "optimal": False, "perfect": res.tiling.is_perfect(H.n),
            "stop_reason": res.stop_reason, "residual": list(res.residual),
        }
        out.emit(payload, f"greedy: {len(res.tiling)} copies, residual {res.residual}, stop: {res.stop_reason}")
        return EXIT_NEGATIVE if res.stalled else EXIT_OK
    if args.perfect:
        res = tiler.has_perfect_tiling(H, s)
        copies = res.witness.copies if res.witness else ()
        payload = {
            "mode": "perfect", "abc": list(s.sizes), "n": H.n,
            "copies": [_copy_json(c) for c in copies], "covered": s.k * len(copies),
            "optimal": True, "perfect": res.exists,
        }
        out.emit(payload, f"perfect tiling: {'yes' if res.exists else 'no'}")
        return EXIT_OK if res.exists else EXIT_NEGATIVE
    T = tiler.max_tiling(H, s)
    payload = {
        "mode": "max", "abc": list(s.sizes), "n": H.n,
        "copies": [_copy_json(c) for c in T.copies], "covered": len(T.covered),
        "optimal": T.optimal, "perfect": T.is_perfect(H.n),
    }
    out.emit(payload, f"maximum tiling: {len(T)} copies covering {len(T.covered)} of {H.n} vertices")
    return EXIT_OK


def cmd_fractional(args, out: _Out) -> int:
    s = _abc(args.abc)
    if args.action == "verify":
        H, edges = io.read_h3g_ordered(args.file)
        w = io.parse_fht(Path(args.weights).read_text(), edges)
        ft = fractional.FractionalHomTiling(H, w)
        res = fractional.verify(ft, s)
        payload = {
            "valid": res.valid, "weight": _fs(res.weight),
            "hmin": None if res.hmin is None else _fs(res.hmin), "violation": res.violation,
        }
        out.emit(payload, f"valid: {res.valid}; w(h) = {res.weight}; h_min = {res.hmin}"
                 + (f"; {res.violation}" if res.violation else ""))
        return EXIT_OK if res.valid else EXIT_NEGATIVE
    if args.family == "l1":
        g = fractional.gadget_L1(s, args.case)
        bound = s.k + Fraction(1, s.a * s.b * s.c)
    else:
        g = fractional.gadget_L2(s, args.case, args.coincident)
        bound = 2 * s.k + Fraction(1, s.a * s.b * s.c * s.c)
    if args.out:
        io.write_h3g(g.graph, args.out, comment=f"{args.family} gadget, case {g.case_label}")
        Path(args.out).with_suffix(".fht").write_text(io.format_fht(g.tiling.weights, g.graph.sorted_edges))
    payload = {
        "family": args.family, "case": g.case_label, "abc": list(s.sizes), "n": g.graph.n,
        "edges": len(g.graph), "link_triples": g.link_triples, "weight": _fs(g.weight),
        "hmin": _fs(g.hmin), "weight_bound": _fs(bound), "valid": True,
    }
    out.emit(payload, f"{args.family} case {g.case_label}: w(h) = {g.weight} (bound {bound}), h_min = {g.hmin}")
    return EXIT_OK


def cmd_lattice(args, out: _Out) -> int:
    s = _abc(args.abc)
    H = io.read_h3g(args.file)
    P = io.read_partition(args.parts, H.n)
    mu = _frac(args.mu) if args.mu is not None else None
    mc = args.min_count
    ev = lattice.robust_edge_vectors(H, P, mu=mu, min_count=mc)
    tr = lattice.transferral_check(H, P, s, mu=mu, min_count=mc)
    payload = {
        "edge_vectors": [{"vector": list(v), "count": c} for v, c in ev.items()],
        "k_vectors": [{"vector": list(v), "count": c} for v, c in tr.vectors.items()],
        "passed": tr.passed, "missing": [list(p) for p in tr.missing],
    }
    lines = ["robust edge vectors:"] + [f"  {v}: {c}" for v, c in ev.items()]
    lines += ["robust K-vectors (lattice generators):"] + [f"  {v}: {c}" for v, c in tr.vectors.items()]
    lines.append("transferral: " + ("pass" if tr.passed else f"fail, missing {tr.missing}"))
    out.emit(payload, "\n".join(lines))
    return EXIT_OK if tr.passed else EXIT_NEGATIVE


def cmd_reduce(args, out: _Out) -> int:
    H = io.read_h3g(args.file)
    eps = _frac(args.eps)
    red = absorb.epsilon_reduction(H, eps)
    checks = absorb.reduction_guarantees(H, red, eps)
    if args.out:
        io.write_h3g(red.graph, args.out)
    payload = {
        "n": H.n, "eps": _fs(eps), "removed": sorted(red.removed), "weak_edges": len(red.weak_edges),
        "edges_before": len(H), "edges_after": len(red.graph), "guarantees": checks,
    }
    out.emit(payload, f"removed {sorted(red.removed)}; {len(red.weak_edges)} weak edges; "
             f"{len(H)} -> {len(red.graph)} edges; guarantees {checks}")
    return EXIT_OK if all(checks.values()) else EXIT_NEGATIVE


def cmd_reach(args, out: _Out) -> int:
    s = _abc(args.abc)
    H = io.read_h3g(args.file)
    rep = absorb.reachability_count(H, args.u, args.v, s, args.i)
    payload = {
        "u": rep.u, "v": rep.v, "i": rep.i, "witness_count": rep.witness_count,
        "total": rep.total, "normalized": _fs(rep.normalized),
    }
    out.emit(payload, f"{rep.witness_count} of {rep.total} witness sets ({rep.normalized})")
    return EXIT_OK if rep.witness_count else EXIT_NEGATIVE


def cmd_absorb(args, out: _Out) -> int:
    s = _abc(args.abc)
    H = io.read_h3g(args.file)
    if args.action == "count":
        S = _vertex_list(args.S)
        c = absorb.count_absorbing_sets(H, S, args.m, s)
        out.emit({"S": S, "m": args.m, "count": c}, f"{c} absorbing {args.m}-sets for {S}")
        return EXIT_OK if c else EXIT_NEGATIVE
    fam = absorb.build_absorbing_family(H, s, args.i0, args.seed, _frac(args.p))
    payload = {
        "m": fam.m, "seed": args.seed, "p": _fs(_frac(args.p)), "sampled": fam.sampled,
        "after_disjoint": fam.after_disjoint, "sets": [sorted(A) for A in fam.sets],
        "witnesses": [sorted(S) for S in fam.witnesses],
    }
    out.emit(payload, f"family of {len(fam)} disjoint absorbing {fam.m}-sets "
             f"({fam.sampled} sampled, {fam.after_disjoint} after disjointness)")
    return EXIT_OK


def cmd_probe(args, out: _Out) -> int:
    s = _abc(args.abc)
    grid = [float(_frac(x)) for x in args.grid.split(",")]
    cfg = ProbeConfig(s, args.n, grid, args.trials, args.seed)
    rows = probe(cfg)
    if args.barrier:
        rows.append(barrier_row(args.barrier, s, args.n))
    payload = {
        "abc": list(s.sizes), "n": args.n, "trials": args.trials, "seed": args.seed,
        "rows": [r.to_json() for r in rows],
    }
    header = f"{'fraction':>9} {'mean δ1':>9} {'δ1/C(n-1,2)':>12} {'tileable':>9}  source"
    body = [f"{r.fraction:9.3f} {r.mean_min_degree:9.2f} {r.mean_degree_fraction:12.3f} "
            f"{r.tileable_share:9.2f}  {r.label}" for r in rows]
    out.emit(payload, "\n".join([header, *body]))
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypertile", description="Exact K_{a,b,c}-tiling toolkit for 3-graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=func)
        return sp

    sp = add("threshold", cmd_threshold, "vertex-degree threshold coefficient")
    sp.add_argument("--abc", required=True)
    sp = add("classify", cmd_classify, "type, gcds and coefficients of a tile")
    sp.add_argument("--abc", required=True)

    sp = add("construct", cmd_construct, "generate a barrier and check its certificate")
    sp.add_argument("--kind", required=True, choices=[*constructions.SHORT_NAMES, *(k.value for k in constructions.ALL_KINDS), "gen"])
    sp.add_argument("--abc")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out")
    sp.add_argument("--r", type=int)
    sp.add_argument("--i", type=int)
    sp.add_argument("--sizes")

    sp = add("tile", cmd_tile, "maximum / perfect / greedy tiling")
    sp.add_argument("--file", required=True)
    sp.add_argument("--abc", required=True)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--perfect", action="store_true")
    mode.add_argument("--greedy", action="store_true")
    sp.add_argument("--parts")
    sp.add_argument("--eps")

    sp = add("fractional", cmd_fractional, "fractional hom(K)-tilings")
    sp.add_argument("action", choices=["verify", "gadget"])
    sp.add_argument("--abc", required=True)
    sp.add_argument("--file")
    sp.add_argument("--weights")
    sp.add_argument("--family", choices=["l1", "l2"])
    sp.add_argument("--case")
    sp.add_argument("--coincident", action="store_true")
    sp.add_argument("--out")

    sp = add("lattice", cmd_lattice, "robust vectors and transferral check")
    sp.add_argument("--file", required=True)
    sp.add_argument("--parts", required=True)
    sp.add_argument("--abc", required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--mu")
    g.add_argument("--min-count", type=int, dest="min_count")

    sp = add("reduce", cmd_reduce, "weak-edge reduction")
    sp.add_argument("--file", required=True)
    sp.add_argument("--eps", required=True)
    sp.add_argument("--out")

    sp = add("reach", cmd_reach, "reachability witness count")
    sp.add_argument("--file", required=True)
    sp.add_argument("--abc", required=True)
    sp.add_argument("--u", type=int, required=True)
    sp.add_argument("--v", type=int, required=True)
    sp.add_argument("--i", type=int, default=1)

    sp = add("absorb", cmd_absorb, "absorbing sets and families")
    sp.add_argument("action", choices=["count", "family"])
    sp.add_argument("--file", required=True)
    sp.add_argument("--abc", required=True)
    sp.add_argument("--S")
    sp.add_argument("--m", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--p", default="0")
    sp.add_argument("--i0", type=int, default=1)

    sp = add("probe", cmd_probe, "random-host tileability sweep")
    sp.add_argument("--abc", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--grid", required=True, help="comma-separated degree fractions")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--barrier", choices=[*constructions.SHORT_NAMES, *(k.value for k in constructions.ALL_KINDS)])
    return p


def _validate(args) -> None:
    if args.command == "construct" and args.kind != "gen" and not args.abc:
        raise InvalidArgument("--abc is required for this kind")
    if args.command == "fractional":
        if args.action == "verify" and not (args.file and args.weights):
            raise InvalidArgument("fractional verify needs --file and --weights")
        if args.action == "gadget" and not (args.family and args.case):
            raise InvalidArgument("fractional gadget needs --family and --case")
    if args.command == "absorb" and args.action == "count" and (args.S is None or args.m is None):
        raise InvalidArgument("absorb count needs --S and --m")


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    out = _Out(args.json, stdout)
    try:
        _validate(args)
        return args.func(args, out)
    except SizeLimitError as exc:
        print(f"hypertile: guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (HypertileError, OSError) as exc:
        print(f"hypertile: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
