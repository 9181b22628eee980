"""Text formats: hypergraphs (.h3g), partitions (.part), weights (.fht), reports (.cert)."""

from __future__ import annotations

import os
import re
from fractions import Fraction
from typing import Iterable

from .core import Hypergraph3, VertexPartition
from .errors import InvalidArgument

PathLike = str | os.PathLike


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_h3g(text: str) -> tuple[int, list[tuple[int, int, int]]]:
    """Vertex count and edges in file order."""
    lines = _content_lines(text)
    try:
        lineno, head = next(lines)
    except StopIteration:
        raise InvalidArgument("empty hypergraph file") from None
    m = re.fullmatch(r"n\s+(\d+)", head)
    if not m:
        raise InvalidArgument(f"line {lineno}: expected 'n <N>', got {head!r}")
    n = int(m.group(1))
    edges, seen = [], set()
    for lineno, line in lines:
        parts = line.split()
        if len(parts) != 3 or not all(p.isdigit() for p in parts):
            raise InvalidArgument(f"line {lineno}: expected 'i j k', got {line!r}")
        i, j, k = map(int, parts)
        if not 0 <= i < j < k < n:
            raise InvalidArgument(f"line {lineno}: need 0 <= i < j < k < {n}")
        if (i, j, k) in seen:
            raise InvalidArgument(f"line {lineno}: duplicate edge {i} {j} {k}")
        seen.add((i, j, k))
        edges.append((i, j, k))
    return n, edges


def format_h3g(H: Hypergraph3, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(f"n {H.n}")
    out.extend(f"{i} {j} {k}" for i, j, k in H.sorted_edges)
    return "\n".join(out) + "\n"


def read_h3g(path: PathLike) -> Hypergraph3:
    with open(path) as fh:
        n, edges = parse_h3g(fh.read())
    return Hypergraph3(n, edges)


def read_h3g_ordered(path: PathLike) -> tuple[Hypergraph3, list[tuple[int, int, int]]]:
    with open(path) as fh:
        n, edges = parse_h3g(fh.read())
    return Hypergraph3(n, edges), edges


def write_h3g(H: Hypergraph3, path: PathLike, comment: str | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_h3g(H, comment))


def parse_partition(text: str, n: int | None = None) -> VertexPartition:
    """Lines ``part <index>: v1 v2 ...``; index 0 is ``V_0`` and may be omitted."""
    parts: dict[int, list[int]] = {}
    for lineno, line in _content_lines(text):
        m = re.fullmatch(r"part\s+(\d+)\s*:\s*(.*)", line)
        if not m:
            raise InvalidArgument(f"line {lineno}: expected 'part <index>: v1 v2 ...'")
        idx = int(m.group(1))
        if idx in parts:
            raise InvalidArgument(f"line {lineno}: part {idx} given twice")
        body = m.group(2).split()
        if not all(x.isdigit() for x in body):
            raise InvalidArgument(f"line {lineno}: vertices must be nonnegative integers")
        parts[idx] = [int(x) for x in body]
    if not parts:
        raise InvalidArgument("partition file has no parts")
    r = max(parts)
    if sorted(k for k in parts if k) != list(range(1, r + 1)):
        raise InvalidArgument("parts must be numbered 1..r without gaps")
    flat = [v for p in parts.values() for v in p]
    if len(flat) != len(set(flat)):
        raise InvalidArgument("a vertex appears in more than one part")
    if n is None:
        n = max(flat) + 1 if flat else 0
    return VertexPartition(n, tuple(parts.get(i, []) for i in range(r + 1)))


def format_partition(P: VertexPartition) -> str:
    return "".join(
        f"part {i}: {' '.join(map(str, sorted(p)))}\n" for i, p in enumerate(P.parts)
    )


def read_partition(path: PathLike, n: int | None = None) -> VertexPartition:
    with open(path) as fh:
        return parse_partition(fh.read(), n)


def write_partition(P: VertexPartition, path: PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(format_partition(P))


def parse_fht(text: str, edges: list[tuple[int, int, int]]) -> dict:
    """Lines ``v e_index num/den`` with ``e_index`` into ``edges`` (file order)."""
    weights: dict = {}
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 3:
            raise InvalidArgument(f"line {lineno}: expected 'v e_index num/den'")
        try:
            v, ei, w = int(parts[0]), int(parts[1]), Fraction(parts[2])
        except ValueError:
            raise InvalidArgument(f"line {lineno}: malformed entry {line!r}") from None
        if not 0 <= ei < len(edges):
            raise InvalidArgument(f"line {lineno}: edge index {ei} out of range")
        key = (v, edges[ei])
        if key in weights:
            raise InvalidArgument(f"line {lineno}: duplicate weight for vertex {v} on edge {ei}")
        weights[key] = w
    return weights


def format_fht(weights: dict, edges: list[tuple[int, int, int]]) -> str:
    index = {e: i for i, e in enumerate(edges)}
    rows = sorted((index[e], v, w) for (v, e), w in weights.items())
    return "".join(f"{v} {i} {w.numerator}/{w.denominator}\n" for i, v, w in rows)


def format_report(fields: Iterable[tuple[str, object]]) -> str:
    return "".join(f"{k}: {v}\n" for k, v in fields)
