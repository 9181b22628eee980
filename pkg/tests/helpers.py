"""Shared test utilities."""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass

RESULTS: dict[int, tuple[bool, str, str]] = {}


@dataclass
class _Record:
    detail: str = ""


@contextmanager
def record_criterion(number: int, title: str):
    rec = _Record()
    try:
        yield rec
    except BaseException as exc:
        RESULTS[number] = (False, title, f"{type(exc).__name__}: {exc}"[:200])
        print(f"[FAIL] criterion {number:2d}: {title} -- {RESULTS[number][2]}")
        raise
    RESULTS[number] = (True, title, rec.detail)
    print(f"[PASS] criterion {number:2d}: {title} -- {rec.detail}")
