"""Tile parameters for K_{a,b,c} and the threshold coefficients built from them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .errors import InvalidArgument


@total_ordering
class QuadraticSurd:
    """An exact number ``p + q*sqrt(2)`` with rational ``p`` and ``q``.

    Only used for the irrational tiling-barrier coefficient ``6 - 4*sqrt(2)``;
    it keeps equality and ordering against rationals exact.
    """

    __slots__ = ("p", "q")

    def __init__(self, p, q=0):
        self.p = Fraction(p)
        self.q = Fraction(q)

    @classmethod
    def coerce(cls, x) -> "QuadraticSurd":
        return x if isinstance(x, QuadraticSurd) else cls(x, 0)

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def sign(self) -> int:
        p, q = self.p, self.q
        if q == 0:
            return (p > 0) - (p < 0)
        if p >= 0 and q > 0:
            return 1
        if p <= 0 and q < 0:
            return -1
        # opposite signs: compare p^2 with 2 q^2
        s = (p * p > 2 * q * q) - (p * p < 2 * q * q)
        return s if p > 0 else -s

    def __add__(self, other):
        o = QuadraticSurd.coerce(other)
        return QuadraticSurd(self.p + o.p, self.q + o.q)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.p, -self.q)

    def __sub__(self, other):
        return self + (-QuadraticSurd.coerce(other))

    def __rsub__(self, other):
        return QuadraticSurd.coerce(other) - self

    def __mul__(self, other):
        o = QuadraticSurd.coerce(other)
        return QuadraticSurd(self.p * o.p + 2 * self.q * o.q, self.p * o.q + self.q * o.p)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            return (self - other).sign() == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __hash__(self):
        return hash(self.p) if self.q == 0 else hash((self.p, self.q))

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(2)

    def __repr__(self):
        if self.q == 0:
            return f"QuadraticSurd({self.p})"
        return f"QuadraticSurd({self.p}, {self.q})"

    def __str__(self):
        if self.q == 0:
            return str(self.p)
        sign = "-" if self.q < 0 else "+"
        q = abs(self.q)
        qs = "" if q == 1 else f"{q}*"
        head = "" if self.p == 0 else f"{self.p}"
        return f"{head}{sign}{qs}sqrt(2)" if head else f"{'-' if self.q < 0 else ''}{qs}sqrt(2)"


SIX_MINUS_FOUR_SQRT2 = QuadraticSurd(6, -4)


def _gcd(*xs: int) -> int:
    g = 0
    for x in xs:
        g = math.gcd(g, x)
    return g


def _smallest_prime_factor(n: int) -> int:
    if n < 2:
        raise InvalidArgument(f"no prime factor for {n}")
    p = 2
    while p * p <= n:
        if n % p == 0:
            return p
        p += 1
    return n


@dataclass(frozen=True)
class KSpec:
    """The tile K_{a,b,c} with ``1 <= a <= b <= c`` and its derived invariants."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        a, b, c = self.a, self.b, self.c
        if not all(isinstance(x, int) for x in (a, b, c)):
            raise InvalidArgument("a, b, c must be integers")
        if a < 1 or not (a <= b <= c):
            raise InvalidArgument(f"need 1 <= a <= b <= c, got ({a},{b},{c})")

    @property
    def sizes(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def k(self) -> int:
        return self.a + self.b + self.c

    @property
    def g(self) -> int:
        return _gcd(self.a, self.b, self.c)

    @property
    def d(self) -> int:
        # gcd(0, 0) = 0 when a = b = c
        return math.gcd(self.b - self.a, self.c - self.b)

    @property
    def is_type0(self) -> bool:
        return self.g > 1 or (self.a == self.b == self.c == 1)

    @property
    def type_d(self) -> int | None:
        """``d`` for a tile of type d, ``None`` for type 0."""
        return None if self.is_type0 else self.d

    @property
    def type_label(self) -> str:
        return "type 0" if self.is_type0 else f"type {self.d}"

    def __str__(self):
        return f"K_{{{self.a},{self.b},{self.c}}}"


def classify(a: int, b: int, c: int) -> KSpec:
    return KSpec(a, b, c)


def as_spec(spec) -> KSpec:
    if isinstance(spec, KSpec):
        return spec
    return KSpec(*spec)


def f_coefficient(spec) -> QuadraticSurd:
    """The absorbing-threshold coefficient ``f(a, b, c)``."""
    s = as_spec(spec)
    if s.g == 1 and s.d == 1:
        return QuadraticSurd(Fraction(1, 4)) if s.a == 1 else SIX_MINUS_FOUR_SQRT2
    if s.g == 1 and s.d >= 3 and s.d % 2 == 1:
        return QuadraticSurd(Fraction(4, 9))
    return QuadraticSurd(Fraction(1, 2))


def f_barrier(spec) -> str:
    """Name of the construction whose degree matches ``f(a, b, c)``."""
    s = as_spec(spec)
    if s.g == 1 and s.d == 1:
        return "divisibility_I" if s.a == 1 else "tiling"
    if s.g == 1 and s.d >= 3 and s.d % 2 == 1:
        return "divisibility_III"
    return "divisibility_II"


def space1_coefficient(spec) -> Fraction:
    s = as_spec(spec)
    return 1 - Fraction(s.b + s.c, s.k) ** 2


def space2_coefficient(spec) -> Fraction:
    s = as_spec(spec)
    return Fraction(s.a + s.b, s.k) ** 2


@dataclass(frozen=True)
class ThresholdReport:
    spec: KSpec
    f: QuadraticSurd
    space1: Fraction
    space2: Fraction
    coefficient: QuadraticSurd
    dominant_barrier: tuple[str, ...]
    f_barrier: str

    def to_json(self) -> dict:
        return {
            "abc": list(self.spec.sizes),
            "type": self.spec.type_label,
            "f": exact_to_json(self.f),
            "f_barrier": self.f_barrier,
            "space1": _frac_str(self.space1),
            "space2": _frac_str(self.space2),
            "coefficient": exact_to_json(self.coefficient),
            "dominant_barrier": list(self.dominant_barrier),
        }


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def exact_to_json(x) -> dict:
    x = QuadraticSurd.coerce(x)
    if x.is_rational:
        return {"kind": "rational", "value": _frac_str(x.p), "approx": float(x)}
    if x == SIX_MINUS_FOUR_SQRT2:
        return {"kind": "six_minus_four_sqrt2", "value": "6-4*sqrt(2)", "approx": float(x)}
    return {"kind": "quadratic_surd", "value": str(x), "approx": float(x)}


def threshold_coefficient(spec) -> ThresholdReport:
    """``max{f, 1 - ((b+c)/k)^2, ((a+b)/k)^2}`` with the attaining barrier(s)."""
    s = as_spec(spec)
    f = f_coefficient(s)
    fb = f_barrier(s)
    sp1, sp2 = space1_coefficient(s), space2_coefficient(s)
    candidates = [(fb, f), ("space_I", QuadraticSurd(sp1)), ("space_II", QuadraticSurd(sp2))]
    best = max(v for _, v in candidates)
    dominant = tuple(name for name, v in candidates if v == best)
    return ThresholdReport(s, f, sp1, sp2, best, dominant, fb)


def codegree_coefficient(spec) -> Fraction:
    """Coefficient of ``n`` in the codegree tiling threshold for K_{a,b,c}."""
    s = as_spec(spec)
    if s.is_type0:
        return Fraction(1, 2)
    if s.d == 1:
        return Fraction(s.a, s.k)
    return max(Fraction(s.a, s.k), Fraction(1, _smallest_prime_factor(s.d)))


def check_gcd_fact(a: int, b: int, c: int) -> bool:
    """Whether ``gcd(a+b, a+c, b+c) == 1``."""
    return _gcd(a + b, a + c, b + c) == 1
