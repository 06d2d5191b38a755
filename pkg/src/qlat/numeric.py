"""Exact arithmetic in real quadratic fields Q(sqrt(D)).

A :class:`QuadraticNumber` stores ``(p + q*sqrt(D)) / r`` with Python integers,
so coefficients never overflow no matter how many inflations are applied.
Rationals are normalized to ``q == 0, D == 1`` and mix freely with any field.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering
from typing import Union

from .errors import DivisionByZero, MixedDiscriminant

Number = Union["QuadraticNumber", int, Fraction]

_HUMAN_RE = re.compile(
    r"^\(\s*(?P<p>[+-]?\d+)\s*(?:(?P<sign>[+-])\s*(?P<q>\d+)\s*√\s*(?P<D>\d+))?\s*\)\s*/\s*(?P<r>\d+)$"
)


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(f, d)`` with ``n == f*f*d`` and ``d`` square-free."""
    if n <= 0:
        raise ValueError(f"expected a positive integer, got {n}")
    f, d = 1, 1
    k = 2
    m = n
    while k * k <= m:
        e = 0
        while m % k == 0:
            m //= k
            e += 1
        f *= k ** (e // 2)
        if e % 2:
            d *= k
        k += 1
    return f, d * m


def _floor_surd(q: int, D: int) -> int:
    """floor(q*sqrt(D)) for square-free D > 1 (never an integer when q != 0)."""
    if q == 0:
        return 0
    root = math.isqrt(q * q * D)
    return root if q > 0 else -root - 1


@total_ordering
class QuadraticNumber:
    """The real number ``(p + q*sqrt(D)) / r``; immutable and eagerly normalized."""

    __slots__ = ("p", "q", "r", "D", "_hash")

    def __init__(self, p: int = 0, q: int = 0, r: int = 1, D: int = 1):
        if r == 0:
            raise DivisionByZero("zero denominator")
        if D <= 0:
            raise ValueError("only positive discriminants are supported")
        if D != 1:
            f, D = squarefree_decompose(D)
            q *= f
        if D == 1:
            p, q = p + q, 0
        if q == 0:
            D = 1
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(p, q), r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticNumber is immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def rational(cls, x) -> "QuadraticNumber":
        x = Fraction(x)
        return cls(x.numerator, 0, x.denominator, 1)

    @classmethod
    def sqrt(cls, n: int) -> "QuadraticNumber":
        """Exact square root of a non-negative integer."""
        if n < 0:
            raise ValueError("negative radicand")
        if n == 0:
            return cls(0)
        f, d = squarefree_decompose(n)
        if d == 1:
            return cls(f)
        return cls(0, f, 1, d)

    @classmethod
    def coerce(cls, x: Number) -> "QuadraticNumber":
        if isinstance(x, QuadraticNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot convert {type(x).__name__} to QuadraticNumber")

    # -- structure --------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.q == 0

    @property
    def rational_part(self) -> Fraction:
        return Fraction(self.p, self.r)

    @property
    def surd_part(self) -> Fraction:
        return Fraction(self.q, self.r)

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.p, -self.q, self.r, self.D)

    def norm(self) -> Fraction:
        return Fraction(self.p * self.p - self.q * self.q * self.D, self.r * self.r)

    def as_fraction(self) -> Fraction:
        if self.q:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.p, self.r)

    def __int__(self) -> int:
        fr = self.as_fraction()
        if fr.denominator != 1:
            raise ValueError(f"{self} is not an integer")
        return fr.numerator

    # -- arithmetic -------------------------------------------------------
    def _common_D(self, other: "QuadraticNumber") -> int:
        if self.D == other.D or other.D == 1:
            return self.D
        if self.D == 1:
            return other.D
        raise MixedDiscriminant(f"Q(sqrt({self.D})) and Q(sqrt({other.D}))")

    def __add__(self, other: Number) -> "QuadraticNumber":
        if not isinstance(other, (QuadraticNumber, int, Fraction)):
            return NotImplemented
        o = QuadraticNumber.coerce(other)
        D = self._common_D(o)
        return QuadraticNumber(self.p * o.r + o.p * self.r, self.q * o.r + o.q * self.r, self.r * o.r, D)

    __radd__ = __add__

    def __neg__(self) -> "QuadraticNumber":
        return QuadraticNumber(-self.p, -self.q, self.r, self.D)

    def __pos__(self) -> "QuadraticNumber":
        return self

    def __sub__(self, other: Number) -> "QuadraticNumber":
        if not isinstance(other, (QuadraticNumber, int, Fraction)):
            return NotImplemented
        return self + (-QuadraticNumber.coerce(other))

    def __rsub__(self, other: Number) -> "QuadraticNumber":
        return QuadraticNumber.coerce(other) - self

    def __mul__(self, other: Number) -> "QuadraticNumber":
        if not isinstance(other, (QuadraticNumber, int, Fraction)):
            return NotImplemented
        o = QuadraticNumber.coerce(other)
        D = self._common_D(o)
        return QuadraticNumber(
            self.p * o.p + self.q * o.q * D,
            self.p * o.q + self.q * o.p,
            self.r * o.r,
            D,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticNumber":
        # 1/((p + q√D)/r) = r (p - q√D) / (p² - q² D)
        den = self.p * self.p - self.q * self.q * self.D
        if den == 0:
            raise DivisionByZero("division by zero")
        return QuadraticNumber(self.r * self.p, -self.r * self.q, den, self.D)

    def __truediv__(self, other: Number) -> "QuadraticNumber":
        if not isinstance(other, (QuadraticNumber, int, Fraction)):
            return NotImplemented
        return self * QuadraticNumber.coerce(other).inverse()

    def __rtruediv__(self, other: Number) -> "QuadraticNumber":
        return QuadraticNumber.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "QuadraticNumber":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadraticNumber(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- order ------------------------------------------------------------
    def sign(self) -> int:
        p, q = self.p, self.q
        if q == 0:
            return (p > 0) - (p < 0)
        if p >= 0 and q > 0:
            return 1
        if p <= 0 and q < 0:
            return -1
        # opposite signs: compare p² with q² D
        diff = p * p - q * q * self.D
        return (p > 0) - (p < 0) if diff > 0 else (q > 0) - (q < 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QuadraticNumber.rational(other)
        if not isinstance(other, QuadraticNumber):
            return NotImplemented
        return (self.p, self.q, self.r, self.D) == (other.p, other.q, other.r, other.D)

    def __lt__(self, other: Number) -> bool:
        if not isinstance(other, (QuadraticNumber, int, Fraction)):
            return NotImplemented
        return (self - other).sign() < 0

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.p, self.q, self.r, self.D)) if self.q else hash(Fraction(self.p, self.r))
            object.__setattr__(self, "_hash", h)
        return h

    def __abs__(self) -> "QuadraticNumber":
        return -self if self.sign() < 0 else self

    def __bool__(self) -> bool:
        return self.p != 0 or self.q != 0

    # -- floor / ceiling --------------------------------------------------
    def floor_exact(self) -> tuple[int, bool]:
        """Return ``(floor(x), x is an integer)``, decided exactly."""
        if self.q == 0:
            fl = self.p // self.r
            return fl, self.p % self.r == 0
        # y = p + q√D lies strictly inside (p + a, p + a + 1); floor(y/r) = floor(floor(y)/r)
        return (self.p + _floor_surd(self.q, self.D)) // self.r, False

    def __floor__(self) -> int:
        return self.floor_exact()[0]

    def __ceil__(self) -> int:
        return -(-self).floor_exact()[0]

    def is_integer(self) -> bool:
        return self.q == 0 and self.p % self.r == 0

    # -- conversions ------------------------------------------------------
    def __float__(self) -> float:
        if self.q == 0:
            return self.p / self.r
        K = 80
        s = 1 if self.q > 0 else -1
        surd = s * math.isqrt(self.q * self.q * self.D << (2 * K))
        return float(Fraction((self.p << K) + surd, self.r << K))

    def to_text(self) -> str:
        """Machine form ``"p q r D"``."""
        return f"{self.p} {self.q} {self.r} {self.D}"

    @classmethod
    def from_text(cls, text: str) -> "QuadraticNumber":
        parts = text.split()
        if len(parts) != 4:
            raise ValueError(f"expected 'p q r D', got {text!r}")
        p, q, r, D = map(int, parts)
        return cls(p, q, r, D)

    def human(self) -> str:
        """Human form ``"(p+q√D)/r"``."""
        if self.q == 0:
            return f"({self.p})/{self.r}"
        sign = "+" if self.q > 0 else "-"
        return f"({self.p}{sign}{abs(self.q)}√{self.D})/{self.r}"

    @classmethod
    def from_human(cls, text: str) -> "QuadraticNumber":
        m = _HUMAN_RE.match(text.strip())
        if not m:
            raise ValueError(f"cannot parse {text!r}")
        p, r = int(m["p"]), int(m["r"])
        if m["q"] is None:
            return cls(p, 0, r, 1)
        q = int(m["q"]) * (1 if m["sign"] == "+" else -1)
        return cls(p, q, r, int(m["D"]))

    @classmethod
    def parse(cls, text) -> "QuadraticNumber":
        """Accept the machine form, the human form, or a plain rational literal."""
        if isinstance(text, (int, Fraction)):
            return cls.rational(text)
        if isinstance(text, QuadraticNumber):
            return text
        text = str(text).strip()
        if text.startswith("("):
            return cls.from_human(text)
        if len(text.split()) == 4:
            return cls.from_text(text)
        return cls.rational(Fraction(text))

    def __repr__(self) -> str:
        return f"QuadraticNumber({self.p}, {self.q}, {self.r}, {self.D})"

    def __str__(self) -> str:
        if self.q == 0:
            return str(Fraction(self.p, self.r))
        return self.human()


Q = QuadraticNumber


def qn(x) -> QuadraticNumber:
    return QuadraticNumber.parse(x)


def arith(x: Number, y: Number, op: str) -> QuadraticNumber:
    x, y = QuadraticNumber.coerce(x), QuadraticNumber.coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")


def sign_exact(x: Number) -> int:
    return QuadraticNumber.coerce(x).sign()


def floor_exact(x: Number) -> tuple[int, bool]:
    return QuadraticNumber.coerce(x).floor_exact()


def ceil_exact(x: Number) -> tuple[int, bool]:
    x = QuadraticNumber.coerce(x)
    fl, is_int = (-x).floor_exact()
    return -fl, is_int


def compare(x: Number, y: Number) -> int:
    return (QuadraticNumber.coerce(x) - QuadraticNumber.coerce(y)).sign()


def bracket(x: Number, sigma: int) -> int:
    """``[x]_sigma``: floor for sigma=+1, ceiling for sigma=-1."""
    if sigma == 1:
        return floor_exact(x)[0]
    if sigma == -1:
        return ceil_exact(x)[0]
    raise ValueError(f"sigma must be +1 or -1, got {sigma}")


PHI = QuadraticNumber(1, 1, 2, 5)
SQRT2 = QuadraticNumber.sqrt(2)
SQRT3 = QuadraticNumber.sqrt(3)
SQRT5 = QuadraticNumber.sqrt(5)
