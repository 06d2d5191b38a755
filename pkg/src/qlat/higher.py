"""Quasilattices cut from an N-dimensional lattice (N interval lengths).

Scalars are either exact quadratic numbers or :class:`AlgebraicReal`
expressions evaluated with certified interval arithmetic.  When every scalar of
a spec is quadratic, the whole computation stays exact and an ``N = 2`` spec
reproduces :mod:`qlat.geometry` point for point.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import floor, isqrt
from typing import Sequence, Union

from .errors import DegenerateBasis, NotPositiveBasis, OnGridLine, PrecisionExhausted
from .geometry import GeometricSpec, GridTime, QuasilatticePoints, letters_for, tile_lengths
from .numeric import QuadraticNumber, qn

DEFAULT_CAP = 4096
START_BITS = 48


def precision_cap() -> int:
    raw = os.environ.get("QLAT_PRECISION_CAP")
    return int(raw) if raw else DEFAULT_CAP


# -- intervals ------------------------------------------------------------

def _round_down(x: Fraction, bits: int) -> Fraction:
    return Fraction(floor(x * (1 << bits)), 1 << bits)


def _round_up(x: Fraction, bits: int) -> Fraction:
    return Fraction(-floor(-x * (1 << bits)), 1 << bits)


@dataclass(frozen=True)
class Interval:
    """Closed interval with rational endpoints; every operation rounds outward to ``bits``."""

    lo: Fraction
    hi: Fraction
    bits: int = START_BITS

    @classmethod
    def point(cls, x, bits: int) -> "Interval":
        x = Fraction(x)
        return cls(_round_down(x, bits), _round_up(x, bits), bits)

    def _make(self, lo, hi) -> "Interval":
        return Interval(_round_down(lo, self.bits), _round_up(hi, self.bits), self.bits)

    def __add__(self, o: "Interval") -> "Interval":
        return self._make(self.lo + o.lo, self.hi + o.hi)

    def __sub__(self, o: "Interval") -> "Interval":
        return self._make(self.lo - o.hi, self.hi - o.lo)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo, self.bits)

    def __mul__(self, o: "Interval") -> "Interval":
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return self._make(min(ps), max(ps))

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def inverse(self) -> "Interval":
        if self.contains_zero():
            raise ZeroDivisionError("interval straddles zero")
        return self._make(1 / self.hi, 1 / self.lo)

    def __truediv__(self, o: "Interval") -> "Interval":
        return self * o.inverse()

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def certified_floor(self):
        """``floor`` of every point if the interval sits strictly between two integers, else ``None``."""
        k = floor(self.lo)
        if k < self.lo and self.hi < k + 1:
            return k
        return None

    def sign(self):
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None


# -- algebraic reals ------------------------------------------------------

class AlgebraicReal:
    """Expression DAG over exact leaves; :meth:`enclose` gives a certified interval."""

    __slots__ = ("op", "args", "_cache")

    def __init__(self, op: str, args: tuple):
        self.op = op
        self.args = args
        self._cache = {}

    # construction
    @classmethod
    def const(cls, x) -> "AlgebraicReal":
        if isinstance(x, AlgebraicReal):
            return x
        if isinstance(x, QuadraticNumber):
            return cls("quad", (x,))
        return cls("frac", (Fraction(x),))

    @classmethod
    def root(cls, coeffs: Sequence[int], lo, hi) -> "AlgebraicReal":
        """The unique root of ``sum coeffs[i] x^i`` in ``[lo, hi]`` (sign change required)."""
        lo, hi = Fraction(lo), Fraction(hi)
        coeffs = tuple(Fraction(c) for c in coeffs)
        flo, fhi = _poly(coeffs, lo), _poly(coeffs, hi)
        if flo == 0 or fhi == 0 or (flo > 0) == (fhi > 0):
            raise ValueError("isolating interval needs a strict sign change")
        return cls("root", (coeffs, lo, hi))

    def _bin(self, op, other, swap=False):
        other = AlgebraicReal.const(other)
        return AlgebraicReal(op, (other, self) if swap else (self, other))

    def __add__(self, o):
        return self._bin("add", o)

    def __radd__(self, o):
        return self._bin("add", o, True)

    def __sub__(self, o):
        return self._bin("sub", o)

    def __rsub__(self, o):
        return self._bin("sub", o, True)

    def __mul__(self, o):
        return self._bin("mul", o)

    def __rmul__(self, o):
        return self._bin("mul", o, True)

    def __truediv__(self, o):
        return self._bin("div", o)

    def __rtruediv__(self, o):
        return self._bin("div", o, True)

    def __neg__(self):
        return AlgebraicReal("neg", (self,))

    # evaluation
    def enclose(self, bits: int) -> Interval:
        hit = self._cache.get(bits)
        if hit is not None:
            return hit
        op, a = self.op, self.args
        if op == "frac":
            out = Interval.point(a[0], bits)
        elif op == "quad":
            out = _enclose_quad(a[0], bits)
        elif op == "root":
            out = _enclose_root(*a, bits)
        elif op == "neg":
            out = -a[0].enclose(bits)
        else:
            x, y = a[0].enclose(bits), a[1].enclose(bits)
            if op == "add":
                out = x + y
            elif op == "sub":
                out = x - y
            elif op == "mul":
                out = x * y
            elif op == "div":
                if y.contains_zero():
                    raise _NeedMoreBits()
                out = x / y
            else:
                raise ValueError(op)
        self._cache[bits] = out
        return out

    def __float__(self) -> float:
        iv = _refine(self, lambda iv: iv.width < Fraction(1, 1 << 60))
        return float((iv.lo + iv.hi) / 2)

    def __repr__(self) -> str:
        return f"AlgebraicReal({float(self):.17g})"

    def to_json(self):
        op, a = self.op, self.args
        if op == "frac":
            return str(a[0])
        if op == "quad":
            return a[0].to_text()
        if op == "root":
            return {"root": [str(c) for c in a[0]], "lo": str(a[1]), "hi": str(a[2])}
        return {"op": op, "args": [x.to_json() for x in a]}

    @classmethod
    def from_json(cls, data) -> "AlgebraicReal":
        if isinstance(data, str):
            return cls.const(qn(data))
        if "root" in data:
            return cls.root([Fraction(c) for c in data["root"]], Fraction(data["lo"]), Fraction(data["hi"]))
        return cls(data["op"], tuple(cls.from_json(x) for x in data["args"]))


class _NeedMoreBits(Exception):
    pass


def _poly(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _enclose_quad(x: QuadraticNumber, bits: int) -> Interval:
    scale = 1 << bits
    if not x.q:
        return Interval.point(Fraction(x.p, x.r), bits)
    s = isqrt(x.q * x.q * x.D * scale * scale)  # floor(|q| sqrt(D) 2^bits)
    lo, hi = Fraction(s, scale), Fraction(s + 1, scale)
    if x.q < 0:
        lo, hi = -hi, -lo
    return Interval(_round_down((x.p + lo) / x.r, bits), _round_up((x.p + hi) / x.r, bits), bits)


_ROOT_CACHE: dict = {}


def _enclose_root(coeffs, lo, hi, bits) -> Interval:
    key = (coeffs, lo, hi)
    lo, hi = _ROOT_CACHE.get(key, (lo, hi))
    target = Fraction(1, 1 << bits)
    up = _poly(coeffs, hi) > 0
    while hi - lo > target:
        mid = (lo + hi) / 2
        v = _poly(coeffs, mid)
        if v == 0:
            lo = hi = mid
            break
        if (v > 0) == up:
            hi = mid
        else:
            lo = mid
    _ROOT_CACHE[key] = (lo, hi)
    return Interval(_round_down(lo, bits), _round_up(hi, bits), bits)


Scalar = Union[QuadraticNumber, AlgebraicReal]


def _refine(x: AlgebraicReal, done) -> Interval:
    bits = START_BITS
    cap = precision_cap()
    while bits <= cap:
        try:
            iv = x.enclose(bits)
            if done(iv):
                return iv
        except _NeedMoreBits:
            pass
        bits *= 2
    raise PrecisionExhausted(f"could not certify within {cap} bits")


def certified_floor(x: Scalar) -> int:
    """Exact floor; for interval scalars only accepted once the interval excludes every integer."""
    if isinstance(x, QuadraticNumber):
        k, is_int = x.floor_exact()
        if is_int:
            raise OnGridLine("value is an integer")
        return k
    iv = _refine(x, lambda iv: iv.certified_floor() is not None)
    return iv.certified_floor()


def certified_sign(x: Scalar) -> int:
    if isinstance(x, QuadraticNumber):
        return x.sign()
    return _refine(x, lambda iv: iv.sign() is not None).sign()


def certified_less(x: Scalar, y: Scalar) -> bool:
    if isinstance(x, QuadraticNumber) and isinstance(y, QuadraticNumber):
        if x == y:
            raise OnGridLine("coincident values")
        return x < y
    return certified_sign(_lift(y) - _lift(x)) > 0


def _lift(x) -> Scalar:
    if isinstance(x, AlgebraicReal):
        return x
    return AlgebraicReal.const(qn(x))


def _is_exact(x) -> bool:
    return isinstance(x, (QuadraticNumber, int, Fraction))


def certify_incommensurate(x: Scalar, y: Scalar, max_den: int = 64) -> bool:
    """True once ``x / y`` is shown to differ from every ``p/q`` with ``q <= max_den``."""
    if _is_exact(x) and _is_exact(y):
        return not (qn(x) / qn(y)).is_rational
    ratio = _lift(x) / _lift(y)
    for q in range(1, max_den + 1):
        certified_floor(ratio * q)
    return True


# -- specs ----------------------------------------------------------------

def _scalar(x) -> Scalar:
    if isinstance(x, AlgebraicReal):
        return x
    return qn(x)


@dataclass(frozen=True)
class BasisVectorN:
    par: Scalar
    perp: tuple

    def __post_init__(self):
        object.__setattr__(self, "par", _scalar(self.par))
        object.__setattr__(self, "perp", tuple(_scalar(v) for v in self.perp))


@dataclass(frozen=True)
class GeometricSpecN:
    basis: tuple
    q0_par: Scalar
    q0_perp: tuple

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "q0_par", _scalar(self.q0_par))
        object.__setattr__(self, "q0_perp", tuple(_scalar(v) for v in self.q0_perp))
        n = len(self.basis)
        if any(len(b.perp) != n - 1 for b in self.basis) or len(self.q0_perp) != n - 1:
            raise DegenerateBasis("every vector needs N - 1 perpendicular components")

    @property
    def N(self) -> int:
        return len(self.basis)

    @property
    def exact(self) -> bool:
        vals = [self.q0_par, *self.q0_perp]
        for b in self.basis:
            vals += [b.par, *b.perp]
        return all(isinstance(v, QuadraticNumber) for v in vals)

    def matrix(self) -> list:
        """Rows are basis vectors in (par, perp...) coordinates."""
        return [[b.par, *b.perp] for b in self.basis]

    def umklaap(self, shifts: Sequence[int]) -> "GeometricSpecN":
        par = self.q0_par
        perp = list(self.q0_perp)
        for k, b in zip(shifts, self.basis):
            if k:
                par = par + b.par * k
                perp = [p + v * k for p, v in zip(perp, b.perp)]
        return GeometricSpecN(self.basis, par, tuple(perp))

    @classmethod
    def from_spec(cls, spec: GeometricSpec) -> "GeometricSpecN":
        return cls(
            (BasisVectorN(spec.m1.par, (spec.m1.perp,)), BasisVectorN(spec.m2.par, (spec.m2.perp,))),
            spec.q0_par,
            (spec.q0_perp,),
        )

    def to_json(self) -> dict:
        enc = lambda v: v.to_text() if isinstance(v, QuadraticNumber) else v.to_json()
        return {
            "basis": [{"par": enc(b.par), "perp": [enc(v) for v in b.perp]} for b in self.basis],
            "q0": {"par": enc(self.q0_par), "perp": [enc(v) for v in self.q0_perp]},
        }

    @classmethod
    def from_json(cls, data: dict) -> "GeometricSpecN":
        def dec(v):
            if isinstance(v, str):
                return qn(v)
            return AlgebraicReal.from_json(v)

        basis = tuple(BasisVectorN(dec(b["par"]), tuple(dec(v) for v in b["perp"])) for b in data["basis"])
        q0 = data.get("q0", {})
        n = len(basis)
        return cls(basis, dec(q0.get("par", "0")), tuple(dec(v) for v in q0.get("perp", ["0"] * (n - 1))))


def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def _inverse(M):
    n = len(M)
    det = _det(M)
    if certified_sign(det if not _is_exact(det) else qn(det)) == 0:
        raise DegenerateBasis("basis vectors are linearly dependent")
    inv = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]
            cof = _det(minor) if n > 1 else 1
            if (i + j) % 2:
                cof = -cof
            inv[j][i] = cof / det
    return inv


@dataclass(frozen=True)
class DualData:
    contractions: tuple  # m~k . e_par
    offsets: tuple  # m~k . q0


def dual_data(spec: GeometricSpecN) -> DualData:
    """The dual basis evaluated on ``e_par`` and on ``q0``."""
    inv = _inverse(spec.matrix())
    q = [spec.q0_par, *spec.q0_perp]
    n = spec.N
    contractions = tuple(inv[0][k] for k in range(n))
    offsets = []
    for k in range(n):
        acc = None
        for i in range(n):
            term = q[i] * inv[i][k]
            acc = term if acc is None else acc + term
        offsets.append(acc)
    return DualData(contractions, tuple(offsets))


def validate_spec_n(spec: GeometricSpecN, max_den: int = 32) -> DualData:
    for b in spec.basis:
        if certified_sign(b.par) <= 0:
            raise NotPositiveBasis("a basis vector projects non-positively on the line")
    dd = dual_data(spec)
    for c in dd.contractions:
        if certified_sign(c) <= 0:
            raise NotPositiveBasis("the line leaves the positive cone of the basis")
    for i in range(spec.N):
        for j in range(i + 1, spec.N):
            certify_incommensurate(dd.contractions[i], dd.contractions[j], max_den)
    return dd


def ngrid_times(spec: GeometricSpecN, k: int, n_range: tuple[int, int]) -> list[GridTime]:
    """Crossing times of the family-``k`` grid (``k`` from 1) with indices in ``n_range``."""
    dd = dual_data(spec)
    c, u = dd.contractions[k - 1], dd.offsets[k - 1]
    return [GridTime((n - u) / c, k, n) for n in range(n_range[0], n_range[1] + 1)]


@dataclass(frozen=True)
class PointsN:
    """Points ``x_n = sum_k coeffs[k] m_k par + C`` with the family of each gap."""

    indices: tuple
    coeffs: tuple
    families: tuple
    spec: GeometricSpecN

    def x(self, i: int) -> Scalar:
        acc = midpoint_constant_n(self.spec)
        for k, b in zip(self.coeffs[i], self.spec.basis):
            if k:
                acc = acc + b.par * k
        return acc

    @property
    def xs(self) -> list:
        return [self.x(i) for i in range(len(self.indices))]

    @property
    def word(self) -> str:
        return "".join(str(f) for f in self.families)

    def gap_alphabet(self) -> set:
        return set(self.families)


def midpoint_constant_n(spec: GeometricSpecN) -> Scalar:
    acc = -spec.q0_par
    for b in spec.basis:
        acc = acc + b.par / 2
    return acc


def _floor_at(u, c, t):
    return certified_floor(u + c * t)


def generate_degreeN(spec: GeometricSpecN, n_range: tuple[int, int]) -> PointsN:
    """Sweep the N-grid along the line; plateau index is ``sum_k floor(m~k q(t)) + 1``."""
    dd = validate_spec_n(spec) if not spec.exact else dual_data(spec)
    if spec.exact:
        for b in spec.basis:
            if b.par.sign() <= 0:
                raise NotPositiveBasis("a basis vector projects non-positively on the line")
        if any(c.sign() <= 0 for c in dd.contractions):
            raise NotPositiveBasis("the line leaves the positive cone of the basis")
    lo, hi = n_range
    n = spec.N
    cs, us = dd.contractions, dd.offsets
    csum_f = sum(float(c) for c in cs)
    usum_f = sum(float(u) for u in us)
    # a rational start time safely before index lo - 1 and an end safely after hi + 1
    t0 = Fraction((lo - 2 - n - usum_f) / csum_f).limit_denominator(1 << 20)
    t1 = Fraction((hi + 2 + n - usum_f) / csum_f).limit_denominator(1 << 20)
    start = [_floor_at(us[k], cs[k], t0) for k in range(n)]
    end = [_floor_at(us[k], cs[k], t1) for k in range(n)]
    while sum(start) + 1 > lo - 1:
        t0 -= 1
        start = [_floor_at(us[k], cs[k], t0) for k in range(n)]
    while sum(end) + 1 < hi + 1:
        t1 += 1
        end = [_floor_at(us[k], cs[k], t1) for k in range(n)]
    events = []
    for k in range(n):
        for j in range(start[k] + 1, end[k] + 1):
            events.append(((j - us[k]) / cs[k], k))
    events = _sort_certified(events, spec.exact)
    ks = list(start)
    idx, coeffs, fams = [], [], []
    cur_n = sum(ks) + 1
    if lo <= cur_n <= hi:
        idx.append(cur_n)
        coeffs.append(tuple(ks))
    for _, k in events:
        ks[k] += 1
        cur_n += 1
        if lo <= cur_n <= hi:
            if idx:
                fams.append(k + 1)
            idx.append(cur_n)
            coeffs.append(tuple(ks))
    if idx != list(range(lo, hi + 1)):
        raise AssertionError("sweep did not cover the requested window")
    return PointsN(tuple(idx), tuple(coeffs), tuple(fams), spec)


def _sort_certified(events, exact: bool):
    if exact:
        events.sort(key=lambda e: e[0])
        for (a, _), (b, _) in zip(events, events[1:]):
            if a == b:
                raise OnGridLine("two grid hyperplanes meet the line at one point")
        return events
    bits = START_BITS
    cap = precision_cap()
    while bits <= cap:
        try:
            ivs = [(t.enclose(bits), k, t) for t, k in events]
        except _NeedMoreBits:
            bits *= 2
            continue
        ivs.sort(key=lambda e: e[0].lo + e[0].hi)
        if all(a[0].hi < b[0].lo for a, b in zip(ivs, ivs[1:])):
            return [(t, k) for _, k, t in ivs]
        bits *= 2
    raise PrecisionExhausted(f"could not order crossing times within {cap} bits")


def to_quasilattice_points(points: PointsN) -> QuasilatticePoints:
    """Exact ``N = 2`` output in the form used by :mod:`qlat.geometry`."""
    spec = points.spec
    if spec.N != 2 or not spec.exact:
        raise ValueError("only exact two-dimensional specs convert")
    xs = points.xs
    S, L = sorted((spec.basis[0].par, spec.basis[1].par))
    return QuasilatticePoints(points.indices, tuple(xs), letters_for([b - a for a, b in zip(xs, xs[1:])], S, L))


# -- a cubic toy ----------------------------------------------------------

PLASTIC = AlgebraicReal.root([-1, -1, 0, 1], 1, 2)  # real root of x^3 = x + 1


def cubic_toy_spec(gamma: AlgebraicReal = PLASTIC, q0=(Fraction(1, 3), Fraction(1, 5), Fraction(1, 7))) -> GeometricSpecN:
    """Z^3 cut by the line through ``q0`` with direction ``d = (1, gamma, gamma^2)``.

    The frame is ``(d, p1, p2)`` with ``p1 = (-gamma, 1, 0)`` and
    ``p2 = (-gamma^2, 0, 1)`` spanning the plane orthogonal to ``d``; parallel
    coordinates are therefore measured in units of ``|d|``.  ``q0`` is given in
    ambient coordinates.
    """
    g = gamma
    g2 = g * g
    frame = [[AlgebraicReal.const(1), g, g2], [-g, AlgebraicReal.const(1), AlgebraicReal.const(0)], [-g2, AlgebraicReal.const(0), AlgebraicReal.const(1)]]
    inv = _inverse(frame)  # row i: coordinates of the ambient unit vector e_i in the frame
    basis = tuple(BasisVectorN(inv[i][0], (inv[i][1], inv[i][2])) for i in range(3))
    qc = [None, None, None]
    for j in range(3):
        acc = None
        for i in range(3):
            term = inv[i][j] * Fraction(q0[i])
            acc = term if acc is None else acc + term
        qc[j] = acc
    return GeometricSpecN(basis, qc[0], (qc[1], qc[2]))
