"""Three equivalent constructions of quadratic 1D quasilattices.

A :class:`GeometricSpec` is a 2D lattice basis ``{m1, m2}`` written in the
frame adapted to the cut line (``par`` along the line, ``perp`` across it)
plus the line offset ``q0``.  From it we build the quasilattice by

* dualizing the bi-grid of grid-line crossing times (:func:`dualize`),
* the index-driven midpoint cut-and-project formula (:func:`cut_and_project`),
* slicing the 2-torus with a perpendicular cross-cut (:func:`torus_slice`).

All three are exact; they must agree point for point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional

from .errors import DegenerateBasis, NotPositiveBasis, OnGridLine, SingularLine
from .numeric import Number, QuadraticNumber, qn

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class BasisVector:
    par: QuadraticNumber
    perp: QuadraticNumber

    def __post_init__(self):
        object.__setattr__(self, "par", qn(self.par))
        object.__setattr__(self, "perp", qn(self.perp))
        if not self.par and not self.perp:
            raise DegenerateBasis("zero basis vector")

    def __add__(self, other: "BasisVector") -> "BasisVector":
        return BasisVector(self.par + other.par, self.perp + other.perp)

    def scale(self, k: Number) -> "BasisVector":
        return BasisVector(self.par * k, self.perp * k)


def combo(c1: Number, v1: BasisVector, c2: Number, v2: BasisVector) -> BasisVector:
    return BasisVector(v1.par * c1 + v2.par * c2, v1.perp * c1 + v2.perp * c2)


@dataclass(frozen=True)
class GeometricSpec:
    m1: BasisVector
    m2: BasisVector
    q0_par: QuadraticNumber = field(default_factory=lambda: QuadraticNumber(0))
    q0_perp: QuadraticNumber = field(default_factory=lambda: QuadraticNumber(0))

    def __post_init__(self):
        object.__setattr__(self, "q0_par", qn(self.q0_par))
        object.__setattr__(self, "q0_perp", qn(self.q0_perp))

    @classmethod
    def make(cls, m1, m2, q0=(0, 0)) -> "GeometricSpec":
        """Build from plain ``(par, perp)`` pairs."""
        return cls(BasisVector(*m1), BasisVector(*m2), qn(q0[0]), qn(q0[1]))

    @property
    def det(self) -> QuadraticNumber:
        return self.m1.par * self.m2.perp - self.m2.par * self.m1.perp

    @property
    def width(self) -> QuadraticNumber:
        """Extent of the basis parallelogram across the line, ``|m2perp - m1perp|``."""
        return abs(self.m2.perp - self.m1.perp)

    def with_q0(self, par: Number, perp: Number) -> "GeometricSpec":
        return replace(self, q0_par=qn(par), q0_perp=qn(perp))

    def flipped(self) -> "GeometricSpec":
        """Same quasilattice with the perpendicular axis reversed."""
        return GeometricSpec(
            BasisVector(self.m1.par, -self.m1.perp),
            BasisVector(self.m2.par, -self.m2.perp),
            self.q0_par,
            -self.q0_perp,
        )

    def oriented(self) -> "GeometricSpec":
        """Orientation with ``m1.perp < 0 < m2.perp`` (labels kept, perp axis flipped if needed)."""
        return self.flipped() if self.m1.perp.sign() > 0 else self

    def lattice_point(self, n1: int, n2: int) -> BasisVector:
        return combo(n1, self.m1, n2, self.m2)

    def umklaap(self, n1: int, n2: int) -> "GeometricSpec":
        dpar = self.m1.par * n1 + self.m2.par * n2
        dperp = self.m1.perp * n1 + self.m2.perp * n2
        return self.with_q0(self.q0_par + dpar, self.q0_perp + dperp)


@dataclass(frozen=True)
class GridTime:
    t: QuadraticNumber
    family: int
    index: int


@dataclass(frozen=True)
class QuasilatticePoints:
    indices: tuple
    xs: tuple
    word: str

    @property
    def points(self) -> list:
        return list(zip(self.indices, self.xs))

    def __len__(self) -> int:
        return len(self.xs)


@dataclass(frozen=True)
class PositivityReport:
    ok: bool
    violations: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


def dual_contractions(spec: GeometricSpec) -> tuple[QuadraticNumber, QuadraticNumber]:
    """``(m~1 . e_par, m~2 . e_par)`` from the inverse basis matrix."""
    det = spec.det
    if not det:
        raise DegenerateBasis("basis vectors are parallel")
    return spec.m2.perp / det, -spec.m1.perp / det


def dual_coordinates(spec: GeometricSpec, par: Number, perp: Number) -> tuple[QuadraticNumber, QuadraticNumber]:
    """Coordinates of the point ``(par, perp)`` in the ``{m1, m2}`` basis."""
    det = spec.det
    if not det:
        raise DegenerateBasis("basis vectors are parallel")
    u1 = (spec.m2.perp * par - spec.m2.par * perp) / det
    u2 = (spec.m1.par * perp - spec.m1.perp * par) / det
    return u1, u2


def validate_positive_basis(spec: GeometricSpec) -> PositivityReport:
    violations = []
    try:
        c1, c2 = dual_contractions(spec)
    except DegenerateBasis:
        return PositivityReport(False, ("degenerate",))
    if c1.sign() <= 0 or c2.sign() <= 0:
        violations.append("positive_basis_a")
    if spec.m1.par.sign() <= 0 or spec.m2.par.sign() <= 0:
        violations.append("positive_basis_b")
    ratio = spec.m1.perp / spec.m2.perp if spec.m2.perp else None
    if ratio is None or ratio.is_rational:
        violations.append("rational_slope")
    return PositivityReport(not violations, tuple(violations))


def require_positive(spec: GeometricSpec) -> None:
    report = validate_positive_basis(spec)
    if not report:
        raise NotPositiveBasis(f"not a positive basis: {', '.join(report.violations)}")


def singular_point(spec: GeometricSpec) -> Optional[tuple[int, int]]:
    """Lattice point ``(k1, k2)`` lying on the cut line, or ``None``.

    The line hits ``k1 m1 + k2 m2`` iff ``k1 m1perp + k2 m2perp == q0perp``;
    splitting rational and surd parts gives a 2x2 rational system.
    """
    a, b, c = spec.m1.perp, spec.m2.perp, spec.q0_perp
    surds = {v.D for v in (a, b, c) if v.q}
    if len(surds) > 1:
        return None
    (a1, b1, c1) = (a.rational_part, b.rational_part, c.rational_part)
    (a2, b2, c2) = (a.surd_part, b.surd_part, c.surd_part)
    det = a1 * b2 - a2 * b1
    if det == 0:
        raise DegenerateBasis("perpendicular components are rationally dependent")
    k1 = (c1 * b2 - c2 * b1) / det
    k2 = (a1 * c2 - a2 * c1) / det
    if k1.denominator == 1 and k2.denominator == 1:
        return int(k1), int(k2)
    return None


def singular_index(spec: GeometricSpec) -> Optional[int]:
    """Index ``n*`` at which the floor arguments are integers, if the line is singular."""
    pt = singular_point(spec)
    return None if pt is None else pt[0] + pt[1]


def letters_for(gaps: Iterable[QuadraticNumber], short: QuadraticNumber, long: QuadraticNumber) -> str:
    out = []
    for g in gaps:
        if g == short:
            out.append("S")
        elif g == long:
            out.append("L")
        else:
            raise ValueError(f"gap {g} is neither {short} nor {long}")
    return "".join(out)


def make_points(indices, xs, short, long) -> QuasilatticePoints:
    gaps = [b - a for a, b in zip(xs, xs[1:])]
    return QuasilatticePoints(tuple(indices), tuple(xs), letters_for(gaps, short, long))


def tile_lengths(spec: GeometricSpec) -> tuple[QuadraticNumber, QuadraticNumber]:
    """``(S, L)``: the short and long step lengths."""
    a, b = spec.m1.par, spec.m2.par
    return (a, b) if a < b else (b, a)


def midpoint_constant(spec: GeometricSpec) -> QuadraticNumber:
    """The phase constant that makes the quasilattice project cell midpoints."""
    return (spec.m1.par + spec.m2.par) * HALF - spec.q0_par


# -- perspective 1: bi-grid dualization -----------------------------------

def grid_coordinates(spec: GeometricSpec, t: Number) -> tuple[QuadraticNumber, QuadraticNumber]:
    """``(m~1 q(t), m~2 q(t))`` for the point ``q0 + t e_par``."""
    return dual_coordinates(spec, spec.q0_par + t, spec.q0_perp)


def grid_time(spec: GeometricSpec, family: int, n: int) -> QuadraticNumber:
    u1, u2 = grid_coordinates(spec, 0)
    c1, c2 = dual_contractions(spec)
    if family == 1:
        return (n - u1) / c1
    if family == 2:
        return (n - u2) / c2
    raise ValueError("family must be 1 or 2")


def bigrid_times(spec: GeometricSpec, n_range: tuple[int, int]) -> list[GridTime]:
    """Both families of crossing times with index in ``n_range`` (inclusive), merged by ``t``."""
    require_positive(spec)
    lo, hi = n_range
    u1, u2 = grid_coordinates(spec, 0)
    c1, c2 = dual_contractions(spec)
    times = [GridTime((n - u1) / c1, 1, n) for n in range(lo, hi + 1)]
    times += [GridTime((n - u2) / c2, 2, n) for n in range(lo, hi + 1)]
    times.sort(key=lambda g: (g.t, g.family))
    return times


def dualize(spec: GeometricSpec, t: Number) -> QuadraticNumber:
    """Quasilattice point assigned to the bi-grid plateau containing ``t``."""
    return dualize_indexed(spec, t)[1]


def dualize_indexed(spec: GeometricSpec, t: Number) -> tuple[int, QuadraticNumber]:
    require_positive(spec)
    u1, u2 = grid_coordinates(spec, t)
    k1, int1 = u1.floor_exact()
    k2, int2 = u2.floor_exact()
    if int1 or int2:
        raise OnGridLine(f"t = {t} lies on a grid line")
    x = spec.m1.par * k1 + spec.m2.par * k2 + midpoint_constant(spec)
    return k1 + k2 + 1, x


def dualization_points(spec: GeometricSpec, n_range: tuple[int, int]) -> QuasilatticePoints:
    """Sweep ``t`` across the bi-grid and dualize one sample per plateau.

    The plateau reached after ``k1`` family-1 and ``k2`` family-2 crossings
    carries index ``k1 + k2 + 1``.
    """
    require_positive(spec)
    lo, hi = n_range
    u1, u2 = grid_coordinates(spec, 0)
    c1, c2 = dual_contractions(spec)
    csum = c1 + c2
    # times at which u1 + u2 passes lo - 1 and hi + 1 bound every wanted plateau
    t_lo = (lo - 1 - u1 - u2) / csum
    t_hi = (hi + 1 - u1 - u2) / csum
    k_lo1 = (u1 + c1 * t_lo).floor_exact()[0]
    k_hi1 = (u1 + c1 * t_hi).floor_exact()[0] + 1
    k_lo2 = (u2 + c2 * t_lo).floor_exact()[0]
    k_hi2 = (u2 + c2 * t_hi).floor_exact()[0] + 1
    times = [(n - u1) / c1 for n in range(k_lo1, k_hi1 + 1)]
    times += [(n - u2) / c2 for n in range(k_lo2, k_hi2 + 1)]
    times.sort()
    for a, b in zip(times, times[1:]):
        if a == b:
            raise SingularLine("two grid lines cross on the cut line")
    out = {}
    for a, b in zip(times, times[1:]):
        n, x = dualize_indexed(spec, (a + b) * HALF)
        if lo <= n <= hi:
            out[n] = x
    missing = [n for n in range(lo, hi + 1) if n not in out]
    if missing:
        raise AssertionError(f"sweep missed indices {missing[:5]}")
    idx = list(range(lo, hi + 1))
    return make_points(idx, [out[n] for n in idx], *tile_lengths(spec))


# -- perspective 2: midpoint cut-and-project ------------------------------

def floor_arguments(spec: GeometricSpec, n: int, q0_perp: Optional[QuadraticNumber] = None):
    """The two floor arguments of the symmetric formula; they always sum to ``n``."""
    qp = spec.q0_perp if q0_perp is None else q0_perp
    w = spec.m2.perp - spec.m1.perp
    A = (spec.m2.perp * n - qp) / w
    B = (spec.m1.perp * n - qp) / (-w)
    return A, B


def cut_and_project_point(spec: GeometricSpec, n: int) -> QuadraticNumber:
    A, B = floor_arguments(spec, n)
    fa, ia = A.floor_exact()
    fb, ib = B.floor_exact()
    if ia or ib:
        raise SingularLine(f"cut line meets a lattice point (index {n})")
    return (spec.m1.par * (2 * fa + 1) + spec.m2.par * (2 * fb + 1)) * HALF - spec.q0_par


def cut_and_project(spec: GeometricSpec, n_range: tuple[int, int]) -> QuasilatticePoints:
    require_positive(spec)
    lo, hi = n_range
    idx = list(range(lo, hi + 1))
    xs = [cut_and_project_point(spec, n) for n in idx]
    return make_points(idx, xs, *tile_lengths(spec))


# -- perspective 3: slicing the 2-torus -----------------------------------

def torus_slice(spec: GeometricSpec, n_range: tuple[int, int]) -> QuasilatticePoints:
    """Crossings of the wrapped line with the perpendicular cross-cut through the marked point.

    Lifted to the plane, the cross-cut of length ``|m2perp - m1perp|`` centred on
    the image of the cell midpoints selects exactly those midpoints
    ``(j1 + 1/2) m1 + (j2 + 1/2) m2`` whose perpendicular offset from the line is
    under half the cut length.  Every cell crossed by the line has
    ``j1 + j2 = n - 1`` for its ordinal ``n``; a float estimate only seeds the
    candidate ``j1`` values, membership is decided exactly.
    """
    require_positive(spec)
    lo, hi = n_range
    half_cut = spec.width * HALF
    m1p, m2p = spec.m1.perp, spec.m2.perp
    f1, f2, fq = float(m1p), float(m2p), float(spec.q0_perp)
    xs = []
    for n in range(lo, hi + 1):
        # perpendicular offset is linear in j1 with slope m1perp - m2perp
        guess = ((n - 0.5) * f2 + 0.5 * f1 - fq) / (f2 - f1)
        base = math.floor(guess)
        hits = []
        for j1 in range(base - 3, base + 4):
            j2 = n - 1 - j1
            offset = m1p * Fraction(2 * j1 + 1, 2) + m2p * Fraction(2 * j2 + 1, 2) - spec.q0_perp
            c = abs(offset) - half_cut
            if c.sign() == 0:
                raise SingularLine(f"cross-cut endpoint lies on the line (index {n})")
            if c.sign() < 0:
                hits.append(j1)
        if len(hits) != 1:
            raise AssertionError(f"strip selection found {len(hits)} cells for index {n}")
        j1 = hits[0]
        j2 = n - 1 - j1
        xs.append(spec.m1.par * Fraction(2 * j1 + 1, 2) + spec.m2.par * Fraction(2 * j2 + 1, 2) - spec.q0_par)
    return make_points(range(lo, hi + 1), xs, *tile_lengths(spec))


def word_of(spec: GeometricSpec, n_range: tuple[int, int]) -> str:
    return cut_and_project(spec, n_range).word


def empirical_frequency(word: str) -> tuple[int, int]:
    return word.count("S"), word.count("L")


# -- spec JSON ------------------------------------------------------------

def spec_to_json(spec: GeometricSpec) -> dict:
    D = max(v.D for v in (spec.m1.par, spec.m1.perp, spec.m2.par, spec.m2.perp, spec.q0_par, spec.q0_perp))
    return {
        "D": D,
        "m1": {"par": spec.m1.par.to_text(), "perp": spec.m1.perp.to_text()},
        "m2": {"par": spec.m2.par.to_text(), "perp": spec.m2.perp.to_text()},
        "q0": {"par": spec.q0_par.to_text(), "perp": spec.q0_perp.to_text()},
    }


def spec_from_json(data: dict) -> GeometricSpec:
    def vec(d):
        return qn(d["par"]), qn(d["perp"])

    return GeometricSpec.make(vec(data["m1"]), vec(data["m2"]), vec(data.get("q0", {"par": "0", "perp": "0"})))
