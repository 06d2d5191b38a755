"""Self-similar and self-same quasilattices.

A basis is self-similar under ``tau`` when its ``par`` and ``perp`` components
are eigenvectors of ``tau`` for the expanding eigenvalue ``lambda_par`` and the
contracting one ``lambda_perp``.  Inflation then only rescales the line offset.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from .equivalence import BasisChange, SubstitutionRule, compose_bases
from .errors import (
    DegenerateEigen,
    DivisibilityViolation,
    MixedDiscriminant,
    NotSameLattice,
    NotSelfSimilar,
)
from .floorform import reduce_umklaap
from .geometry import GeometricSpec, dual_coordinates, singular_point
from .numeric import QuadraticNumber

S_MAX = 64


@dataclass(frozen=True)
class EigenData:
    lambda_par: QuadraticNumber
    lambda_perp: QuadraticNumber
    v_par: QuadraticNumber
    v_perp: QuadraticNumber


@dataclass(frozen=True)
class CatalogEntry:
    case_id: str
    tau: BasisChange
    eigen: EigenData
    rule: SubstitutionRule
    spec: GeometricSpec

    @property
    def family(self) -> str:
        return self.case_id[0]


@dataclass(frozen=True)
class CycleCount:
    s: int
    F: tuple
    N_s: int
    irreducible: int
    cycles: int


def eigen_tau(tau: BasisChange) -> EigenData:
    tau.require_unimodular()
    tr, det = tau.trace, tau.det
    disc = tr * tr - 4 * det
    if disc <= 0 or isqrt(disc) ** 2 == disc:
        raise DegenerateEigen(f"tau {tau.rows} has no irrational real eigenvalues")
    root = QuadraticNumber.sqrt(disc)
    lp = (root + tr) / 2
    lm = (-root + tr) / 2
    if not (lp > 1 and abs(lm) < 1):
        raise DegenerateEigen(f"tau {tau.rows} is not an inflation (lambda = {lp}, {lm})")
    if tau.b:
        vp, vm = (lp - tau.a) / tau.b, (lm - tau.a) / tau.b
    else:
        vp, vm = QuadraticNumber(tau.c) / (lp - tau.d), QuadraticNumber(tau.c) / (lm - tau.d)
    out = EigenData(lp, lm, vp, vm)
    assert lp * lm == det and lp + lm == tr and lm.sign() == det
    return out


def is_self_similar(spec: GeometricSpec, tau: BasisChange) -> bool:
    try:
        e = eigen_tau(tau)
        ok_par = (tau.a * spec.m1.par + tau.b * spec.m2.par == e.lambda_par * spec.m1.par
                  and tau.c * spec.m1.par + tau.d * spec.m2.par == e.lambda_par * spec.m2.par)
        ok_perp = (tau.a * spec.m1.perp + tau.b * spec.m2.perp == e.lambda_perp * spec.m1.perp
                   and tau.c * spec.m1.perp + tau.d * spec.m2.perp == e.lambda_perp * spec.m2.perp)
    except (DegenerateEigen, MixedDiscriminant):
        return False
    return ok_par and ok_perp


def _require_self_similar(spec: GeometricSpec, tau: BasisChange) -> EigenData:
    if not is_self_similar(spec, tau):
        raise NotSelfSimilar(f"basis is not made of eigenvectors of tau {tau.rows}")
    return eigen_tau(tau)


def inflate_params(spec: GeometricSpec, tau: BasisChange, s: int) -> GeometricSpec:
    """Offsets after ``s`` inflations: ``q0par / lambda_par^s`` and ``q0perp / lambda_perp^s``."""
    if s < 0:
        raise ValueError("s must be non-negative")
    e = _require_self_similar(spec, tau)
    return spec.with_q0(spec.q0_par / e.lambda_par ** s, spec.q0_perp / e.lambda_perp ** s)


def selfsame_params(tau: BasisChange, spec_basis: GeometricSpec, s: int, n1: int, n2: int) -> GeometricSpec:
    if s < 1:
        raise ValueError("s must be at least 1")
    e = _require_self_similar(spec_basis, tau)
    vpar = spec_basis.m1.par * n1 + spec_basis.m2.par * n2
    vperp = spec_basis.m1.perp * n1 + spec_basis.m2.perp * n2
    lp, lm = e.lambda_par ** s, e.lambda_perp ** s
    return spec_basis.with_q0(lp * vpar / (1 - lp), lm * vperp / (1 - lm))


def solve_umklaap(a: GeometricSpec, b: GeometricSpec) -> tuple[int, int]:
    """Integers ``(n1, n2)`` with ``b.q0 = a.q0 + n1 m1 + n2 m2``; raises if none exist."""
    u1, u2 = dual_coordinates(a, b.q0_par - a.q0_par, b.q0_perp - a.q0_perp)
    if not (u1.is_rational and u2.is_rational):
        raise NotSameLattice("offsets differ by a non-lattice vector")
    f1, f2 = u1.as_fraction(), u2.as_fraction()
    if f1.denominator != 1 or f2.denominator != 1:
        raise NotSameLattice("offsets differ by a non-lattice vector")
    return int(f1), int(f2)


# -- counting -------------------------------------------------------------

def f_sequence(tau: BasisChange, s_max: int) -> list[int]:
    """``F_1 .. F_{s_max+1}``."""
    if s_max < 1:
        raise ValueError("s_max must be at least 1")
    tr, det = tau.trace, tau.det
    F = [0, 1]
    while len(F) < s_max + 2:
        F.append(tr * F[-1] - det * F[-2])
    return F[1:]


def _F_full(tau: BasisChange, s_max: int) -> list[int]:
    return [0] + f_sequence(tau, s_max)


def _mobius(n: int) -> int:
    out, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    return -out if n > 1 else out


def _divisors(n: int) -> list[int]:
    return [r for r in range(1, n + 1) if n % r == 0]


def n_selfsame(tau: BasisChange, s: int) -> int:
    F = _F_full(tau, s)
    det = tau.det
    return F[s + 1] - det * F[s - 1] - (3 + det) // 2


def _check_identities(tau: BasisChange, s: int, F: list[int], e: EigenData | None) -> None:
    det = tau.det
    assert det ** (s - 1) == F[s] ** 2 - F[s - 1] * F[s + 1], "Cassini-type identity failed"
    if e is not None:
        lp, lm = e.lambda_par ** s, e.lambda_perp ** s
        assert lp == e.lambda_par * F[s] - F[s - 1] * det
        assert (1 - lp) * (1 - lm) == 1 + det * F[s - 1] - F[s + 1] + det ** s


def count_selfsame(tau: BasisChange, s: int) -> CycleCount:
    if not 1 <= s <= S_MAX:
        raise ValueError(f"s must lie in 1..{S_MAX}")
    tau.require_unimodular()
    try:
        e = eigen_tau(tau)
    except DegenerateEigen:
        e = None
    F = _F_full(tau, s)
    irr = {}
    for r in range(1, s + 1):
        if s % r:
            continue
        n_r = n_selfsame(tau, r)
        irr[r] = n_r - sum(irr[d] for d in _divisors(r) if d < r)
        _check_identities(tau, r, F, e)
    mob = sum(_mobius(s // r) * n_selfsame(tau, r) for r in _divisors(s))
    assert mob == irr[s], "divisor subtraction disagrees with the Moebius sum"
    if irr[s] % s:
        raise DivisibilityViolation(f"{s} does not divide {irr[s]}")
    return CycleCount(s, tuple(F[1:]), n_selfsame(tau, s), irr[s], irr[s] // s)


def cycle_table(tau: BasisChange, s_max: int = 12) -> list[CycleCount]:
    return [count_selfsame(tau, s) for s in range(1, s_max + 1)]


# -- brute-force enumeration -----------------------------------------------

@dataclass(frozen=True)
class SelfSameClass:
    u: tuple  # lattice coordinates of q0, reduced into [0, 1)^2
    spec: GeometricSpec
    period: int  # smallest r >= 1 with r-fold self-sameness
    singular: bool


@dataclass(frozen=True)
class Enumeration:
    s: int
    classes: tuple
    singular_variants: int  # sign-variant quasilattices from the singular class
    N_s: int
    irreducible: int

    @property
    def cycles(self) -> int:
        return self.irreducible // self.s


def _int_matrix_sub_identity_power(tau_t: BasisChange, s: int) -> list[list[int]]:
    # inverse of tau^T is integral because det = +-1
    a, b, c, d = tau_t.a, tau_t.b, tau_t.c, tau_t.d
    det = tau_t.det
    inv = BasisChange(d * det, -b * det, -c * det, a * det)
    P = inv ** s
    return [[P.a - 1, P.b], [P.c, P.d - 1]]


def _coset_reps(M: list[list[int]]) -> list[tuple[int, int]]:
    """Representatives of ``Z^2 / M Z^2`` from a triangular basis of the column lattice."""
    (m00, m01), (m10, m11) = M
    g = gcd(m00, m01)
    if g == 0:
        raise DegenerateEigen("singular matrix")
    # columns reduce to (g, *) and (0, v2_second): a triangular basis
    v2_second = (m01 // g) * m10 - (m00 // g) * m11
    h11, h22 = abs(g), abs(v2_second)
    return [(i, j) for i in range(h11) for j in range(h22)]


def _reduce(u: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    return tuple(x - (x.numerator // x.denominator) for x in u)


def _u_of(spec: GeometricSpec) -> tuple[Fraction, Fraction]:
    u1, u2 = dual_coordinates(spec, spec.q0_par, spec.q0_perp)
    return _reduce((u1.as_fraction(), u2.as_fraction()))


def enumerate_selfsame(spec_basis: GeometricSpec, tau: BasisChange, s: int) -> Enumeration:
    """Enumerate every ``s``-fold self-same offset up to umklaap and sort them into cycles.

    Offsets are written in lattice coordinates ``q0 = u1 m1 + u2 m2``; inflation
    acts on ``u`` by the inverse transpose of ``tau``, so the fixed points of
    ``s`` inflations mod ``Z^2`` are ``(A^-s - 1)^-1 Z^2 / Z^2``.  Each class is
    then checked and its minimal period found with exact offset inflation.  The
    singular class (``q0`` a lattice point) splits into the two sign variants
    ``(+,-)`` and ``(-,+)``, which inflation swaps when ``det tau = -1``.
    """
    e = _require_self_similar(spec_basis, tau)
    M = _int_matrix_sub_identity_power(tau.transpose(), s)
    det_m = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    reps = _coset_reps(M)
    # M^-1 k for each representative k
    us = set()
    for k1, k2 in reps:
        u1 = Fraction(M[1][1] * k1 - M[0][1] * k2, det_m)
        u2 = Fraction(-M[1][0] * k1 + M[0][0] * k2, det_m)
        us.add(_reduce((u1, u2)))
    if len(us) != abs(det_m):
        raise AssertionError(f"expected {abs(det_m)} classes, found {len(us)}")
    classes = []
    for u in sorted(us):
        base = spec_basis.with_q0(
            spec_basis.m1.par * u[0] + spec_basis.m2.par * u[1],
            spec_basis.m1.perp * u[0] + spec_basis.m2.perp * u[1],
        )
        inflated = inflate_params(base, tau, s)
        solve_umklaap(base, inflated)  # raises unless genuinely self-same
        period, cur = None, base
        for r in range(1, s + 1):
            cur = reduce_umklaap(inflate_params(cur, tau, 1))[0]
            if _u_of(cur) == u:
                period = r
                break
        assert period is not None and s % period == 0
        classes.append(SelfSameClass(u, base, period, singular_point(base) is not None))
    variants = 2 if tau.det ** s == 1 else 0
    sign_period = 1 if tau.det == 1 else 2
    nonsing = [c for c in classes if not c.singular]
    n_total = len(nonsing) + variants
    irreducible = sum(1 for c in nonsing if c.period == s) + (variants if sign_period == s else 0)
    return Enumeration(s, tuple(classes), variants, n_total, irreducible)


# -- catalog --------------------------------------------------------------

_TABLE1 = [
    ("1", (0, 1, 1, 1), "ll", "lSl"),
    ("2a", (1, 1, 2, 1), "lSl", "lSSl"),
    ("2b", (0, 1, 1, 2), "L", "LSL"),
    ("3a", (1, 2, 1, 3), "sLLs", "sLLLs"),
    ("3b", (2, 1, 3, 2), "SLS", "SLSLS"),
    ("3c", (1, 1, 2, 3), "lSl", "lSLLSl"),
    ("4a", (3, 1, 4, 1), "lSSSl", "lSSSSl"),
    ("4b", (2, 1, 5, 2), "SLS", "SLSSSLS"),
    ("4c", (1, 1, 4, 3), "lSl", "lSLSSLSl"),
    ("4d", (0, 1, 1, 4), "L", "LLSLL"),
]

DEFAULT_Q0 = (Fraction(1, 3), Fraction(1, 7))


def catalog_spec(tau: BasisChange, q0=DEFAULT_Q0) -> GeometricSpec:
    """The self-similar basis ``m1 = (1, 1)``, ``m2 = (v_par, v_perp)`` with a generic offset."""
    e = eigen_tau(tau)
    return GeometricSpec.make((1, 1), (e.v_par, e.v_perp), q0)


@lru_cache(maxsize=None)
def catalog() -> tuple:
    out = []
    for cid, t, s_word, l_word in _TABLE1:
        tau = BasisChange(*t)
        out.append(CatalogEntry(cid, tau, eigen_tau(tau), SubstitutionRule.from_words(tau, s_word, l_word), catalog_spec(tau)))
    return tuple(out)


FAMILY_DEFAULT = {"1": "1", "2": "2a", "3": "3a", "4": "4a"}


def catalog_entry(case_id: str) -> CatalogEntry:
    cid = FAMILY_DEFAULT.get(str(case_id), str(case_id))
    for entry in catalog():
        if entry.case_id == cid:
            return entry
    raise KeyError(f"unknown case {case_id!r}")


def table2(s_max: int = 12) -> list[list[int]]:
    """Rows ``[s, F_s, cycles]`` for families 1..4 side by side."""
    cols = [cycle_table(catalog_entry(f).tau, s_max) for f in "1234"]
    rows = []
    for i in range(s_max):
        row = [i + 1]
        for col in cols:
            row += [col[i].F[i], col[i].cycles]
        rows.append(row)
    return rows


def singular_selfsame_spec(spec_basis: GeometricSpec, n1: int = 0, n2: int = 0) -> GeometricSpec:
    """Offset on the lattice point ``n1 m1 + n2 m2``: the singular self-same seed."""
    return spec_basis.with_q0(0, 0).umklaap(n1, n2)


def inflate_compose_check(spec: GeometricSpec, tau: BasisChange, s: int) -> bool:
    """``tau^s`` applied to the basis equals the basis scaled by the eigenvalues."""
    e = eigen_tau(tau)
    big = compose_bases(spec, tau ** s)
    return (big.m1.par == spec.m1.par * e.lambda_par ** s and big.m1.perp == spec.m1.perp * e.lambda_perp ** s)


def pm_form(x: QuadraticNumber) -> str:
    """``x`` and its conjugate written together, e.g. ``(1±√5)/2`` or ``-1±√5``."""
    a, b = x.rational_part, x.surd_part
    if b < 0:
        b = -b
    den = a.denominator if a.denominator == b.denominator and a.denominator > 1 else 1
    if den > 1:
        p, q = a.numerator, b.numerator
        coef = "" if q == 1 else str(q)
        return f"({p}±{coef}√{x.D})/{den}"
    coef = "" if b == 1 else str(b)
    return f"{a}±{coef}√{x.D}"


def table1_rows() -> list[list[str]]:
    rows = [["case", "lambda", "tau", "m2/m1", "S'", "L'"]]
    for e in catalog():
        t = e.tau
        rows.append([
            e.case_id,
            pm_form(e.eigen.lambda_par),
            f"{t.a},{t.b};{t.c},{t.d}",
            pm_form(e.eigen.v_par),
            str(e.rule.word_S),
            str(e.rule.word_L),
        ])
    return rows


def table2_rows(s_max: int = 12) -> list[list[str]]:
    header = ["s"] + [f"{k}[{f}]" for f in "1234" for k in ("F", "cycles")]
    return [header] + [[str(v) for v in row] for row in table2(s_max)]
