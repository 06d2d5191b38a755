"""Floor-form quasilattices and their link to the geometric constructions.

The floor form is ``x_n = S (n - alpha) + (L - S) floor(kappa (n - beta))``.
The single-floor asymmetric forms carry an extra ``+1/2`` inside the floor
bracket; when packaged as :class:`FloorFormParams` it is folded into ``alpha``
(``alpha = chi_par - (L - S) / (2 S)``), which is undone exactly by
:func:`floorform_to_geometry`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import InconsistentSigns, InvalidParams, SingularIndex
from .geometry import (
    BasisVector,
    GeometricSpec,
    HALF,
    QuasilatticePoints,
    dual_coordinates,
    floor_arguments,
    make_points,
    require_positive,
    tile_lengths,
)
from .numeric import Number, QuadraticNumber, bracket, qn


@dataclass(frozen=True)
class FloorFormParams:
    S: QuadraticNumber
    L: QuadraticNumber
    kappa: QuadraticNumber
    alpha: QuadraticNumber
    beta: QuadraticNumber

    def __post_init__(self):
        for name in ("S", "L", "kappa", "alpha", "beta"):
            object.__setattr__(self, name, qn(getattr(self, name)))
        if not (self.S.sign() > 0 and self.L > self.S):
            raise InvalidParams("need L > S > 0")
        if not (self.kappa.sign() > 0 and self.kappa < 1):
            raise InvalidParams("need 0 < kappa < 1")
        if self.kappa.is_rational:
            raise InvalidParams("kappa must be irrational")

    def to_json(self) -> dict:
        return {k: getattr(self, k).to_text() for k in ("S", "L", "kappa", "alpha", "beta")}

    @classmethod
    def from_json(cls, data: dict) -> "FloorFormParams":
        return cls(*(qn(data[k]) for k in ("S", "L", "kappa", "alpha", "beta")))

    def scaled(self, c: Number) -> "FloorFormParams":
        return FloorFormParams(self.S * c, self.L * c, self.kappa, self.alpha, self.beta)


@dataclass(frozen=True)
class AsymmetricParams:
    """Constants of the single-floor form led by basis vector ``which``.

    ``length_i``/``length_j`` are the step lengths of the leading and the other
    vector; ``ratio_par``/``ratio_perp`` are ``m_j/m_i`` and drive the umklaap.
    """

    chi_par: QuadraticNumber
    chi_perp: QuadraticNumber
    kappa_i: QuadraticNumber
    which: int
    length_i: QuadraticNumber
    length_j: QuadraticNumber
    ratio_par: QuadraticNumber
    ratio_perp: QuadraticNumber


@dataclass(frozen=True)
class SingularSigns:
    sigma1: int
    sigma2: int

    def __post_init__(self):
        if self.sigma1 not in (1, -1) or self.sigma2 not in (1, -1):
            raise ValueError("signs must be +1 or -1")

    @classmethod
    def parse(cls, text: str) -> "SingularSigns":
        if len(text) != 2 or any(c not in "+-" for c in text):
            raise ValueError(f"signs must look like '+-', got {text!r}")
        return cls(*(1 if c == "+" else -1 for c in text))

    def flipped_by(self, det: int, s: int) -> "SingularSigns":
        f = det ** s
        return SingularSigns(f * self.sigma1, f * self.sigma2)

    def __str__(self) -> str:
        return "".join("+" if v > 0 else "-" for v in (self.sigma1, self.sigma2))


# -- evaluation -----------------------------------------------------------

def eval_floorform(p: FloorFormParams, n: int) -> QuadraticNumber:
    fl, is_int = (p.kappa * (n - p.beta)).floor_exact()
    if is_int:
        raise SingularIndex(f"kappa (n - beta) is an integer at n = {n}")
    return p.S * (n - p.alpha) + (p.L - p.S) * fl


def floorform_points(p: FloorFormParams, n_range: tuple[int, int]) -> QuasilatticePoints:
    idx = list(range(n_range[0], n_range[1] + 1))
    return make_points(idx, [eval_floorform(p, n) for n in idx], p.S, p.L)


def asymmetric_params(spec: GeometricSpec, which: int) -> AsymmetricParams:
    if which == 1:
        mi, mj = spec.m1, spec.m2
    elif which == 2:
        mi, mj = spec.m2, spec.m1
    else:
        raise ValueError("which must be 1 or 2")
    return AsymmetricParams(
        chi_par=spec.q0_par / mi.par,
        chi_perp=spec.q0_perp / mi.perp,
        kappa_i=mi.perp / (mi.perp - mj.perp),
        which=which,
        length_i=mi.par,
        length_j=mj.par,
        ratio_par=mj.par / mi.par,
        ratio_perp=mj.perp / mi.perp,
    )


def eval_asymmetric(a: AsymmetricParams, n: int, sigma: Optional[int] = None) -> QuadraticNumber:
    """Single-floor form; ``sigma`` selects ``[.]_sigma`` and its half-offset at integer arguments."""
    arg = a.kappa_i * (n - a.chi_perp)
    if sigma is None:
        fl, is_int = arg.floor_exact()
        if is_int:
            raise SingularIndex(f"floor argument is an integer at n = {n}")
        inner = QuadraticNumber(2 * fl + 1, 0, 2)
    else:
        inner = bracket(arg, sigma) + Fraction(sigma, 2)
    return a.length_i * (n - a.chi_par) + (a.length_j - a.length_i) * inner


def asymmetric_points(spec: GeometricSpec, which: int, n_range: tuple[int, int], sigma: Optional[int] = None) -> QuasilatticePoints:
    a = asymmetric_params(spec, which)
    idx = list(range(n_range[0], n_range[1] + 1))
    return make_points(idx, [eval_asymmetric(a, n, sigma) for n in idx], *tile_lengths(spec))


# -- conversions ----------------------------------------------------------

def geometry_to_floorform(spec: GeometricSpec, which: int = 1) -> tuple[FloorFormParams, AsymmetricParams]:
    """Floor-form parameters read off asymmetric form ``which``.

    When form ``which`` is led by the longer step, the bracket is rewritten with
    ``floor(y) = -floor(-y) - 1`` so the packaged form is always led by ``S``.
    """
    require_positive(spec)
    a = asymmetric_params(spec, which)
    if a.length_i == a.length_j:
        raise InvalidParams("both steps have the same length")
    if a.length_i < a.length_j:
        S, L = a.length_i, a.length_j
        alpha = a.chi_par - (L - S) / (2 * S)
        return FloorFormParams(S, L, a.kappa_i, alpha, a.chi_perp), a
    # leading step is L: kappa_j = 1 - kappa_i and floor(kappa_i (n - chi)) = n - 1 - floor(kappa_j (n - beta))
    S, L = a.length_j, a.length_i
    kappa = 1 - a.kappa_i
    beta = -a.kappa_i * a.chi_perp / kappa
    alpha = (L * a.chi_par - (L - S) * HALF) / S
    return FloorFormParams(S, L, kappa, alpha, beta), a


def floorform_to_geometry(p: FloorFormParams) -> GeometricSpec:
    """A positive basis with ``m1par = S``, ``m2par = L`` and unit cross-cut width."""
    m1 = BasisVector(p.S, -p.kappa)
    m2 = BasisVector(p.L, 1 - p.kappa)
    q0_par = p.S * p.alpha + (p.L - p.S) * HALF
    q0_perp = -p.kappa * p.beta
    return GeometricSpec(m1, m2, q0_par, q0_perp)


def normalized_spec(spec: GeometricSpec) -> GeometricSpec:
    """Rescale the perpendicular axis so that ``m2perp - m1perp == 1`` (same quasilattice)."""
    w = spec.m2.perp - spec.m1.perp
    return GeometricSpec(
        BasisVector(spec.m1.par, spec.m1.perp / w),
        BasisVector(spec.m2.par, spec.m2.perp / w),
        spec.q0_par,
        spec.q0_perp / w,
    )


def short_first(spec: GeometricSpec) -> GeometricSpec:
    """Oriented, unit-width spec whose ``m1`` is the shorter step.

    This is the labelling produced by :func:`floorform_to_geometry`, so it is the
    right reference when comparing a round trip modulo umklaap.
    """
    spec = spec.oriented()
    if spec.m1.par > spec.m2.par:
        spec = GeometricSpec(
            BasisVector(spec.m2.par, -spec.m2.perp),
            BasisVector(spec.m1.par, -spec.m1.perp),
            spec.q0_par,
            -spec.q0_perp,
        )
    return normalized_spec(spec)


def reduce_umklaap(spec: GeometricSpec) -> tuple[GeometricSpec, tuple[int, int]]:
    """Move ``q0`` into the unit cell ``[0,1)^2`` of lattice coordinates.

    Returns the reduced spec and the ``(n1, n2)`` shift that was applied.
    """
    u1, u2 = dual_coordinates(spec, spec.q0_par, spec.q0_perp)
    n1, n2 = -u1.floor_exact()[0], -u2.floor_exact()[0]
    return spec.umklaap(n1, n2), (n1, n2)


def umklaap_params(p: Union[AsymmetricParams, GeometricSpec], n1: int, n2: int):
    """Translate the line by ``n1 m1 + n2 m2`` in either parameterization."""
    if isinstance(p, GeometricSpec):
        return p.umklaap(n1, n2)
    own, other = (n1, n2) if p.which == 1 else (n2, n1)
    return AsymmetricParams(
        chi_par=p.chi_par + own + other * p.ratio_par,
        chi_perp=p.chi_perp + own + other * p.ratio_perp,
        kappa_i=p.kappa_i,
        which=p.which,
        length_i=p.length_i,
        length_j=p.length_j,
        ratio_par=p.ratio_par,
        ratio_perp=p.ratio_perp,
    )


def frequency_ratio(spec: GeometricSpec) -> QuadraticNumber:
    """Relative frequency of ``m1par`` steps to ``m2par`` steps."""
    require_positive(spec)
    return -(spec.m2.perp / spec.m1.perp)


# -- singular evaluation --------------------------------------------------

def eval_singular(
    spec: GeometricSpec,
    signs: SingularSigns,
    s: int,
    n: int,
    tau=None,
    form: str = "symmetric",
) -> QuadraticNumber:
    """``x_{n,s} / lambda_par^s`` with ``[.]_sigma`` brackets, exact on singular lines.

    For ``s > 0`` the offsets are inflated by ``tau`` and the signs become
    ``(det tau)^s sigma_i``.  ``form`` picks the symmetric expression or one of
    the single-bracket forms ``"asym1"``/``"asym2"``, which require
    ``sigma1 == -sigma2``.
    """
    if s < 0:
        raise ValueError("s must be non-negative")
    if form != "symmetric" and signs.sigma1 != -signs.sigma2:
        raise InconsistentSigns("single-bracket forms need sigma1 == -sigma2")
    work = spec
    eff = signs
    if s > 0:
        if tau is None:
            raise ValueError("inflation (s > 0) needs tau")
        from .selfsim import inflate_params

        work = inflate_params(spec, tau, s)
        eff = signs.flipped_by(tau.det, s)
    if form == "symmetric":
        A, B = floor_arguments(work, n)
        k1 = bracket(A, eff.sigma1) + Fraction(eff.sigma1, 2)
        k2 = bracket(B, eff.sigma2) + Fraction(eff.sigma2, 2)
        return work.m1.par * k1 + work.m2.par * k2 - work.q0_par
    if form == "asym1":
        return eval_asymmetric(asymmetric_params(work, 1), n, eff.sigma2)
    if form == "asym2":
        return eval_asymmetric(asymmetric_params(work, 2), n, eff.sigma1)
    raise ValueError(f"unknown form {form!r}")


def singular_points(
    spec: GeometricSpec,
    signs: SingularSigns,
    n_range: tuple[int, int],
    s: int = 0,
    tau=None,
    form: str = "symmetric",
    check_word: bool = True,
) -> QuasilatticePoints:
    idx = list(range(n_range[0], n_range[1] + 1))
    xs = [eval_singular(spec, signs, s, n, tau, form) for n in idx]
    if not check_word:
        return QuasilatticePoints(tuple(idx), tuple(xs), "")
    return make_points(idx, xs, *tile_lengths(spec))
