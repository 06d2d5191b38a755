"""Lattice equivalence, canonical decoration rules and their inverse (gluing).

Two positive bases of one lattice are related by an integer unimodular matrix
``tau`` with ``m1' = a m1 + b m2`` and ``m2' = c m1 + d m2``.  Cutting both with
the same line gives a sparse (primed) and a dense quasilattice; every primed
interval is decorated by a fixed word of dense tiles.  Words may start or end
on half a tile, written in lower case (``"lSl"`` is ``(L/2) S (L/2)``).
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    AmbiguousReadoff,
    InvalidWord,
    NonCanonicalReadoff,
    NotSameLattice,
    NotUnimodular,
    UnparseableWord,
    WidthOrder,
)
from .geometry import (
    BasisVector,
    GeometricSpec,
    combo,
    cut_and_project,
    require_positive,
    tile_lengths,
)
from .numeric import QuadraticNumber

FULL = "SL"
HALVES = {"s": "S", "l": "L"}


@dataclass(frozen=True)
class BasisChange:
    a: int
    b: int
    c: int
    d: int

    @classmethod
    def from_rows(cls, rows) -> "BasisChange":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def parse(cls, text: str) -> "BasisChange":
        parts = [int(x) for x in text.replace(" ", "").split(",")]
        if len(parts) != 4:
            raise ValueError(f"tau needs four integers, got {text!r}")
        return cls(*parts)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    @property
    def rows(self) -> list:
        return [[self.a, self.b], [self.c, self.d]]

    def transpose(self) -> "BasisChange":
        return BasisChange(self.a, self.c, self.b, self.d)

    def __matmul__(self, o: "BasisChange") -> "BasisChange":
        return BasisChange(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __pow__(self, k: int) -> "BasisChange":
        if k < 0:
            raise ValueError("negative powers are not supported")
        out, base = BasisChange(1, 0, 0, 1), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def require_unimodular(self) -> None:
        if abs(self.det) != 1:
            raise NotUnimodular(f"det tau = {self.det}, expected +-1")

    def __str__(self) -> str:
        return f"{self.a},{self.b},{self.c},{self.d}"


# -- tile words -----------------------------------------------------------

@dataclass(frozen=True)
class TileWord:
    """Full letters with optional half tiles at either end.

    ``left_half``/``right_half`` hold ``"S"``/``"L"`` (the letter whose half sits
    there) or ``None``.
    """

    letters: str
    left_half: str | None = None
    right_half: str | None = None

    def __post_init__(self):
        if any(ch not in FULL for ch in self.letters):
            raise InvalidWord(f"letters must be S or L: {self.letters!r}")
        for h in (self.left_half, self.right_half):
            if h is not None and h not in FULL:
                raise InvalidWord(f"bad half marker {h!r}")

    @classmethod
    def parse(cls, text: str) -> "TileWord":
        text = text.strip()
        left = right = None
        if text and text[0] in HALVES:
            left, text = HALVES[text[0]], text[1:]
        if text and text[-1] in HALVES:
            right, text = HALVES[text[-1]], text[:-1]
        if any(ch in HALVES for ch in text):
            raise InvalidWord("half tiles may only sit at the ends of a word")
        return cls(text, left, right)

    def __str__(self) -> str:
        lo = self.left_half.lower() if self.left_half else ""
        hi = self.right_half.lower() if self.right_half else ""
        return lo + self.letters + hi

    @property
    def has_halves(self) -> bool:
        return self.left_half is not None or self.right_half is not None

    def symbols(self) -> list[str]:
        return list(str(self))

    def reversed(self) -> "TileWord":
        return TileWord(self.letters[::-1], self.right_half, self.left_half)

    def counts(self) -> tuple[Fraction, Fraction]:
        """Length-weighted letter counts; half tiles count one half."""
        ns = Fraction(self.letters.count("S"))
        nl = Fraction(self.letters.count("L"))
        for h in (self.left_half, self.right_half):
            if h == "S":
                ns += Fraction(1, 2)
            elif h == "L":
                nl += Fraction(1, 2)
        return ns, nl

    def length(self, S, L):
        ns, nl = self.counts()
        return S * ns + L * nl


@dataclass(frozen=True)
class SubstitutionRule:
    tau: BasisChange
    word_S: TileWord
    word_L: TileWord

    def __post_init__(self):
        halves = {h for w in (self.word_S, self.word_L) for h in (w.left_half, w.right_half) if h}
        if len(halves) > 1:
            raise InvalidWord("rules mixing S-halves and L-halves are not supported")
        if self.word_S.left_half != self.word_L.left_half or self.word_S.right_half != self.word_L.right_half:
            raise InvalidWord("both images must share their end structure")

    def image(self, letter: str) -> TileWord:
        return self.word_S if letter == "S" else self.word_L

    def is_reflection_symmetric(self) -> bool:
        return self.word_S == self.word_S.reversed() and self.word_L == self.word_L.reversed()

    def count_matrix(self) -> list[list[Fraction]]:
        """Rows are the (S, L) counts of the images of S' and L'."""
        return [list(self.word_S.counts()), list(self.word_L.counts())]

    def to_json(self) -> dict:
        return {"tau": self.tau.rows, "S": str(self.word_S), "L": str(self.word_L)}

    @classmethod
    def from_json(cls, data: dict) -> "SubstitutionRule":
        return cls(BasisChange.from_rows(data["tau"]), TileWord.parse(data["S"]), TileWord.parse(data["L"]))

    @classmethod
    def from_words(cls, tau: BasisChange, s_word: str, l_word: str) -> "SubstitutionRule":
        return cls(tau, TileWord.parse(s_word), TileWord.parse(l_word))


# -- change of basis ------------------------------------------------------

def compose_bases(spec: GeometricSpec, tau: BasisChange) -> GeometricSpec:
    tau.require_unimodular()
    m1 = combo(tau.a, spec.m1, tau.b, spec.m2)
    m2 = combo(tau.c, spec.m1, tau.d, spec.m2)
    out = GeometricSpec(m1, m2, spec.q0_par, spec.q0_perp)
    require_positive(out)
    return out


def _solve_row(spec: GeometricSpec, v: BasisVector) -> tuple[int, int]:
    det = spec.det
    x = (v.par * spec.m2.perp - v.perp * spec.m2.par) / det
    y = (spec.m1.par * v.perp - spec.m1.perp * v.par) / det
    if not (x.is_rational and y.is_rational):
        raise NotSameLattice("image vector is not an integer combination")
    fx, fy = x.as_fraction(), y.as_fraction()
    if fx.denominator != 1 or fy.denominator != 1:
        raise NotSameLattice("image vector is not an integer combination")
    return int(fx), int(fy)


def solve_tau(spec: GeometricSpec, spec_prime: GeometricSpec) -> BasisChange:
    """The integer matrix with ``m' = tau m``; raises if the bases span different lattices."""
    a, b = _solve_row(spec, spec_prime.m1)
    c, d = _solve_row(spec, spec_prime.m2)
    tau = BasisChange(a, b, c, d)
    if abs(tau.det) != 1:
        raise NotSameLattice(f"det tau = {tau.det}: sublattice, not the same lattice")
    return tau


def check_tau_nonnegative(spec: GeometricSpec, spec_prime: GeometricSpec) -> BasisChange:
    """Solve for ``tau`` between two positive bases and assert every entry is non-negative.

    The first basis must be the wider one across the line.
    """
    require_positive(spec)
    require_positive(spec_prime)
    if not spec.width > spec_prime.width:
        raise WidthOrder("the first basis must be strictly wider across the line")
    tau = solve_tau(spec, spec_prime)
    if min(tau.a, tau.b, tau.c, tau.d) < 0:
        raise AssertionError(f"negative entry in tau {tau.rows} between positive bases")
    return tau


# -- reading a rule off generated sequences --------------------------------

def _readoff_word(dense_x: Sequence[QuadraticNumber], S, L, lo, hi) -> TileWord:
    """Dense tiles covering ``[lo, hi]`` where both ends are dense points or tile midpoints."""

    def locate(x):
        i = bisect.bisect_right(dense_x, x) - 1
        if i < 0 or i + 1 >= len(dense_x):
            raise IndexError("window too small")
        off = x - dense_x[i]
        if not off:
            return i, None
        gap = dense_x[i + 1] - dense_x[i]
        if off * 2 != gap:
            raise NonCanonicalReadoff(f"primed point sits at offset {off} inside a tile of length {gap}")
        return i, "S" if gap == S else "L"

    def letter(i):
        g = dense_x[i + 1] - dense_x[i]
        return "S" if g == S else "L"

    i0, left = locate(lo)
    i1, right = locate(hi)
    start = i0 + 1 if left else i0
    letters = "".join(letter(i) for i in range(start, i1))
    return TileWord(letters, left, right)


def _points_covering(spec: GeometricSpec, x_lo, x_hi):
    k = 16
    while True:
        pts = cut_and_project(spec, (-k, k))
        if pts.xs[0] < x_lo and pts.xs[-1] > x_hi:
            return pts
        k *= 2


def derive_canonical_rule(
    spec: GeometricSpec,
    tau: BasisChange,
    window: int = 40,
    max_window: int = 2560,
) -> SubstitutionRule:
    """Read the decoration of ``S'`` and ``L'`` off the two quasilattices cut by one line."""
    tau.require_unimodular()
    require_positive(spec)
    sparse_spec = compose_bases(spec, tau)
    S, L = tile_lengths(spec)
    Sp, _ = tile_lengths(sparse_spec)
    w = window
    while True:
        sparse = cut_and_project(sparse_spec, (-w, w))
        dense = _points_covering(spec, sparse.xs[0], sparse.xs[-1])
        found: dict[str, TileWord] = {}
        for x0, x1 in zip(sparse.xs, sparse.xs[1:]):
            key = "S" if x1 - x0 == Sp else "L"
            word = _readoff_word(dense.xs, S, L, x0, x1)
            prev = found.setdefault(key, word)
            if prev != word:
                raise NonCanonicalReadoff(f"{key}' is decorated both as {prev} and {word}")
        if len(found) == 2:
            return SubstitutionRule(tau, found["S"], found["L"])
        if w >= max_window:
            raise AmbiguousReadoff(f"only {sorted(found)} seen within |n| <= {w}")
        w *= 2


# -- applying and inverting rules -----------------------------------------

def _to_halfunits(word: TileWord) -> list[tuple[str, int]]:
    out = []
    if word.left_half:
        out.append((word.left_half, 1))
    out += [(ch, 2) for ch in word.letters]
    if word.right_half:
        out.append((word.right_half, 1))
    return out


def _join_images(images: list[list[tuple[str, int]]]) -> TileWord:
    """Concatenate image half-unit lists, fusing halves only where two images meet."""
    merged: list[tuple[str, int]] = []
    for img in images:
        img = list(img)
        if merged and img and merged[-1][1] == 1 and img[0][1] == 1:
            if merged[-1][0] != img[0][0]:
                raise InvalidWord(f"cannot merge half tiles of {merged[-1][0]} and {img[0][0]}")
            merged[-1] = (img[0][0], 2)
            img = img[1:]
        merged += img
    left = right = None
    if merged and merged[0][1] == 1:
        left = merged.pop(0)[0]
    if merged and merged[-1][1] == 1:
        right = merged.pop()[0]
    if any(w == 1 for _, w in merged):
        raise InvalidWord("unmatched half tile inside the word")
    return TileWord("".join(ch for ch, _ in merged), left, right)


def _as_word(word) -> TileWord:
    return word if isinstance(word, TileWord) else TileWord.parse(word)


def apply_rule(rule: SubstitutionRule, word) -> TileWord:
    """Replace every primed letter by its image, merging halves that meet at a junction."""
    word = _as_word(word)
    if word.has_halves:
        raise InvalidWord("the parent word must consist of full tiles")
    return _join_images([_to_halfunits(rule.image(ch)) for ch in word.letters])


def glue(rule: SubstitutionRule, word) -> TileWord:
    """Left inverse of :func:`apply_rule`: recover the parent word."""
    word = _as_word(word)
    target = _to_halfunits(word)
    images = {k: _to_halfunits(rule.image(k)) for k in FULL}

    def split_head(img):
        # the image's leading half merges with the previous image's trailing half
        return img[1:] if img and img[0][1] == 1 else img

    n = len(target)
    memo: dict[tuple[int, bool], list | None] = {}

    def match(pos: int, first: bool):
        key = (pos, first)
        if key in memo:
            return memo[key]
        result = None
        if pos == n:
            result = []
        else:
            for k in ("L", "S"):
                img = images[k]
                body = img if first else split_head(img)
                trailing_half = body and body[-1][1] == 1
                core = body[:-1] if trailing_half else body
                end = pos + len(core)
                if target[pos:end] != core:
                    continue
                if trailing_half:
                    half_ch = body[-1][0]
                    if end == n - 1 and target[end] == (half_ch, 1):
                        result = [k]
                        break
                    if end < n and target[end] == (half_ch, 2):
                        # merged into a full tile; the next image starts after it
                        tail = match(end + 1, False)
                        if tail is not None:
                            result = [k] + tail
                            break
                    continue
                tail = match(end, False)
                if tail is not None:
                    result = [k] + tail
                    break
        memo[key] = result
        return result

    import sys

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * n + 1000))
    try:
        parsed = match(0, True)
    finally:
        sys.setrecursionlimit(old)
    if parsed is None:
        raise UnparseableWord(f"{word} is not an image of the rule")
    parent = TileWord("".join(parsed))
    if apply_rule(rule, parent) != word:
        raise UnparseableWord(f"{word} is not an image of the rule")
    return parent


def decorate_points(rule: SubstitutionRule, primed_xs: Sequence, primed_word: str, S, L) -> list:
    """Dense points produced by decorating each primed interval in place.

    ``primed_xs`` are the primed points (one more than letters in ``primed_word``);
    the result lists the dense tile boundaries in increasing order.
    """
    if len(primed_xs) != len(primed_word) + 1:
        raise ValueError("need one more point than letters")
    half = {"S": S / 2, "L": L / 2}
    full = {"S": S, "L": L}
    pts = []
    for x0, ch in zip(primed_xs, primed_word):
        img = rule.image(ch)
        pos = x0 + half[img.left_half] if img.left_half else x0
        pts.append(pos)
        for t in img.letters:
            pos = pos + full[t]
            pts.append(pos)
    out = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    return out


def word_counts(word) -> tuple[Fraction, Fraction]:
    return _as_word(word).counts()


def random_word(rng, length: int) -> str:
    return "".join(rng.choice(FULL) for _ in range(length))
