"""Deterministic SVG tick diagrams.

Coordinates are printed with six decimals; the exact data behind them is
untouched.  Element order follows the input order so equal inputs give equal
bytes.
"""
from __future__ import annotations

from typing import Sequence

from .equivalence import SubstitutionRule, TileWord
from .errors import EmptyPayload
from .geometry import GridTime, QuasilatticePoints

COLORS = {"S": "#1f77b4", "L": "#d62728"}
WIDTH = 800.0
MARGIN = 20.0


def _f(x) -> str:
    return f"{float(x):.6f}"


def _doc(height: float, body: list[str]) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(WIDTH + 2 * MARGIN)}" '
        f'height="{_f(height)}" viewBox="0 0 {_f(WIDTH + 2 * MARGIN)} {_f(height)}">\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def _scale(values: Sequence[float]):
    lo, hi = min(values), max(values)
    span = hi - lo or 1.0
    return lambda v: MARGIN + (float(v) - lo) / span * WIDTH


def render_ticks(points: QuasilatticePoints) -> str:
    """One tick per point, each gap coloured and labelled by its letter."""
    if len(points) == 0:
        raise EmptyPayload("no points to draw")
    xs = [float(x) for x in points.xs]
    sx = _scale(xs)
    y = 40.0
    body = [f'<line class="axis" x1="{_f(MARGIN)}" y1="{_f(y)}" x2="{_f(MARGIN + WIDTH)}" y2="{_f(y)}" stroke="#999999"/>']
    for (a, b), letter in zip(zip(xs, xs[1:]), points.word):
        body.append(
            f'<line class="gap" x1="{_f(sx(a))}" y1="{_f(y)}" x2="{_f(sx(b))}" y2="{_f(y)}" '
            f'stroke="{COLORS.get(letter, "#333333")}" stroke-width="3"/>'
        )
        body.append(
            f'<text class="gap-label" x="{_f((sx(a) + sx(b)) / 2)}" y="{_f(y - 8)}" '
            f'font-size="9" text-anchor="middle">{letter}</text>'
        )
    for n, x in zip(points.indices, xs):
        body.append(f'<line class="tick" data-n="{n}" x1="{_f(sx(x))}" y1="{_f(y - 5)}" x2="{_f(sx(x))}" y2="{_f(y + 5)}" stroke="#000000"/>')
    return _doc(80.0, body)


def render_bigrid(times: Sequence[GridTime]) -> str:
    """Family-1 crossings on the upper train, family-2 on the lower."""
    if not times:
        raise EmptyPayload("no grid times to draw")
    ts = [float(g.t) for g in times]
    sx = _scale(ts)
    rows = {1: 30.0, 2: 70.0}
    body = []
    for fam, y in rows.items():
        body.append(f'<line class="train" data-family="{fam}" x1="{_f(MARGIN)}" y1="{_f(y)}" x2="{_f(MARGIN + WIDTH)}" y2="{_f(y)}" stroke="#999999"/>')
    for g, t in zip(times, ts):
        y = rows[g.family]
        color = COLORS["S"] if g.family == 1 else COLORS["L"]
        body.append(
            f'<line class="grid-time" data-family="{g.family}" data-n="{g.index}" '
            f'x1="{_f(sx(t))}" y1="{_f(y - 6)}" x2="{_f(sx(t))}" y2="{_f(y + 6)}" stroke="{color}"/>'
        )
    return _doc(100.0, body)


def _tile_segments(word: TileWord, S: float, L: float):
    """``(start, end, letter, circle_left, circle_right)`` for each piece of the word."""
    full = {"S": S, "L": L}
    out = []
    pos = 0.0
    if word.left_half:
        ln = full[word.left_half] / 2
        out.append((pos, pos + ln, word.left_half, False, True))
        pos += ln
    for ch in word.letters:
        out.append((pos, pos + full[ch], ch, True, True))
        pos += full[ch]
    if word.right_half:
        ln = full[word.right_half] / 2
        out.append((pos, pos + ln, word.right_half, True, False))
        pos += ln
    return out


def render_rule(rule: SubstitutionRule, S, L) -> str:
    """Each primed prototile above its decoration; circles mark full-tile ends only."""
    Sf, Lf = float(S), float(L)
    rows = [("S'", rule.word_S), ("L'", rule.word_L)]
    longest = max(w.length(Sf, Lf) for _, w in rows)
    if longest <= 0:
        raise EmptyPayload("empty rule")
    k = WIDTH / longest
    body = []
    y = 30.0
    for label, word in rows:
        total = word.length(Sf, Lf)
        body.append(f'<text class="prototile-label" x="{_f(4)}" y="{_f(y + 4)}" font-size="11">{label}</text>')
        body.append(
            f'<line class="prototile" x1="{_f(MARGIN)}" y1="{_f(y)}" x2="{_f(MARGIN + total * k)}" y2="{_f(y)}" '
            f'stroke="#000000" stroke-width="4"/>'
        )
        yd = y + 20.0
        circles = []
        for a, b, ch, cl, cr in _tile_segments(word, Sf, Lf):
            x1, x2 = MARGIN + a * k, MARGIN + b * k
            body.append(
                f'<line class="tile" data-letter="{ch}" x1="{_f(x1)}" y1="{_f(yd)}" x2="{_f(x2)}" y2="{_f(yd)}" '
                f'stroke="{COLORS[ch]}" stroke-width="4"/>'
            )
            if cl:
                circles.append(x1)
            if cr:
                circles.append(x2)
        seen = []
        for cx in circles:
            if cx not in seen:
                seen.append(cx)
                body.append(f'<circle class="end" cx="{_f(cx)}" cy="{_f(yd)}" r="3" fill="none" stroke="#000000"/>')
        y += 60.0
    return _doc(y, body)
