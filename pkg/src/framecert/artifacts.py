"""CSV and SVG emission for failure varieties (no plotting dependency)."""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

SIZE = 400
PAD = 30


def _clip_line(a, b, c, lo, hi):
    """Endpoints of ``a x + b y + c = 0`` inside the square ``[lo, hi]^2``."""
    pts = []
    if b != 0:
        for x in (lo, hi):
            y = -(a * x + c) / b
            if lo <= y <= hi:
                pts.append((x, y))
    if a != 0:
        for y in (lo, hi):
            x = -(b * y + c) / a
            if lo <= x <= hi:
                pts.append((x, y))
    uniq = []
    for p in pts:
        if p not in uniq:
            uniq.append(p)
    return uniq[:2] if len(uniq) >= 2 else None


def variety_svg(variety, points: dict | None = None, box=(-2, 2)) -> str:
    """Failure lines of a two-parameter family plus labelled parameter points."""
    lo, hi = Fraction(box[0]), Fraction(box[1])
    span = hi - lo
    scale = (SIZE - 2 * PAD) / float(span)

    def sx(x):
        return PAD + float(x - lo) * scale

    def sy(y):
        return SIZE - PAD - float(y - lo) * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
           f'<rect x="{PAD}" y="{PAD}" width="{SIZE - 2 * PAD}" height="{SIZE - 2 * PAD}" fill="none" stroke="#999"/>']
    if lo <= 0 <= hi:
        out.append(f'<path class="axis" d="M {sx(lo):.2f} {sy(0):.2f} L {sx(hi):.2f} {sy(0):.2f}" stroke="#ccc"/>')
        out.append(f'<path class="axis" d="M {sx(0):.2f} {sy(lo):.2f} L {sx(0):.2f} {sy(hi):.2f}" stroke="#ccc"/>')
    names = variety.names
    for f in variety.distinct_hyperplanes():
        if len(f.coeffs) != 2:
            continue
        seg = _clip_line(f.coeffs[0], f.coeffs[1], f.constant, lo, hi)
        if seg is None:
            continue
        (x0, y0), (x1, y1) = seg
        label = escape(f.poly.format(names) + " = 0") if f.poly is not None else ""
        out.append(f'<line class="variety" x1="{sx(x0):.2f}" y1="{sy(y0):.2f}" x2="{sx(x1):.2f}" y2="{sy(y1):.2f}" '
                   f'stroke="#c00" stroke-width="2"><title>{label}</title></line>')
    for name, (x, y) in (points or {}).items():
        out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="4" fill="#036"/>')
        out.append(f'<text x="{sx(x) + 6:.2f}" y="{sy(y) - 6:.2f}" font-size="12">{escape(name)}({x}, {y})</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
