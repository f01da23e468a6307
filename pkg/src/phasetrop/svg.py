"""Minimal static SVG renderings: tropical graphs and layer bars."""

from __future__ import annotations

from fractions import Fraction

from .layers import LayerDecomposition
from .polys import TropicalPoly

_W, _H, _PAD = 480, 320, 40


def _line(x1, y1, x2, y2, color, width=2):
    return (f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
            f'stroke="{color}" stroke-width="{width}"/>')


def tropical_svg(trop: TropicalPoly, path: str) -> None:
    """Graph of the tropical polynomial with its bends marked."""
    roots = list(trop.roots())
    if roots:
        lo, hi = min(roots) - 1, max(roots) + 1
    else:
        lo, hi = Fraction(-1), Fraction(1)
    xs = [lo + Fraction(k, 64) * (hi - lo) for k in range(65)]
    ys = [trop.evaluate(x) for x in xs]
    ymin, ymax = min(ys), max(ys)
    if ymin == ymax:
        ymin, ymax = ymin - 1, ymax + 1

    def sx(x):
        return _PAD + float((x - lo) / (hi - lo)) * (_W - 2 * _PAD)

    def sy(y):
        return _H - _PAD - float((y - ymin) / (ymax - ymin)) * (_H - 2 * _PAD)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}">',
             f'<rect width="{_W}" height="{_H}" fill="white"/>']
    pts = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in zip(xs, ys))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="#1f77b4" stroke-width="2"/>')
    for r in roots:
        parts.append(_line(sx(r), _H - _PAD, sx(r), _PAD, "#cccccc", 1))
        parts.append(f'<circle cx="{sx(r):.1f}" cy="{sy(trop.evaluate(r)):.1f}" r="4" fill="#d62728"/>')
        parts.append(f'<text x="{sx(r):.1f}" y="{_H - _PAD + 16:.1f}" font-size="11" '
                     f'text-anchor="middle">{r}</text>')
    parts.append(_line(_PAD, _H - _PAD, _W - _PAD, _H - _PAD, "#000000", 1))
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts))


def layers_svg(decomp: LayerDecomposition, path: str) -> None:
    """Horizontal level bar: marked levels and the open intervals between."""
    levels = list(decomp.levels)
    hi = (levels[-1] if levels else Fraction(0)) + 1
    lo = Fraction(0)

    def sx(x):
        return _PAD + float((x - lo) / (hi - lo)) * (_W - 2 * _PAD)

    y = _H // 2
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}">',
             f'<rect width="{_W}" height="{_H}" fill="white"/>',
             _line(_PAD, y, _W - _PAD, y, "#1f77b4", 4)]
    for b, d in zip(levels, decomp.degrees):
        parts.append(f'<circle cx="{sx(b):.1f}" cy="{y}" r="6" fill="#d62728"/>')
        parts.append(f'<text x="{sx(b):.1f}" y="{y - 14}" font-size="11" '
                     f'text-anchor="middle">{b}</text>')
        parts.append(f'<text x="{sx(b):.1f}" y="{y + 24}" font-size="10" '
                     f'text-anchor="middle">deg {d}</text>')
    parts.append(f'<text x="{_W - _PAD}" y="{y - 14}" font-size="11" text-anchor="end">oo</text>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts))
