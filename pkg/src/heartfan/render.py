"""Deterministic SVG drawings of rank-2 fans.

Coordinates are exact rationals rounded to three decimals with integer arithmetic, so the
output bytes depend only on the document and the style.
"""
from __future__ import annotations

import json
from fractions import Fraction
from functools import cmp_to_key
from math import isqrt
from pathlib import Path

from .cones import RatCone
from .errors import DatasetError, UnsupportedRankError
from .io import FanDocument

DEFAULT_STYLE = {
    "size": 400,
    "margin": 20,
    "background": "#ffffff",
    "fills": ["#e3e3e3", "#cfcfcf", "#bbbbbb"],
    "axis_color": "#9a9a9a",
    "axis_width": "0.5",
    "ray_color": "#000000",
    "ray_width": "1.2",
    "bold_width": "3",
    "limit_color": "#b22222",
    "limit_dash": "5 4",
    "box_color": "#606060",
}

CORNERS = ((1, 1), (-1, 1), (-1, -1), (1, -1))


def load_style(path=None) -> dict:
    style = dict(DEFAULT_STYLE)
    if path is not None:
        raw = json.loads(Path(path).read_text())
        if not isinstance(raw, dict):
            raise DatasetError("style file must be a JSON object")
        unknown = set(raw) - set(DEFAULT_STYLE)
        if unknown:
            raise DatasetError(f"unknown style keys: {sorted(unknown)}")
        for k, v in raw.items():
            if isinstance(v, float):
                raise DatasetError(f"style {k}: write non-integer numbers as strings")
        style.update(raw)
    return style


def _fmt(x: Fraction) -> str:
    q = round(Fraction(x) * 1000)
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole, frac = divmod(q, 1000)
    return f"{sign}{whole}" if frac == 0 else f"{sign}{whole}.{frac:03d}".rstrip("0")


def _to_box(d) -> tuple[Fraction, Fraction]:
    s = max(abs(Fraction(d[0])), abs(Fraction(d[1])))
    return (Fraction(d[0]) / s, Fraction(d[1]) / s)


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _angle_cmp(start):
    def half(d):
        c = _cross(start, d)
        dp = start[0] * d[0] + start[1] * d[1]
        return 0 if c > 0 or (c == 0 and dp > 0) else 1

    def cmp(a, b):
        ha, hb = half(a), half(b)
        if ha != hb:
            return ha - hb
        c = _cross(a, b)
        return -1 if c > 0 else (1 if c < 0 else 0)

    return cmp


def _sector(c: RatCone) -> list[tuple[Fraction, Fraction]] | None:
    """Polygon of the cone clipped to the unit box; None for the whole plane."""
    if len(c.lineality) == 2:
        return None
    p = c.relint_point()
    start = tuple(-a for a in p)
    dirs = {_to_box(g) for g in c.generators()}
    dirs |= {tuple(Fraction(a) for a in k) for k in CORNERS if c.contains(k)}
    ordered = sorted(dirs, key=cmp_to_key(_angle_cmp(start)))
    return [(Fraction(0), Fraction(0))] + ordered


def _surd_value(s: dict) -> Fraction:
    a, b, d = Fraction(s["a"]), Fraction(s["b"]), int(s["d"])
    return a + b * Fraction(isqrt(d * 10**12), 10**6)


def render_svg(doc: FanDocument, style: dict | None = None) -> bytes:
    if doc.rank != 2:
        raise UnsupportedRankError(f"only rank-2 fans can be drawn, got rank {doc.rank}")
    st = dict(DEFAULT_STYLE)
    st.update(style or {})
    size, margin = int(st["size"]), int(st["margin"])
    span = Fraction(size - 2 * margin, 2)

    def px(pt) -> str:
        x = margin + (pt[0] + 1) * span
        y = margin + (1 - pt[1]) * span
        return f"{_fmt(x)},{_fmt(y)}"

    cones = [RatCone.generated(2, e.rays, e.lineality) for e in doc.cones]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="{st["background"]}"/>',
    ]
    fills = list(st["fills"])
    k = 0
    for c in cones:
        if not c.is_full:
            continue
        poly = _sector(c)
        color = fills[k % len(fills)]
        k += 1
        if poly is None:
            out.append(f'<rect x="{margin}" y="{margin}" width="{size - 2 * margin}" height="{size - 2 * margin}" fill="{color}"/>')
        else:
            out.append(f'<polygon points="{" ".join(px(p) for p in poly)}" fill="{color}"/>')

    def line(a, b, color, width, extra="") -> str:
        (x1, y1), (x2, y2) = px(a).split(","), px(b).split(",")
        return f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}" stroke-width="{width}"{extra}/>'

    out.append(line((-1, 0), (1, 0), st["axis_color"], st["axis_width"]))
    out.append(line((0, -1), (0, 1), st["axis_color"], st["axis_width"]))
    maximal = [a for a in cones if not any(b.dim > a.dim and b.contains_cone(a) for b in cones)]
    for c in cones:
        if c.dim != 1:
            continue
        width = st["bold_width"] if c in maximal else st["ray_width"]
        for g in c.generators():
            out.append(line((0, 0), _to_box(g), st["ray_color"], width))
    for ray in doc.metadata.get("limit_rays", []):
        if ray.get("rational", True):
            continue
        d = (Fraction(-1), _surd_value(ray["slope"]))
        dash = f' stroke-dasharray="{st["limit_dash"]}"'
        out.append(line((0, 0), _to_box(d), st["limit_color"], st["ray_width"], dash))
    out.append(
        f'<rect x="{margin}" y="{margin}" width="{size - 2 * margin}" height="{size - 2 * margin}" fill="none" stroke="{st["box_color"]}" stroke-width="{st["axis_width"]}"/>'
    )
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("ascii")
