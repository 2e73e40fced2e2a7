"""
CSV / JSON / SVG writers.  Output is deterministic for identical inputs.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__

REGION_COLORS = {
    1: "#e41a1c", 2: "#377eb8", 3: "#4daf4a", 4: "#984ea3",
    5: "#ff7f00", 6: "#ffff33", 7: "#a65628", 8: "#f781bf",
}
UNCLASSIFIED_COLOR = "#bbbbbb"


def fmt_sig(x: float, sig: int = 6) -> str:
    """Scientific notation without exponent padding, e.g. ``4.8579e-3``."""
    if x == 0 or not math.isfinite(x):
        return "0" if x == 0 else str(x)
    mant, exp = f"{x:.{sig - 1}e}".split("e")
    if "." in mant:
        mant = mant.rstrip("0").rstrip(".")
    e = int(exp)
    return mant if e == 0 else f"{mant}e{e}"


def _num(x: float) -> str:
    return repr(float(x))


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def region_grid_csv(raster) -> str:
    return csv_text(["mu1", "mu2", "region"],
                    ((m1, m2, r if r else "unclassified") for m1, m2, r in raster.rows()))


def curves_csv(curves) -> str:
    rows = [("B1", m2, m1) for m2, m1 in curves.b1] + [("B2", m2, m1) for m2, m1 in curves.b2]
    return csv_text(["curve", "mu2", "mu1"], rows)


def orbit_csv(record) -> str:
    return csv_text(["n", "rho", "phi", "x", "y"], record.rows())


# -- SVG -------------------------------------------------------------------------

_W, _H, _PAD = 640, 520, 60


class _Frame:
    def __init__(self, xlo, xhi, ylo, yhi):
        if xhi == xlo:
            xlo, xhi = xlo - 1, xhi + 1
        if yhi == ylo:
            ylo, yhi = ylo - 1, yhi + 1
        self.xlo, self.xhi, self.ylo, self.yhi = xlo, xhi, ylo, yhi

    def px(self, x):
        return _PAD + (x - self.xlo) / (self.xhi - self.xlo) * (_W - 2 * _PAD)

    def py(self, y):
        return _H - _PAD - (y - self.ylo) / (self.yhi - self.ylo) * (_H - 2 * _PAD)


def _f(v: float) -> str:
    return f"{v:.2f}"


def _header(title: str) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- chenciner {__version__} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f"<title>{title}</title>",
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<defs><clipPath id="plot"><rect x="{_PAD}" y="{_PAD}" '
        f'width="{_W - 2 * _PAD}" height="{_H - 2 * _PAD}"/></clipPath></defs>',
    ]


def _axes(fr: _Frame, xlabel: str, ylabel: str) -> list[str]:
    x0, x1, y0, y1 = _PAD, _W - _PAD, _H - _PAD, _PAD
    out = [f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" fill="none" stroke="black"/>']
    for k in range(5):
        xv = fr.xlo + (fr.xhi - fr.xlo) * k / 4
        yv = fr.ylo + (fr.yhi - fr.ylo) * k / 4
        out.append(f'<text x="{_f(fr.px(xv))}" y="{y0 + 16}" text-anchor="middle">{fmt_sig(xv, 3)}</text>')
        out.append(f'<text x="{x0 - 6}" y="{_f(fr.py(yv) + 4)}" text-anchor="end">{fmt_sig(yv, 3)}</text>')
    out.append(f'<text x="{(x0 + x1) / 2}" y="{_H - 14}" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="16" y="{(y0 + y1) / 2}" text-anchor="middle" '
               f'transform="rotate(-90 16 {(y0 + y1) / 2})">{ylabel}</text>')
    return out


def diagram_svg(raster, title: str = "region diagram") -> str:
    """Region shading over (mu2 horizontal, mu1 vertical) with B1/B2 overlaid."""
    mu1, mu2 = raster.mu1, raster.mu2
    fr = _Frame(float(mu2[0]), float(mu2[-1]), float(mu1[0]), float(mu1[-1]))
    parts = _header(title)
    dx = (fr.px(mu2[1]) - fr.px(mu2[0])) if len(mu2) > 1 else (_W - 2 * _PAD)
    dy = (fr.py(mu1[0]) - fr.py(mu1[1])) if len(mu1) > 1 else (_H - 2 * _PAD)
    parts.append('<g clip-path="url(#plot)" shape-rendering="crispEdges">')
    for iy, m2 in enumerate(mu2):
        for ix, m1 in enumerate(mu1):
            reg = int(raster.regions[iy, ix])
            color = REGION_COLORS.get(reg, UNCLASSIFIED_COLOR)
            cx, cy = fr.px(m2), fr.py(m1)
            parts.append(f'<rect x="{_f(cx - dx / 2)}" y="{_f(cy - dy / 2)}" width="{_f(dx)}" '
                         f'height="{_f(dy)}" fill="{color}" data-region="{reg}"/>')
    parts.append("</g>")
    if raster.curves is not None:
        parts.append('<g clip-path="url(#plot)" fill="none" stroke-width="2">')
        for name, pts, dash in (("B1", raster.curves.b1, ""), ("B2", raster.curves.b2, ' stroke-dasharray="6 4"')):
            coords = " ".join(f"{_f(fr.px(m2))},{_f(fr.py(m1))}" for m2, m1 in pts)
            parts.append(f'<polyline id="{name}" points="{coords}" stroke="black"{dash}/>')
        parts.append("</g>")
    parts += _axes(fr, "mu2", "mu1")
    ly = _PAD
    for reg in sorted(REGION_COLORS):
        parts.append(f'<rect x="{_W - _PAD + 8}" y="{ly}" width="12" height="12" fill="{REGION_COLORS[reg]}"/>')
        parts.append(f'<text x="{_W - _PAD + 24}" y="{ly + 10}">R{reg}</text>')
        ly += 18
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def orbit_svg(records, circles: Sequence[float] = (), title: str = "orbits") -> str:
    """Scatter of (x_n, y_n) for one or more orbits; dashed census circles."""
    reach = max([float(abs(r.rho).max()) for r in records if len(r.rho)] + list(circles) + [1e-12])
    reach = min(reach, 20.0) * 1.1
    fr = _Frame(-reach, reach, -reach, reach)
    palette = ("#d6278a", "#1f4fd6", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#17becf")
    parts = _header(title)
    parts.append('<g clip-path="url(#plot)">')
    for r in circles:
        rx = fr.px(r) - fr.px(0)
        ry = fr.py(0) - fr.py(r)
        parts.append(f'<ellipse cx="{_f(fr.px(0))}" cy="{_f(fr.py(0))}" rx="{_f(rx)}" ry="{_f(ry)}" '
                     f'fill="none" stroke="gray" stroke-dasharray="4 3"/>')
    for k, rec in enumerate(records):
        color = palette[k % len(palette)]
        parts.append(f'<g fill="{color}">')
        for x, y in zip(rec.x, rec.y):
            if abs(x) <= reach and abs(y) <= reach:
                parts.append(f'<circle cx="{_f(fr.px(x))}" cy="{_f(fr.py(y))}" r="1.2"/>')
        parts.append("</g>")
    parts.append("</g>")
    parts += _axes(fr, "x", "y")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
