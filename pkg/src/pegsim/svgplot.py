"""Minimal self-contained SVG charts: line plots, bar charts, and grid maps.

Everything is emitted as a single SVG string with inline styling so the files
open in any browser with no external assets.
"""

from __future__ import annotations

import math

_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
    "#8c564b", "#e377c2",
)
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 62, 16, 30, 44


def _nice_step(span: float, target: int = 5) -> float:
    if span <= 0 or not math.isfinite(span):
        return 1.0
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            return mult * mag
    return 10.0 * mag


def _ticks(lo: float, hi: float) -> list[float]:
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return [0.0, 1.0]
    if hi <= lo:
        lo, hi = lo - 1.0, hi + 1.0
    step = _nice_step(hi - lo)
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return ticks or [lo, hi]


def _fmt(v: float) -> str:
    if v == 0:
        return "0"
    a = abs(v)
    if a >= 1e4 or a < 1e-3:
        return f"{v:.2e}"
    s = f"{v:.4g}"
    return s


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


class _Canvas:
    def __init__(self, width: int, height: int, title: str, xlabel: str, ylabel: str):
        self.width, self.height = width, height
        self.x0, self.x1 = _MARGIN_L, width - _MARGIN_R
        self.y0, self.y1 = height - _MARGIN_B, _MARGIN_T
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
            f'<rect width="{width}" height="{height}" fill="white"/>',
            f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" '
            f'font-size="13">{_esc(title)}</text>',
            f'<text x="{(self.x0 + self.x1) / 2:.1f}" y="{height - 8}" '
            f'text-anchor="middle">{_esc(xlabel)}</text>',
            f'<text x="14" y="{(self.y0 + self.y1) / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 14 {(self.y0 + self.y1) / 2:.1f})">{_esc(ylabel)}</text>',
        ]

    def set_range(self, xlo, xhi, ylo, yhi):
        if xhi <= xlo:
            xlo, xhi = xlo - 1.0, xhi + 1.0
        if yhi <= ylo:
            pad = 1.0 if yhi == ylo == 0 else abs(yhi) * 0.1 + 1e-12
            ylo, yhi = ylo - pad, yhi + pad
        self.xlo, self.xhi, self.ylo, self.yhi = xlo, xhi, ylo, yhi

    def px(self, x: float) -> float:
        return self.x0 + (x - self.xlo) / (self.xhi - self.xlo) * (self.x1 - self.x0)

    def py(self, y: float) -> float:
        return self.y0 + (y - self.ylo) / (self.yhi - self.ylo) * (self.y1 - self.y0)

    def axes(self):
        for tx in _ticks(self.xlo, self.xhi):
            if self.xlo <= tx <= self.xhi:
                x = self.px(tx)
                self.parts.append(
                    f'<line x1="{x:.1f}" y1="{self.y1}" x2="{x:.1f}" y2="{self.y0}" '
                    f'stroke="#dddddd"/>')
                self.parts.append(
                    f'<text x="{x:.1f}" y="{self.y0 + 16}" text-anchor="middle">'
                    f'{_fmt(tx)}</text>')
        for ty in _ticks(self.ylo, self.yhi):
            if self.ylo <= ty <= self.yhi:
                y = self.py(ty)
                self.parts.append(
                    f'<line x1="{self.x0}" y1="{y:.1f}" x2="{self.x1}" y2="{y:.1f}" '
                    f'stroke="#dddddd"/>')
                self.parts.append(
                    f'<text x="{self.x0 - 6}" y="{y + 4:.1f}" text-anchor="end">'
                    f'{_fmt(ty)}</text>')
        self.parts.append(
            f'<rect x="{self.x0}" y="{self.y1}" width="{self.x1 - self.x0}" '
            f'height="{self.y0 - self.y1}" fill="none" stroke="#333333"/>')

    def finish(self) -> str:
        self.parts.append("</svg>")
        return "\n".join(self.parts)


def line_plot(series, title: str = "", xlabel: str = "", ylabel: str = "",
              width: int = 720, height: int = 420) -> str:
    """series: iterable of (label, xs, ys); returns SVG text."""
    series = [(lbl, list(xs), list(ys)) for lbl, xs, ys in series]
    pts = [(x, y) for _, xs, ys in series for x, y in zip(xs, ys)
           if math.isfinite(x) and math.isfinite(y)]
    cv = _Canvas(width, height, title, xlabel, ylabel)
    if pts:
        cv.set_range(min(p[0] for p in pts), max(p[0] for p in pts),
                     min(p[1] for p in pts), max(p[1] for p in pts))
    else:
        cv.set_range(0, 1, 0, 1)
    cv.axes()
    for i, (label, xs, ys) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(
            f"{cv.px(x):.1f},{cv.py(y):.1f}" for x, y in zip(xs, ys)
            if math.isfinite(x) and math.isfinite(y))
        if coords:
            cv.parts.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" '
                f'stroke-width="1.5"/>')
        lx, ly = cv.x1 - 150, cv.y1 + 14 + 16 * i
        cv.parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>')
        cv.parts.append(f'<text x="{lx + 28}" y="{ly}">{_esc(label)}</text>')
    return cv.finish()


def bar_chart(labels, values, title: str = "", ylabel: str = "",
              width: int = 560, height: int = 400) -> str:
    labels = list(labels)
    values = [float(v) for v in values]
    cv = _Canvas(width, height, title, "", ylabel)
    top = max(values + [0.0])
    bot = min(values + [0.0])
    cv.set_range(0, len(values), bot, top)
    cv.axes()
    slot = (cv.x1 - cv.x0) / max(len(values), 1)
    for i, (lbl, v) in enumerate(zip(labels, values)):
        x = cv.x0 + slot * (i + 0.2)
        y_val, y_zero = cv.py(v), cv.py(0.0)
        cv.parts.append(
            f'<rect x="{x:.1f}" y="{min(y_val, y_zero):.1f}" width="{slot * 0.6:.1f}" '
            f'height="{abs(y_zero - y_val):.1f}" fill="{_PALETTE[0]}"/>')
        cv.parts.append(
            f'<text x="{x + slot * 0.3:.1f}" y="{cv.y0 + 16}" text-anchor="middle">'
            f'{_esc(str(lbl))}</text>')
        cv.parts.append(
            f'<text x="{x + slot * 0.3:.1f}" y="{y_val - 5:.1f}" text-anchor="middle">'
            f'{_fmt(v)}</text>')
    return cv.finish()


def grid_map(cells, title: str = "", width: int = 460, height: int = 460) -> str:
    """cells: iterable of ((ex_mm, ey_mm), successes, reps); green/red fill."""
    cells = list(cells)
    xs = sorted({c[0][0] for c in cells})
    ys = sorted({c[0][1] for c in cells})
    cv = _Canvas(width, height, title, "x error (mm)", "y error (mm)")
    pad_x = (xs[-1] - xs[0]) / max(len(xs) - 1, 1) / 2 or 1.0
    pad_y = (ys[-1] - ys[0]) / max(len(ys) - 1, 1) / 2 or 1.0
    cv.set_range(xs[0] - pad_x, xs[-1] + pad_x, ys[0] - pad_y, ys[-1] + pad_y)
    cell_w = (cv.x1 - cv.x0) / len(xs) * 0.92
    cell_h = (cv.y0 - cv.y1) / len(ys) * 0.92
    for (ex, ey), ok, reps in cells:
        frac = ok / reps if reps else 0.0
        red = int(220 * (1 - frac) + 30 * frac)
        green = int(60 * (1 - frac) + 160 * frac)
        x, y = cv.px(ex), cv.py(ey)
        cv.parts.append(
            f'<rect x="{x - cell_w / 2:.1f}" y="{y - cell_h / 2:.1f}" '
            f'width="{cell_w:.1f}" height="{cell_h:.1f}" '
            f'fill="rgb({red},{green},60)" stroke="#333333"/>')
        cv.parts.append(
            f'<text x="{x:.1f}" y="{y + 4:.1f}" text-anchor="middle" '
            f'fill="white" font-size="13">{ok}/{reps}</text>')
    cv.axes()
    return cv.finish()
