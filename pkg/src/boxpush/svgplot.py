"""Minimal deterministic SVG rendering for the experiment outputs.

No plotting library: the writer formats every coordinate with a fixed number
of decimals, so the same input always produces byte-identical files.
"""

from __future__ import annotations

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")

_W = 720
_H = 480
_PAD = 64


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _esc(text: str) -> str:
    return (
        str(text)
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _axis_bounds(values) -> tuple[float, float]:
    lo = min(values)
    hi = max(values)
    if lo == hi:
        lo -= 1.0
        hi += 1.0
    return lo, hi


class _Canvas:
    def __init__(self, title: str, xlabel: str, ylabel: str):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
            f'viewBox="0 0 {_W} {_H}">',
            f'<rect width="{_W}" height="{_H}" fill="white"/>',
            f'<text x="{_W / 2:.0f}" y="28" text-anchor="middle" '
            f'font-family="sans-serif" font-size="16">{_esc(title)}</text>',
            f'<text x="{_W / 2:.0f}" y="{_H - 14}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{_esc(xlabel)}</text>',
            f'<text x="18" y="{_H / 2:.0f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" '
            f'transform="rotate(-90 18,{_H / 2:.0f})">{_esc(ylabel)}</text>',
            f'<line x1="{_PAD}" y1="{_H - _PAD}" x2="{_W - _PAD}" y2="{_H - _PAD}" '
            f'stroke="black"/>',
            f'<line x1="{_PAD}" y1="{_PAD}" x2="{_PAD}" y2="{_H - _PAD}" stroke="black"/>',
        ]

    def scales(self, xlo, xhi, ylo, yhi):
        def sx(v):
            return _PAD + (v - xlo) / (xhi - xlo) * (_W - 2 * _PAD)

        def sy(v):
            return _H - _PAD - (v - ylo) / (yhi - ylo) * (_H - 2 * _PAD)

        return sx, sy

    def ticks(self, xlo, xhi, ylo, yhi, sx, sy):
        for i in range(5):
            xv = xlo + (xhi - xlo) * i / 4
            yv = ylo + (yhi - ylo) * i / 4
            self.parts.append(
                f'<text x="{_fmt(sx(xv))}" y="{_H - _PAD + 16}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="10">{xv:.4g}</text>'
            )
            self.parts.append(
                f'<text x="{_PAD - 6}" y="{_fmt(sy(yv))}" text-anchor="end" '
                f'font-family="sans-serif" font-size="10">{yv:.4g}</text>'
            )

    def legend(self, labels):
        y = _PAD
        for i, label in enumerate(labels):
            color = PALETTE[i % len(PALETTE)]
            self.parts.append(
                f'<rect x="{_W - _PAD - 150}" y="{y}" width="10" height="10" '
                f'fill="{color}"/>'
            )
            self.parts.append(
                f'<text x="{_W - _PAD - 134}" y="{y + 9}" font-family="sans-serif" '
                f'font-size="11">{_esc(label)}</text>'
            )
            y += 16

    def finish(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def render_line_chart(series, title: str, xlabel: str, ylabel: str) -> str:
    """``series`` is a list of (label, xs, ys); all must be nonempty."""
    if not series or any(len(xs) == 0 for _, xs, _ in series):
        raise ValueError("line chart needs at least one nonempty series")
    all_x = [v for _, xs, _ in series for v in xs]
    all_y = [v for _, _, ys in series for v in ys]
    xlo, xhi = _axis_bounds(all_x)
    ylo, yhi = _axis_bounds(all_y)
    cv = _Canvas(title, xlabel, ylabel)
    sx, sy = cv.scales(xlo, xhi, ylo, yhi)
    cv.ticks(xlo, xhi, ylo, yhi, sx, sy)
    for i, (label, xs, ys) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        points = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in zip(xs, ys))
        cv.parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"/>'
        )
    cv.legend([label for label, _, _ in series])
    return cv.finish()


def render_histogram(series, bin_lo: float, bin_width: float,
                     title: str, xlabel: str, ylabel: str) -> str:
    """Grouped bars: ``series`` is a list of (label, counts) of equal length."""
    if not series or any(len(counts) == 0 for _, counts in series):
        raise ValueError("histogram needs at least one nonempty series")
    n_bins = len(series[0][1])
    if any(len(counts) != n_bins for _, counts in series):
        raise ValueError("histogram series must have equal bin counts")
    xlo = bin_lo
    xhi = bin_lo + bin_width * n_bins
    ylo = 0.0
    yhi = max(max(counts) for _, counts in series)
    if yhi == 0:
        yhi = 1.0
    cv = _Canvas(title, xlabel, ylabel)
    sx, sy = cv.scales(xlo, xhi, ylo, yhi)
    cv.ticks(xlo, xhi, ylo, yhi, sx, sy)
    groups = len(series)
    for i, (label, counts) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        for b, count in enumerate(counts):
            x0 = bin_lo + b * bin_width + bin_width * i / groups
            x1 = bin_lo + b * bin_width + bin_width * (i + 1) / groups
            top = sy(count)
            cv.parts.append(
                f'<rect x="{_fmt(sx(x0))}" y="{_fmt(top)}" '
                f'width="{_fmt(sx(x1) - sx(x0))}" '
                f'height="{_fmt(sy(0) - top)}" fill="{color}" fill-opacity="0.8"/>'
            )
    cv.legend([label for label, _ in series])
    return cv.finish()


def render_scatter(points, title: str, xlabel: str, ylabel: str,
                   radius: float = 1.2) -> str:
    """Square-aspect scatter of (x, y) pairs around their bounding box."""
    points = list(points)
    if not points:
        raise ValueError("scatter needs at least one point")
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    span = max(max(map(abs, xs)), max(map(abs, ys)), 1e-12)
    lo, hi = -span * 1.05, span * 1.05
    cv = _Canvas(title, xlabel, ylabel)
    sx, sy = cv.scales(lo, hi, lo, hi)
    cv.ticks(lo, hi, lo, hi, sx, sy)
    for x, y in points:
        cv.parts.append(
            f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="{radius}" '
            f'fill="#1f77b4" fill-opacity="0.25"/>'
        )
    return cv.finish()


def write_svg(text: str, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
