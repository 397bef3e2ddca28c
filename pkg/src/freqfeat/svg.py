"""Minimal hand-emitted SVG line plots.

No plotting dependency: the contract here is byte determinism, so the
markup is assembled from fixed-precision formatted strings only.
"""

_W, _H = 640, 480
_ML, _MR, _MT, _MB = 70, 20, 40, 50  # margins: left right top bottom


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _ticks(lo: float, hi: float, n: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def line_plot(points, xlabel: str, ylabel: str, title: str = "") -> str:
    """Render (x, y) pairs as a polyline with box axes and tick labels."""
    points = list(points)
    if not points:
        raise ValueError("line_plot needs at least one point")
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(min(ys), 0.0), max(max(ys), 1.0)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    plot_w = _W - _ML - _MR
    plot_h = _H - _MT - _MB

    def px(x):
        return _ML + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return _MT + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">'
    )
    out.append(f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>')
    out.append(
        f'<rect x="{_ML}" y="{_MT}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="black" stroke-width="1"/>'
    )
    if title:
        out.append(
            f'<text x="{_W // 2}" y="24" text-anchor="middle" '
            f'font-family="monospace" font-size="14">{_escape(title)}</text>'
        )
    for tx in _ticks(x_lo, x_hi):
        x = px(tx)
        out.append(
            f'<line x1="{_fmt(x)}" y1="{_MT + plot_h}" x2="{_fmt(x)}" '
            f'y2="{_MT + plot_h + 5}" stroke="black" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt(x)}" y="{_MT + plot_h + 20}" text-anchor="middle" '
            f'font-family="monospace" font-size="11">{tx:.3g}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        y = py(ty)
        out.append(
            f'<line x1="{_ML - 5}" y1="{_fmt(y)}" x2="{_ML}" y2="{_fmt(y)}" '
            f'stroke="black" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_ML - 9}" y="{_fmt(y + 4)}" text-anchor="end" '
            f'font-family="monospace" font-size="11">{ty:.3g}</text>'
        )
    out.append(
        f'<text x="{_ML + plot_w // 2}" y="{_H - 12}" text-anchor="middle" '
        f'font-family="monospace" font-size="12">{_escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="18" y="{_MT + plot_h // 2}" text-anchor="middle" '
        f'font-family="monospace" font-size="12" '
        f'transform="rotate(-90 18 {_MT + plot_h // 2})">{_escape(ylabel)}</text>'
    )
    path = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in points)
    out.append(
        f'<polyline points="{path}" fill="none" stroke="#1f6fb2" stroke-width="2"/>'
    )
    for x, y in points:
        out.append(
            f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="3" fill="#1f6fb2"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )
