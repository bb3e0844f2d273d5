"""Minimal hand-rolled SVG line plots (no plotting dependency).

Emits a fixed-size plot with axes, ticks, polylines, optional +/-1-sigma
error bars and a small legend. Output is deterministic: floats are formatted
with fixed precision and nothing depends on wall-clock time.
"""

from __future__ import annotations

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 62, 18, 34, 46
COLORS = ("#1f6fb2", "#c44e52", "#55a868", "#8172b2", "#ccb974")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def line_plot(
    path,
    x,
    series: dict[str, tuple],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    y_range: tuple[float, float] | None = None,
) -> None:
    """Write an SVG line plot.

    Args:
        path: output file.
        x: shared x values.
        series: label -> (y values, yerr values or None); error bars are
            drawn as +/- yerr whiskers.
        y_range: fixed (lo, hi) y axis, or None to fit the data.
    """
    x = [float(v) for v in x]
    if y_range is None:
        lo, hi = float("inf"), float("-inf")
        for ys, yerr in series.values():
            err = yerr if yerr is not None else [0.0] * len(ys)
            for v, e in zip(ys, err):
                lo = min(lo, float(v) - float(e))
                hi = max(hi, float(v) + float(e))
        if not lo < float("inf"):
            lo, hi = 0.0, 1.0
        pad = 0.05 * (hi - lo) if hi > lo else 0.5
        lo, hi = lo - pad, hi + pad
    else:
        lo, hi = y_range
    x_lo, x_hi = (min(x), max(x)) if x else (0.0, 1.0)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0

    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(v: float) -> float:
        return MARGIN_L + (v - x_lo) / (x_hi - x_lo) * pw

    def py(v: float) -> float:
        return MARGIN_T + (hi - v) / (hi - lo) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" '
        f'fill="none" stroke="#333" stroke-width="1"/>',
    ]
    if title:
        parts.append(
            f'<text x="{WIDTH / 2:.1f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )
    for tv in _ticks(x_lo, x_hi):
        parts.append(
            f'<line x1="{_fmt(px(tv))}" y1="{MARGIN_T + ph}" x2="{_fmt(px(tv))}" '
            f'y2="{MARGIN_T + ph + 5}" stroke="#333"/>'
            f'<text x="{_fmt(px(tv))}" y="{MARGIN_T + ph + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{tv:.4g}</text>'
        )
    for tv in _ticks(lo, hi):
        parts.append(
            f'<line x1="{MARGIN_L - 5}" y1="{_fmt(py(tv))}" x2="{MARGIN_L}" '
            f'y2="{_fmt(py(tv))}" stroke="#333"/>'
            f'<text x="{MARGIN_L - 8}" y="{_fmt(py(tv) + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{tv:.4g}</text>'
        )
    if xlabel:
        parts.append(
            f'<text x="{MARGIN_L + pw / 2:.1f}" y="{HEIGHT - 8}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{xlabel}</text>'
        )
    if ylabel:
        cy = MARGIN_T + ph / 2
        parts.append(
            f'<text x="14" y="{cy:.1f}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="12" transform="rotate(-90 14 {cy:.1f})">{ylabel}</text>'
        )
    for i, (label, (ys, yerr)) in enumerate(series.items()):
        color = COLORS[i % len(COLORS)]
        if yerr is not None:
            for xv, yv, ev in zip(x, ys, yerr):
                if ev <= 0:
                    continue
                cx = px(xv)
                parts.append(
                    f'<line x1="{_fmt(cx)}" y1="{_fmt(py(yv - ev))}" x2="{_fmt(cx)}" '
                    f'y2="{_fmt(py(yv + ev))}" stroke="{color}" stroke-width="1"/>'
                    f'<line x1="{_fmt(cx - 3)}" y1="{_fmt(py(yv - ev))}" '
                    f'x2="{_fmt(cx + 3)}" y2="{_fmt(py(yv - ev))}" stroke="{color}"/>'
                    f'<line x1="{_fmt(cx - 3)}" y1="{_fmt(py(yv + ev))}" '
                    f'x2="{_fmt(cx + 3)}" y2="{_fmt(py(yv + ev))}" stroke="{color}"/>'
                )
        points = " ".join(f"{_fmt(px(xv))},{_fmt(py(yv))}" for xv, yv in zip(x, ys))
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = MARGIN_T + 14 + 16 * i
        parts.append(
            f'<line x1="{MARGIN_L + 10}" y1="{ly - 4}" x2="{MARGIN_L + 34}" '
            f'y2="{ly - 4}" stroke="{color}" stroke-width="1.5"/>'
            f'<text x="{MARGIN_L + 40}" y="{ly}" font-family="sans-serif" '
            f'font-size="12">{label}</text>'
        )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
