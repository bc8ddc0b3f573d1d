"""Minimal deterministic SVG writers: mean-line-with-band plots and mission timelines.

Output depends only on the inputs (fixed number formatting, no timestamps),
so re-rendering the same data yields identical bytes.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from fieldnet.metrics import fmt

PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2"]

WIDTH, HEIGHT = 720, 420
MARGIN = dict(left=70, right=170, top=40, bottom=55)


def _f(x):
    return f"{x:.2f}"


def _nice_ticks(lo, hi, n=5):
    if not math.isfinite(lo) or not math.isfinite(hi):
        return [0.0]
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.floor(lo / step) * step
    ticks = []
    t = start
    while t <= hi + step * 1e-9:
        ticks.append(round(t, 10))
        t += step
    return ticks


def _header(title, width=WIDTH, height=HEIGHT):
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
    ]


def band_plot(series, title, xlabel, ylabel):
    """Lines with a +/-1 std band.

    ``series`` is a list of ``(label, x, mean, std)`` with equal-length
    sequences; NaN points are skipped.
    """
    xs, ys = [], []
    for _, x, mean, std in series:
        for xi, m, s in zip(x, mean, std):
            if math.isnan(m):
                continue
            s = 0.0 if math.isnan(s) else s
            xs.append(xi)
            ys.extend((m - s, m + s))
    x_lo, x_hi = (min(xs), max(xs)) if xs else (0.0, 1.0)
    y_lo, y_hi = (min(ys), max(ys)) if ys else (0.0, 1.0)
    y_lo = min(y_lo, 0.0)
    if y_hi <= y_lo:
        y_hi = y_lo + 1.0
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0
    yticks = _nice_ticks(y_lo, y_hi)
    y_lo, y_hi = min(y_lo, yticks[0]), max(y_hi, yticks[-1])
    xticks = _nice_ticks(x_lo, x_hi)

    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(x):
        return MARGIN["left"] + (x - x_lo) / (x_hi - x_lo) * pw

    def py(y):
        return MARGIN["top"] + ph - (y - y_lo) / (y_hi - y_lo) * ph

    out = _header(title)
    out.append(
        f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" '
        'fill="none" stroke="#444"/>'
    )
    for t in yticks:
        if y_lo <= t <= y_hi:
            y = py(t)
            out.append(f'<line x1="{MARGIN["left"]}" x2="{MARGIN["left"] + pw}" y1="{_f(y)}" y2="{_f(y)}" stroke="#ddd"/>')
            out.append(f'<text x="{MARGIN["left"] - 6}" y="{_f(y + 4)}" text-anchor="end">{t:g}</text>')
    for t in xticks:
        if x_lo <= t <= x_hi:
            x = px(t)
            out.append(f'<text x="{_f(x)}" y="{MARGIN["top"] + ph + 18}" text-anchor="middle">{t:g}</text>')
    out.append(
        f'<text x="{MARGIN["left"] + pw / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>'
    )
    cy = MARGIN["top"] + ph / 2
    out.append(
        f'<text x="18" y="{cy:.1f}" text-anchor="middle" transform="rotate(-90 18 {cy:.1f})">{escape(ylabel)}</text>'
    )

    for i, (label, x, mean, std) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        pts = [(xi, m, 0.0 if math.isnan(s) else s) for xi, m, s in zip(x, mean, std) if not math.isnan(m)]
        if not pts:
            continue
        upper = " ".join(f"{_f(px(xi))},{_f(py(m + s))}" for xi, m, s in pts)
        lower = " ".join(f"{_f(px(xi))},{_f(py(m - s))}" for xi, m, s in reversed(pts))
        out.append(f'<polygon class="band" points="{upper} {lower}" fill="{color}" fill-opacity="0.25" stroke="none"/>')
        line = " ".join(f"{_f(px(xi))},{_f(py(m))}" for xi, m, _ in pts)
        out.append(f'<polyline class="mean" points="{line}" fill="none" stroke="{color}" stroke-width="1.8"/>')
        ly = MARGIN["top"] + 14 + 18 * i
        lx = MARGIN["left"] + pw + 12
        out.append(f'<line x1="{lx}" x2="{lx + 18}" y1="{ly - 4}" y2="{ly - 4}" stroke="{color}" stroke-width="3"/>')
        out.append(f'<text x="{lx + 24}" y="{ly}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def mission_timeline(reports, span_s=1.0, title="Message timeline"):
    """One row per mission report over the first ``span_s`` seconds.

    Boxes mark location messages sent at each location-space entry; a dashed
    line marks when the matching reply arrives. A reply drawn before the next
    box means the robot is still in the space it asked about.
    """
    rows = len(reports)
    height = 90 + 70 * max(rows, 1)
    span_ms = span_s * 1000.0
    left, right = 130, 40
    pw = WIDTH - left - right

    def px(t_ms):
        return left + t_ms / span_ms * pw

    out = _header(title, WIDTH, height)
    axis_y = 60 + 70 * rows
    out.append(f'<line x1="{left}" x2="{left + pw}" y1="{axis_y}" y2="{axis_y}" stroke="#444"/>')
    for t in _nice_ticks(0.0, span_s, 5):
        if t <= span_s:
            x = px(t * 1000.0)
            out.append(f'<line x1="{_f(x)}" x2="{_f(x)}" y1="{axis_y}" y2="{axis_y + 5}" stroke="#444"/>')
            out.append(f'<text x="{_f(x)}" y="{axis_y + 18}" text-anchor="middle">{t:g}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{axis_y + 36}" text-anchor="middle">time (s)</text>')

    for r, report in enumerate(reports):
        color = PALETTE[r % len(PALETTE)]
        top = 45 + 70 * r
        label = report.label or f"mission {r + 1}"
        out.append(f'<text x="{left - 10}" y="{top + 22}" text-anchor="end">{escape(label)}</text>')
        out.append(
            f'<text x="{left - 10}" y="{top + 38}" text-anchor="end" font-size="10">{escape(report.verdict)}</text>'
        )
        for p in report.pairs:
            if p.sent_ms > span_ms:
                break
            x = px(p.sent_ms)
            out.append(f'<rect class="sent" x="{_f(x)}" y="{top + 8}" width="8" height="20" fill="#1f77b4"/>')
            rx = p.received_ms
            if rx <= span_ms:
                out.append(
                    f'<line class="reply" x1="{_f(px(rx))}" x2="{_f(px(rx))}" y1="{top}" y2="{top + 40}" '
                    f'stroke="{color if p.lead else "#d62728"}" stroke-dasharray="4,3" stroke-width="1.5"/>'
                )
        first = report.pairs[0]
        out.append(
            f'<text x="{left + pw}" y="{top + 52}" text-anchor="end" font-size="10">'
            f"cumulative {fmt(first.cumulative_delay_ms)} ms, window {fmt(report.window_ms)} ms, "
            f"margin {'+' if first.margin_ms >= 0 else ''}{fmt(first.margin_ms)} ms</text>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
