"""Minimal deterministic SVG scatter/line plots (no plotting dependency).

Axes are drawn with decade ticks when log-scaled; output is a plain SVG
string whose bytes depend only on the data.
"""

import numpy as np

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 70, 20, 30, 50


def _fmt(x):
    return f"{x:.6g}"


def _scale(vals, log):
    vals = np.asarray(vals, dtype=np.float64)
    if log:
        vals = np.where(vals > 0, vals, np.nan)
        vals = np.log10(vals)
    finite = vals[np.isfinite(vals)]
    if finite.size == 0:
        lo, hi = 0.0, 1.0
    else:
        lo, hi = float(finite.min()), float(finite.max())
    if hi - lo < 1e-12:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return vals, lo - pad, hi + pad


def _ticks(lo, hi, log):
    if log:
        start = int(np.ceil(lo))
        return [(t, f"1e{t}") for t in range(start, int(np.floor(hi)) + 1)][:12]
    raw = np.linspace(lo, hi, 6)
    return [(t, _fmt(t)) for t in raw]


def render_plot(series, path, title="", xlabel="", ylabel="", log_x=True, log_y=False, hline=None):
    """series: list of dicts {x, y, label, kind: 'scatter'|'line', color}."""
    all_x = np.concatenate([np.asarray(s["x"], dtype=np.float64) for s in series])
    all_y = np.concatenate([np.asarray(s["y"], dtype=np.float64) for s in series])
    _, x_lo, x_hi = _scale(all_x, log_x)
    _, y_lo, y_hi = _scale(all_y, log_y)

    def px(x):
        v = np.log10(x) if log_x else x
        return _ML + (v - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def py(y):
        v = np.log10(y) if log_y else y
        return _H - _MB - (v - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" height="{_H - _MT - _MB}" '
        'fill="none" stroke="black"/>',
    ]
    for t, lbl in _ticks(x_lo, x_hi, log_x):
        xp = _ML + (t - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)
        parts.append(f'<line x1="{_fmt(xp)}" y1="{_H - _MB}" x2="{_fmt(xp)}" y2="{_H - _MB + 5}" stroke="black"/>')
        parts.append(f'<text x="{_fmt(xp)}" y="{_H - _MB + 18}" text-anchor="middle" font-size="10">{lbl}</text>')
    for t, lbl in _ticks(y_lo, y_hi, log_y):
        yp = _H - _MB - (t - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)
        parts.append(f'<line x1="{_ML - 5}" y1="{_fmt(yp)}" x2="{_ML}" y2="{_fmt(yp)}" stroke="black"/>')
        parts.append(f'<text x="{_ML - 8}" y="{_fmt(yp + 3)}" text-anchor="end" font-size="10">{lbl}</text>')
    parts.append(f'<text x="{_W / 2}" y="{_H - 12}" text-anchor="middle" font-size="12">{xlabel}</text>')
    parts.append(
        f'<text x="16" y="{_H / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {_H / 2})">{ylabel}</text>'
    )
    if hline is not None:
        yp = py(hline)
        parts.append(
            f'<line x1="{_ML}" y1="{_fmt(yp)}" x2="{_W - _MR}" y2="{_fmt(yp)}" '
            'stroke="gray" stroke-dasharray="4 3"/>'
        )
    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    legend_y = _MT + 14
    for i, s in enumerate(series):
        color = s.get("color", palette[i % len(palette)])
        xs = np.asarray(s["x"], dtype=np.float64)
        ys = np.asarray(s["y"], dtype=np.float64)
        good = np.isfinite(xs) & np.isfinite(ys)
        if log_x:
            good &= xs > 0
        if log_y:
            good &= ys > 0
        xs, ys = xs[good], ys[good]
        if s.get("kind", "scatter") == "line":
            pts = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(xs, ys))
            parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        else:
            for x, y in zip(xs, ys):
                parts.append(f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="2" fill="{color}" fill-opacity="0.6"/>')
        if s.get("label"):
            parts.append(
                f'<rect x="{_W - _MR - 150}" y="{legend_y - 9}" width="10" height="10" fill="{color}"/>'
                f'<text x="{_W - _MR - 135}" y="{legend_y}" font-size="11">{s["label"]}</text>'
            )
            legend_y += 16
    parts.append("</svg>")
    svg = "\n".join(parts)
    with open(path, "w") as fh:
        fh.write(svg)
    return path


def write_csv(columns, path):
    """columns: list of (name, values); plain CSV with a header row."""
    names = [c[0] for c in columns]
    arrays = [np.asarray(c[1]) for c in columns]
    rows = len(arrays[0])
    with open(path, "w") as fh:
        fh.write(",".join(names) + "\n")
        for i in range(rows):
            fh.write(",".join(_fmt(float(a[i])) for a in arrays) + "\n")
    return path
