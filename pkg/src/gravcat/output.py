"""CSV and SVG writers for sweep tables.

Both writers are byte-deterministic: the same table always yields the same
file, which lets figure output be diffed across runs and worker counts.
"""

from __future__ import annotations

import csv
import io
import os
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .experiments import SweepTable

CSV_HEADER = ("t", "f", "eta", "param2_name", "param2_value", "quantity", "value")


def fmt_num(v: float) -> str:
    return format(float(v), ".17g")


def _open_target(destination):
    if hasattr(destination, "write"):
        return destination, False
    return open(destination, "w", newline="", encoding="utf-8"), True


def emit_csv(table: SweepTable, destination) -> None:
    """Write ``table`` as CSV to a path or a text stream.

    A ``# preset=..., assumed_params=...`` comment line precedes the header
    when the table came from a figure preset.
    """
    if not table.rows:
        raise ValueError("cannot write an empty table")
    fh, owned = _open_target(destination)
    try:
        if table.metadata:
            meta = ", ".join(f"{k}={v}" for k, v in table.metadata.items())
            fh.write(f"# {meta}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        q = table.quantity
        for row in table.rows:
            r = row.record
            w.writerow(
                (
                    fmt_num(r.t),
                    fmt_num(r.f),
                    fmt_num(r.eta),
                    row.param2_name,
                    fmt_num(row.param2_value),
                    q,
                    fmt_num(r.value(q)),
                )
            )
    finally:
        if owned:
            fh.close()


def csv_text(table: SweepTable) -> str:
    buf = io.StringIO()
    emit_csv(table, buf)
    return buf.getvalue()


def read_csv(source) -> tuple[dict, list[dict]]:
    """Parse a file written by :func:`emit_csv` into (metadata, rows)."""
    text = Path(source).read_text(encoding="utf-8") if isinstance(source, (str, os.PathLike)) else source.read()
    lines = text.splitlines()
    meta = {}
    if lines and lines[0].startswith("#"):
        for item in lines[0][1:].split(", "):
            k, _, v = item.strip().partition("=")
            meta[k] = v
        lines = lines[1:]
    rows = []
    for rec in csv.DictReader(lines):
        for k in ("t", "f", "eta", "param2_value", "value"):
            rec[k] = float(rec[k])
        rows.append(rec)
    return meta, rows


# -- SVG ---------------------------------------------------------------------

WIDTH, HEIGHT = 640, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 110, 30, 50
SERIES_COLORS = ("#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")
# dark-to-light ramp; linear interpolation between stops keeps it monotone
_RAMP = ((68, 1, 84), (59, 82, 139), (33, 145, 140), (94, 201, 98), (253, 231, 37))
LABELS = {"coherence": "C_l1", "lqfi": "LQFI", "bell": "B_max", "temperature": "T"}


def _f(v: float) -> str:
    return f"{v:.3f}"


def ramp_color(u: float) -> str:
    u = min(max(u, 0.0), 1.0) * (len(_RAMP) - 1)
    i = min(int(u), len(_RAMP) - 2)
    frac = u - i
    rgb = [round(a + (b - a) * frac) for a, b in zip(_RAMP[i], _RAMP[i + 1])]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _bounds(vals) -> tuple[float, float]:
    lo, hi = float(np.nanmin(vals)), float(np.nanmax(vals))
    if hi - lo < 1e-12:
        pad = max(abs(lo) * 0.05, 0.05)
        lo, hi = lo - pad, hi + pad
    return lo, hi


class _Frame:
    def __init__(self, xlo, xhi, ylo, yhi):
        self.xlo, self.xhi, self.ylo, self.yhi = xlo, xhi, ylo, yhi
        self.w = WIDTH - MARGIN_L - MARGIN_R
        self.h = HEIGHT - MARGIN_T - MARGIN_B

    def px(self, x):
        return MARGIN_L + (x - self.xlo) / (self.xhi - self.xlo) * self.w

    def py(self, y):
        return MARGIN_T + (1.0 - (y - self.ylo) / (self.yhi - self.ylo)) * self.h


def _axes(fr: _Frame, xlabel: str, ylabel: str) -> list[str]:
    x0, y0 = MARGIN_L, MARGIN_T + fr.h
    out = [
        f'<line x1="{x0}" y1="{y0}" x2="{x0 + fr.w}" y2="{y0}" stroke="#000"/>',
        f'<line x1="{x0}" y1="{MARGIN_T}" x2="{x0}" y2="{y0}" stroke="#000"/>',
    ]
    for k in range(5):
        xv = fr.xlo + (fr.xhi - fr.xlo) * k / 4
        yv = fr.ylo + (fr.yhi - fr.ylo) * k / 4
        px, py = fr.px(xv), fr.py(yv)
        out.append(f'<line x1="{_f(px)}" y1="{y0}" x2="{_f(px)}" y2="{y0 + 5}" stroke="#000"/>')
        out.append(f'<text x="{_f(px)}" y="{y0 + 18}" text-anchor="middle">{xv:.3g}</text>')
        out.append(f'<line x1="{x0 - 5}" y1="{_f(py)}" x2="{x0}" y2="{_f(py)}" stroke="#000"/>')
        out.append(f'<text x="{x0 - 8}" y="{_f(py + 4)}" text-anchor="end">{yv:.3g}</text>')
    out.append(f'<text x="{_f(x0 + fr.w / 2)}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="18" y="{_f(MARGIN_T + fr.h / 2)}" text-anchor="middle" '
        f'transform="rotate(-90 18 {_f(MARGIN_T + fr.h / 2)})">{escape(ylabel)}</text>'
    )
    return out


def _line_plot(table: SweepTable) -> list[str]:
    spec = table.spec
    vals = table.values()
    xs = np.array(spec.x_axis.values) if spec.x_axis else np.zeros(1)
    fr = _Frame(*_bounds(xs), *_bounds(vals))
    xname = spec.x_axis.name if spec.x_axis else ""
    body = _axes(fr, LABELS.get(xname, xname), LABELS[table.quantity])
    series = spec.y_axis.values if spec.y_axis else (None,)
    for k, (yv, row) in enumerate(zip(series, vals)):
        color = SERIES_COLORS[k % len(SERIES_COLORS)]
        pts = " ".join(f"{_f(fr.px(x))},{_f(fr.py(v))}" for x, v in zip(xs, row))
        label = "" if yv is None else f' data-{spec.y_axis.name}="{yv:.17g}"'
        body.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{label} points="{pts}"/>')
        if yv is not None:
            ly = MARGIN_T + 16 * k + 10
            lx = WIDTH - MARGIN_R + 10
            body.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
            name = LABELS.get(spec.y_axis.name, spec.y_axis.name)
            body.append(f'<text x="{lx + 25}" y="{ly + 4}">{escape(name)}={yv:.3g}</text>')
    return body


def _heatmap(table: SweepTable) -> list[str]:
    spec = table.spec
    vals = table.values()
    xs, ys = np.array(spec.x_axis.values), np.array(spec.y_axis.values)
    nx, ny = len(xs), len(ys)
    fr = _Frame(0.0, float(nx), 0.0, float(ny))
    body = ['<g shape-rendering="crispEdges">']
    vlo, vhi = _bounds(vals)
    cw, ch = fr.w / nx, fr.h / ny
    for j in range(ny):
        for i in range(nx):
            u = (vals[j, i] - vlo) / (vhi - vlo)
            x, y = MARGIN_L + i * cw, MARGIN_T + (ny - 1 - j) * ch
            body.append(
                f'<rect class="cell" x="{_f(x)}" y="{_f(y)}" width="{_f(cw)}" '
                f'height="{_f(ch)}" fill="{ramp_color(u)}"/>'
            )
    body.append("</g>")
    x0, y0 = MARGIN_L, MARGIN_T + fr.h
    body.append(f'<rect x="{x0}" y="{MARGIN_T}" width="{_f(fr.w)}" height="{_f(fr.h)}" fill="none" stroke="#000"/>')
    xl, yl = spec.x_axis.name, spec.y_axis.name
    body.append(f'<text x="{x0}" y="{y0 + 18}">{xs[0]:.3g}</text>')
    body.append(f'<text x="{x0 + fr.w}" y="{y0 + 18}" text-anchor="end">{xs[-1]:.3g}</text>')
    body.append(f'<text x="{x0 - 8}" y="{y0}" text-anchor="end">{ys[0]:.3g}</text>')
    body.append(f'<text x="{x0 - 8}" y="{MARGIN_T + 10}" text-anchor="end">{ys[-1]:.3g}</text>')
    body.append(f'<text x="{_f(x0 + fr.w / 2)}" y="{HEIGHT - 12}" text-anchor="middle">{escape(LABELS.get(xl, xl))}</text>')
    mid = _f(MARGIN_T + fr.h / 2)
    body.append(f'<text x="18" y="{mid}" text-anchor="middle" transform="rotate(-90 18 {mid})">{escape(LABELS.get(yl, yl))}</text>')
    # colour bar
    bx = WIDTH - MARGIN_R + 20
    steps = 32
    for k in range(steps):
        u = k / (steps - 1)
        by = MARGIN_T + fr.h - (k + 1) * fr.h / steps
        body.append(f'<rect x="{bx}" y="{_f(by)}" width="16" height="{_f(fr.h / steps)}" fill="{ramp_color(u)}"/>')
    body.append(f'<text x="{bx + 20}" y="{y0}">{vlo:.3g}</text>')
    body.append(f'<text x="{bx + 20}" y="{MARGIN_T + 10}">{vhi:.3g}</text>')
    body.append(f'<text x="{bx}" y="{MARGIN_T - 10}">{escape(LABELS[table.quantity])}</text>')
    return body


def svg_text(table: SweepTable, style: str = "auto") -> str:
    if not table.rows:
        raise ValueError("cannot plot an empty table")
    spec = table.spec
    if style == "auto":
        style = "heatmap" if spec.y_axis is not None and len(spec.y_axis) > len(SERIES_COLORS) else "line"
    if style == "heatmap":
        if spec.y_axis is None:
            raise ValueError("a heatmap needs a 2-D table")
        body = _heatmap(table)
    elif style == "line":
        body = _line_plot(table)
    else:
        raise ValueError(f"unknown style {style!r}; expected line, heatmap or auto")
    title = table.metadata.get("preset", table.quantity)
    head = (
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">\n'
        f"<title>{escape(str(title))}</title>\n"
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#fff"/>\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def emit_svg(table: SweepTable, destination, style: str = "auto") -> None:
    text = svg_text(table, style)
    fh, owned = _open_target(destination)
    try:
        fh.write(text)
    finally:
        if owned:
            fh.close()

