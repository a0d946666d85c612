"""CSV and SVG emission for sweep results."""

from __future__ import annotations

import io
import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .experiments import COLUMNS, Record, SweepResult

# Fixed colour per catalog graph so plots stay comparable.
PALETTE = {
    "P4": "#d62728",
    "C4": "#2ca02c",
    "PAN": "#1f77b4",
    "Sd4": "#d400d4",
    "K4": "#17becf",
    "S3": "#ff7f0e",
}
_EXTRA_COLORS = ("#333333", "#8c564b", "#7f7f7f", "#bcbd22", "#9467bd")

OBSERVABLE_LABELS = {
    "qfi_field": "F_h",
    "qfi_temp": "F_T",
    "boltzmann_rate": "dp0/dT",
    "spectrum": "E_n",
    "deformation": "D_n",
    "qfi_field_fd": "F_h (finite difference)",
}


class OutputError(OSError):
    pass


def fmt(x: float) -> str:
    """12 significant digits; negative zero printed as 0."""
    x = float(x)
    if x == 0.0:
        return "0"
    return f"{x:.12g}"


def csv_header(observable: str) -> list[str]:
    if observable == "spectrum":
        return ["graph", "J", "h", "index", "eigenvalue"]
    if observable == "deformation":
        return ["graph", "J", "h", *COLUMNS["deformation"]]
    return ["graph", "J", "h", "T", *COLUMNS[observable]]


def csv_rows(record: Record) -> list[list[str]]:
    obs = record.observable
    head = [record.graph, fmt(record.J), fmt(record.h)]
    if obs == "spectrum":
        return [head + [str(i), fmt(e)] for i, e in enumerate(record.values)]
    if obs == "deformation":
        n, d, g, shift, pure, mixed = record.values
        return [head + [str(int(n)), fmt(d), str(int(g)), fmt(shift), fmt(pure), fmt(mixed)]]
    return [head + [fmt(record.T)] + [fmt(v) for v in record.values]]


def _pick_observable(result: SweepResult, observable: str | None) -> str:
    if observable is not None:
        return observable
    obs = result.observables
    if len(obs) != 1:
        raise ValueError(f"result holds several observables {obs}; pick one")
    return obs[0]


def render_csv(result: SweepResult, observable: str | None = None) -> str:
    observable = _pick_observable(result, observable)
    buf = io.StringIO()
    buf.write(",".join(csv_header(observable)) + "\n")
    for rec in result.select(observable=observable):
        for row in csv_rows(rec):
            buf.write(",".join(row) + "\n")
    return buf.getvalue()


def emit_csv(result: SweepResult, path, observable: str | None = None) -> Path:
    """Write one observable as UTF-8, LF-terminated CSV."""
    path = Path(path)
    text = render_csv(result, observable)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
    return path


def csv_filename(observable: str, J: float, result: SweepResult) -> str:
    fixed = "T" if result.axis == "field" else "h"
    return f"{observable}_J{fmt(J)}_{fixed}{fmt(result.config.fixed)}.csv"


def emit_sweep_csvs(result: SweepResult, out_dir) -> list[Path]:
    """One file per (observable, J) named ``<observable>_J<J>_<fixed>.csv``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for obs in result.config.observables:
        for J in result.config.J:
            sub = SweepResult(result.config, tuple(result.select(J=float(J), observable=obs)), result.metadata)
            written.append(emit_csv(sub, out_dir / csv_filename(obs, J, result), obs))
    return written


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if not math.isfinite(lo) or not math.isfinite(hi):
        raise ValueError("non-finite axis bounds")
    if hi <= lo:
        hi = lo + (abs(lo) if lo else 1.0)
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _color(name: str, extra_index: int) -> str:
    return PALETTE.get(name, _EXTRA_COLORS[extra_index % len(_EXTRA_COLORS)])


def render_svg(
    result: SweepResult,
    observable: str | None = None,
    J: float | None = None,
    column: str | None = None,
    width: int = 800,
    height: int = 600,
    title: str | None = None,
) -> str:
    """Line chart of one observable at one coupling, one polyline per graph."""
    if not result.records:
        raise ValueError("cannot plot an empty result")
    if observable is None and len(result.observables) > 1:
        raise ValueError(f"mixed observables {result.observables}; plot one at a time")
    observable = observable or result.observables[0]
    if J is None:
        couplings = {r.J for r in result.select(observable=observable)}
        if len(couplings) > 1:
            raise ValueError(f"mixed couplings {sorted(couplings)}; plot one J at a time")
        J = couplings.pop()

    series = []  # (graph, x, y)
    extra = 0
    for name in result.graph_names:
        rows = result.select(name, J, observable)
        if not rows:
            continue
        x = np.array([r.axis_value(result.axis) for r in rows])
        if observable == "spectrum":
            levels = np.array([r.values for r in rows])
            ys = [levels[:, k] for k in range(levels.shape[1])]
        else:
            x, y = result.curve(name, observable, J, column)
            ys = [y]
        color = _color(name, extra)
        if name not in PALETTE:
            extra += 1
        series.append((name, color, x, ys))
    if not series:
        raise ValueError(f"no rows for observable {observable!r} at J={J}")

    xs = np.concatenate([s[2] for s in series])
    ys_all = np.concatenate([y for s in series for y in s[3]])
    ys_all = ys_all[np.isfinite(ys_all)]
    xt = nice_ticks(float(xs.min()), float(xs.max()))
    yt = nice_ticks(float(ys_all.min()), float(ys_all.max()))
    x0, x1 = min(xt[0], xs.min()), max(xt[-1], xs.max())
    y0, y1 = min(yt[0], ys_all.min()), max(yt[-1], ys_all.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    left, right, top, bottom = 80, 150, 50, 60
    pw, ph = width - left - right, height - top - bottom

    def px(v):
        return left + (v - x0) / (x1 - x0) * pw

    def py(v):
        return top + ph - (v - y0) / (y1 - y0) * ph

    ylabel = OBSERVABLE_LABELS.get(observable, observable)
    xlabel = "h" if result.axis == "field" else "T"
    title = title or f"{ylabel} vs {xlabel}, J = {fmt(J)}"
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{left + pw / 2:.1f}" y="{top / 2 + 5:.1f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{escape(title)}</text>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in xt:
        X = px(t)
        out.append(f'<line x1="{X:.2f}" y1="{top + ph}" x2="{X:.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(
            f'<text x="{X:.2f}" y="{top + ph + 20}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="12">{t:g}</text>'
        )
    for t in yt:
        Y = py(t)
        out.append(f'<line x1="{left - 5}" y1="{Y:.2f}" x2="{left}" y2="{Y:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{left - 8}" y="{Y + 4:.2f}" text-anchor="end" font-family="sans-serif" '
            f'font-size="12">{t:g}</text>'
        )
    out.append(
        f'<text x="{left + pw / 2:.1f}" y="{height - 15}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="20" y="{top + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" font-size="14" '
        f'transform="rotate(-90 20 {top + ph / 2:.1f})">{escape(ylabel)}</text>'
    )
    for name, color, x, ys in series:
        for y in ys:
            ok = np.isfinite(y)
            pts = [(px(a), py(b)) for a, b in zip(x[ok], y[ok])]
            if len(pts) == 1:
                cx, cy = pts[0]
                out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="3" fill="{color}" class="marker"/>')
            elif pts:
                coords = " ".join(f"{a:.2f},{b:.2f}" for a, b in pts)
                out.append(
                    f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5" '
                    f'data-graph="{escape(name)}"/>'
                )
    for k, (name, color, _, _) in enumerate(series):
        Y = top + 15 + 20 * k
        Xl = left + pw + 15
        out.append(f'<line x1="{Xl}" y1="{Y}" x2="{Xl + 25}" y2="{Y}" stroke="{color}" stroke-width="3"/>')
        out.append(
            f'<text x="{Xl + 32}" y="{Y + 4}" font-family="sans-serif" font-size="13">{escape(name)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(result: SweepResult, path, **options) -> Path:
    text = render_svg(result, **options)
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
    return path
