"""Gantt rendering: one communication row per link, one computation row
per processor, every bar labeled with its (load, installment) pair.

Two backends. The ASCII one maps [0, makespan] onto a fixed-width grid of
columns, floor-division on the start so a processor that sits idle until
time t shows idle dots up to exactly floor(t/T * width). The SVG one is a
plain linear-axis drawing written by hand; coordinates are formatted with
three decimals so identical schedules give identical bytes.

Zero-width bars (an installment of size zero) are skipped in ASCII and
emitted as width-0 rects in SVG: the row still exists, it just shows no
ink. Bars of positive size always get at least one column so they cannot
vanish from the ASCII picture.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import StructuralError
from .model import Schedule
from .rationals import frac_str

ASCII_WIDTH = 60

SVG_PLOT_W = 640.0
SVG_ML, SVG_MR, SVG_MT, SVG_MB = 70.0, 30.0, 34.0, 16.0
SVG_ROW_H, SVG_BAR_H = 28.0, 18.0


def _bars(schedule: Schedule, start_grid, end_grid, row: int):
    """(label, start, end) triples for one row, in (load, installment) order."""
    out = []
    for n, js in enumerate(start_grid[row]):
        for j in range(len(js)):
            out.append((f"({n + 1},{j + 1})", start_grid[row][n][j],
                        end_grid[row][n][j]))
    return out


def _rows(schedule: Schedule):
    rows = []
    for i in range(schedule.m - 1):
        rows.append((f"link {i + 1}", "comm",
                     _bars(schedule, schedule.comm_start, schedule.comm_end, i)))
    for i in range(schedule.m):
        rows.append((f"P{i + 1}", "comp",
                     _bars(schedule, schedule.comp_start, schedule.comp_end, i)))
    return rows


def _col(t: Fraction, total: Fraction, width: int) -> int:
    if total == 0:
        return 0
    return min(int(t * width / total), width)


def render_ascii(schedule: Schedule, width: int = ASCII_WIDTH) -> str:
    total = schedule.makespan
    rows = _rows(schedule)
    pw = max(len(name) for name, _, _ in rows) + 1

    lines = []
    ts = frac_str(total)
    lines.append(" " * (pw + 1) + "0" + " " * max(width - 1 - len(ts), 1) + ts)
    for name, _, bars in rows:
        grid = ["."] * width
        for label, s, e in bars:
            if e == s:
                continue
            s_col = _col(s, total, width)
            e_col = max(_col(e, total, width), s_col + 1)
            for c in range(s_col, min(e_col, width)):
                grid[c] = "="
            for k, ch in enumerate(label):
                if s_col + k < min(e_col, width):
                    grid[s_col + k] = ch
        lines.append(f"{name:<{pw}}|{''.join(grid)}|")
    return "\n".join(lines) + "\n"


def _x(t: Fraction, total: Fraction) -> float:
    if total == 0:
        return SVG_ML
    return SVG_ML + float(t / total) * SVG_PLOT_W


def render_svg(schedule: Schedule) -> str:
    total = schedule.makespan
    rows = _rows(schedule)
    w = SVG_ML + SVG_PLOT_W + SVG_MR
    h = SVG_MT + len(rows) * SVG_ROW_H + SVG_MB
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.3f}" '
        f'height="{h:.3f}" viewBox="0 0 {w:.3f} {h:.3f}">',
        "<style>"
        "rect.comm{fill:#6b9bd1;stroke:#2f4f74;stroke-width:0.5}"
        "rect.comp{fill:#8fbf8f;stroke:#3d663d;stroke-width:0.5}"
        "text{font:10px monospace;fill:#222}"
        "line.axis{stroke:#222;stroke-width:1}"
        "</style>",
        f'<line class="axis" x1="{SVG_ML:.3f}" y1="{SVG_MT - 8:.3f}" '
        f'x2="{SVG_ML + SVG_PLOT_W:.3f}" y2="{SVG_MT - 8:.3f}" />',
        f'<text x="{SVG_ML:.3f}" y="{SVG_MT - 12:.3f}">0</text>',
        f'<text x="{SVG_ML + SVG_PLOT_W:.3f}" y="{SVG_MT - 12:.3f}" '
        f'text-anchor="end">{frac_str(total)}</text>',
    ]
    for r, (name, kind, bars) in enumerate(rows):
        y = SVG_MT + r * SVG_ROW_H
        bar_y = y + (SVG_ROW_H - SVG_BAR_H) / 2
        out.append(f'<text x="8" y="{y + SVG_ROW_H / 2 + 3:.3f}">{name}</text>')
        for label, s, e in bars:
            x0, x1 = _x(s, total), _x(e, total)
            out.append(f'<rect class="{kind}" x="{x0:.3f}" y="{bar_y:.3f}" '
                       f'width="{x1 - x0:.3f}" height="{SVG_BAR_H:.3f}" />')
            if e > s:
                out.append(f'<text x="{(x0 + x1) / 2:.3f}" '
                           f'y="{bar_y + SVG_BAR_H - 5:.3f}" '
                           f'text-anchor="middle">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_gantt(schedule: Schedule, fmt: str) -> str:
    if fmt == "ascii":
        return render_ascii(schedule)
    if fmt == "svg":
        return render_svg(schedule)
    raise StructuralError(f"unknown gantt format {fmt!r}")


def render_sweep_svg(table) -> str:
    """Line chart of makespan against installment count.

    table: (q, makespan) pairs as produced by installment_sweep. The y
    axis spans the observed range with a small margin so a flat series
    still draws mid-plot.
    """
    if not table:
        raise StructuralError("nothing to plot")
    lo = min(span for _, span in table)
    hi = max(span for _, span in table)
    pad = (hi - lo) / 10 if hi > lo else (hi if hi else Fraction(1)) / 10
    lo, hi = lo - pad, hi + pad
    w = SVG_ML + SVG_PLOT_W + SVG_MR
    h = 240.0
    plot_h = h - SVG_MT - 30.0

    def px(k: int) -> float:
        if len(table) == 1:
            return SVG_ML + SVG_PLOT_W / 2
        return SVG_ML + k * SVG_PLOT_W / (len(table) - 1)

    def py(span: Fraction) -> float:
        return SVG_MT + float((hi - span) / (hi - lo)) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.3f}" '
        f'height="{h:.3f}" viewBox="0 0 {w:.3f} {h:.3f}">',
        "<style>"
        "polyline{fill:none;stroke:#2f4f74;stroke-width:1.5}"
        "circle{fill:#2f4f74}"
        "text{font:10px monospace;fill:#222}"
        "line.axis{stroke:#222;stroke-width:1}"
        "</style>",
        f'<line class="axis" x1="{SVG_ML:.3f}" y1="{SVG_MT + plot_h:.3f}" '
        f'x2="{SVG_ML + SVG_PLOT_W:.3f}" y2="{SVG_MT + plot_h:.3f}" />',
    ]
    points = " ".join(f"{px(k):.3f},{py(span):.3f}"
                      for k, (_, span) in enumerate(table))
    out.append(f'<polyline points="{points}" />')
    for k, (q, span) in enumerate(table):
        out.append(f'<circle cx="{px(k):.3f}" cy="{py(span):.3f}" r="2.5" />')
        out.append(f'<text x="{px(k):.3f}" y="{py(span) - 6:.3f}" '
                   f'text-anchor="middle">{frac_str(span)}</text>')
        out.append(f'<text x="{px(k):.3f}" y="{SVG_MT + plot_h + 14:.3f}" '
                   f'text-anchor="middle">Q={q}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
