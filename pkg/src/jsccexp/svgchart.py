"""Dependency-light SVG line charts (polyline-based, fixed 900x600 viewport).

Good enough for curve-plus-horizontal-level figures; the x axis is
logarithmic in rho by default, matching how the exponent curves are read.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

WIDTH, HEIGHT = 900, 600
MARGIN_LEFT, MARGIN_RIGHT = 80, 210
MARGIN_TOP, MARGIN_BOTTOM = 50, 70

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"]
_DASH = {"solid": None, "dash": "8,5", "dashdot": "10,4,2,4", "dot": "2,4"}


def _esc(s: str) -> str:
    return (
        s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        .replace('"', "&quot;")
    )


@dataclass(frozen=True)
class Series:
    label: str
    values: list
    style: str = "solid"


@dataclass(frozen=True)
class Level:
    label: str
    value: float
    style: str = "dash"


def write_line_chart(
    path,
    x_values,
    series: list[Series],
    levels: list[Level] = (),
    *,
    title: str = "",
    x_label: str = "rho",
    y_label: str = "nats / channel use",
    x_log: bool = True,
) -> None:
    xs = [float(x) for x in x_values]
    if not xs or not series:
        raise ValueError("chart needs a nonempty grid and at least one series")

    def xt(x: float) -> float:
        return math.log(x) if x_log else x

    ys = [v for s in series for v in s.values if math.isfinite(v)]
    ys += [lv.value for lv in levels if math.isfinite(lv.value)]
    y_lo, y_hi = min(ys), max(ys)
    # focus on the nonnegative range plus the reference levels; exponent
    # objectives dive steeply at large rho and would flatten the chart
    floor = min([lv.value for lv in levels if math.isfinite(lv.value)] + [0.0])
    if y_hi > floor:
        y_lo = max(y_lo, floor - 0.15 * (y_hi - floor))
    if y_hi - y_lo < 1e-12:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad = 0.06 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    # drop the trailing x-range where every series has fallen out the
    # bottom of the window
    last = 1
    for s in series:
        for i in range(len(xs) - 1, -1, -1):
            if math.isfinite(s.values[i]) and s.values[i] >= y_lo:
                last = max(last, i)
                break
    if last < len(xs) - 1:
        xs = xs[: last + 1]
        series = [Series(s.label, list(s.values[: last + 1]), s.style) for s in series]

    x_lo, x_hi = xt(xs[0]), xt(xs[-1])

    pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(x: float) -> float:
        return MARGIN_LEFT + (xt(x) - x_lo) / (x_hi - x_lo) * pw

    def py(y: float) -> float:
        return MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
    ]
    if title:
        out.append(
            f'<text x="{WIDTH / 2:.1f}" y="28" text-anchor="middle" '
            f'font-size="18" font-family="sans-serif">{_esc(title)}</text>'
        )

    # y grid lines and ticks
    for i in range(6):
        yv = y_lo + (y_hi - y_lo) * i / 5
        yy = py(yv)
        out.append(
            f'<line x1="{MARGIN_LEFT}" y1="{yy:.2f}" x2="{MARGIN_LEFT + pw}" '
            f'y2="{yy:.2f}" stroke="#e0e0e0" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{MARGIN_LEFT - 8}" y="{yy + 4:.2f}" text-anchor="end" '
            f'font-size="12" font-family="sans-serif">{yv:.4g}</text>'
        )

    # x ticks at decades / fifths
    n_ticks = 6
    for i in range(n_ticks):
        if x_log:
            xv = math.exp(x_lo + (x_hi - x_lo) * i / (n_ticks - 1))
        else:
            xv = xs[0] + (xs[-1] - xs[0]) * i / (n_ticks - 1)
        xx = px(xv)
        out.append(
            f'<line x1="{xx:.2f}" y1="{MARGIN_TOP + ph}" x2="{xx:.2f}" '
            f'y2="{MARGIN_TOP + ph + 6}" stroke="#000" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{xx:.2f}" y="{MARGIN_TOP + ph + 22}" text-anchor="middle" '
            f'font-size="12" font-family="sans-serif">{xv:.4g}</text>'
        )

    # axes
    out.append(
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP + ph}" x2="{MARGIN_LEFT + pw}" '
        f'y2="{MARGIN_TOP + ph}" stroke="#000" stroke-width="1.5"/>'
    )
    out.append(
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" '
        f'y2="{MARGIN_TOP + ph}" stroke="#000" stroke-width="1.5"/>'
    )
    out.append(
        f'<text x="{MARGIN_LEFT + pw / 2:.1f}" y="{HEIGHT - 18}" text-anchor="middle" '
        f'font-size="14" font-family="sans-serif">{_esc(x_label)}</text>'
    )
    out.append(
        f'<text x="20" y="{MARGIN_TOP + ph / 2:.1f}" text-anchor="middle" '
        f'font-size="14" font-family="sans-serif" '
        f'transform="rotate(-90 20 {MARGIN_TOP + ph / 2:.1f})">{_esc(y_label)}</text>'
    )

    legend_y = MARGIN_TOP + 10
    color_idx = 0

    def legend_entry(label: str, color: str, dash: str | None):
        nonlocal legend_y
        lx = MARGIN_LEFT + pw + 18
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(
            f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 28}" y2="{legend_y}" '
            f'stroke="{color}" stroke-width="2.5"{dash_attr}/>'
        )
        out.append(
            f'<text x="{lx + 34}" y="{legend_y + 4}" font-size="12" '
            f'font-family="sans-serif">{_esc(label)}</text>'
        )
        legend_y += 22

    for s in series:
        color = _PALETTE[color_idx % len(_PALETTE)]
        color_idx += 1
        dash = _DASH.get(s.style)
        pts = " ".join(
            f"{px(x):.2f},{py(v):.2f}"
            for x, v in zip(xs, s.values)
            if math.isfinite(v) and y_lo <= v <= y_hi
        )
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="2"{dash_attr} '
            f'points="{pts}"/>'
        )
        legend_entry(s.label, color, dash)

    for lv in levels:
        color = _PALETTE[color_idx % len(_PALETTE)]
        color_idx += 1
        dash = _DASH.get(lv.style)
        if math.isfinite(lv.value):
            yy = py(lv.value)
            dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
            out.append(
                f'<line x1="{MARGIN_LEFT}" y1="{yy:.2f}" x2="{MARGIN_LEFT + pw}" '
                f'y2="{yy:.2f}" stroke="{color}" stroke-width="2"{dash_attr}/>'
            )
            legend_entry(lv.label, color, dash)
        else:
            legend_entry(f"{lv.label} (infinite)", color, None)

    out.append("</svg>")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
