"""Minimal static SVG chart writer (no plotting dependency).

Renders a metric table as a strip chart: one vertical band per metric, each
metric normalized to its own min-max range across models, one polyline with
markers per model, and a legend. Output is plain SVG markup built by string
concatenation, deterministic for identical inputs.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_WIDTH = 720
_HEIGHT = 360
_MARGIN_LEFT = 50
_MARGIN_RIGHT = 150
_MARGIN_TOP = 40
_MARGIN_BOTTOM = 50


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def _normalise(column: list[float]) -> list[float]:
    lo, hi = min(column), max(column)
    if hi - lo == 0:
        return [0.5] * len(column)
    return [(v - lo) / (hi - lo) for v in column]


def metric_strip_chart(
    columns: list[str],
    row_labels: list[str],
    values,
    title: str = "",
) -> str:
    """SVG strip chart of a (rows x columns) table of metric values.

    Each column is scaled to its own range so differently scaled metrics
    share one canvas; the raw min and max are annotated under each band.
    """
    n_rows = len(row_labels)
    n_cols = len(columns)
    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM
    xs = [
        _MARGIN_LEFT + plot_w * (j + 0.5) / n_cols
        for j in range(n_cols)
    ]

    def y_of(frac: float) -> float:
        return _MARGIN_TOP + plot_h * (1.0 - frac)

    cols = [[float(values[i][j]) for i in range(n_rows)] for j in range(n_cols)]
    scaled = [_normalise(c) for c in cols]

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_WIDTH / 2:.1f}" y="22" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{escape(title)}</text>'
        )

    axis = (
        f'<line x1="{_MARGIN_LEFT}" y1="{y_of(0.0):.1f}" '
        f'x2="{_WIDTH - _MARGIN_RIGHT}" y2="{y_of(0.0):.1f}" '
        'stroke="#333" stroke-width="1"/>'
    )
    parts.append(axis)
    for j, name in enumerate(columns):
        parts.append(
            f'<line x1="{xs[j]:.1f}" y1="{y_of(0.0):.1f}" x2="{xs[j]:.1f}" '
            f'y2="{y_of(1.0):.1f}" stroke="#ccc" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{xs[j]:.1f}" y="{y_of(0.0) + 16:.1f}" '
            'text-anchor="middle" font-family="sans-serif" font-size="11">'
            f"{escape(name)}</text>"
        )
        parts.append(
            f'<text x="{xs[j]:.1f}" y="{y_of(0.0) + 30:.1f}" '
            'text-anchor="middle" font-family="sans-serif" font-size="9" '
            f'fill="#666">{escape(_fmt(min(cols[j])))}'
            f" .. {escape(_fmt(max(cols[j])))}</text>"
        )

    for i, label in enumerate(row_labels):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(
            f"{xs[j]:.1f},{y_of(scaled[j][i]):.1f}" for j in range(n_cols)
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            'stroke-width="1.5"/>'
        )
        for j in range(n_cols):
            parts.append(
                f'<circle cx="{xs[j]:.1f}" cy="{y_of(scaled[j][i]):.1f}" '
                f'r="3" fill="{color}"/>'
            )
        ly = _MARGIN_TOP + 14 * (i + 1)
        lx = _WIDTH - _MARGIN_RIGHT + 16
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{lx + 24}" y="{ly}" font-family="sans-serif" '
            f'font-size="11">{escape(label)}</text>'
        )

    parts.append(
        f'<text x="14" y="{y_of(0.5):.1f}" text-anchor="middle" '
        'font-family="sans-serif" font-size="11" '
        f'transform="rotate(-90 14 {y_of(0.5):.1f})">scaled value'
        "</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


__all__ = ["metric_strip_chart"]
