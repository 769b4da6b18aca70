"""Deterministic SVG rendering of spectral persistence bar codes.

One horizontal bar per node per maximal consecutive stage run, x axis
indexed by eigenvalue stage, rows ordered by the hub ranking.  Pure text
emission; the output is byte-identical for identical input.
"""

from __future__ import annotations

from collections.abc import Mapping

from .errors import EmptyReport
from .spectral import PersistenceBars

_ROW_H = 22
_BAR_H = 10
_LEFT = 110
_CELL_W = 26
_PAD = 14


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def render_barcode_svg(
    bars: PersistenceBars, labels: Mapping[int, str] | None = None
) -> str:
    """Render persistence bars as an SVG document string."""
    if not bars.stages_present:
        raise EmptyReport("no persistence bars to render")
    labels = labels or {}
    nodes = [n for n in bars.ranking if n in bars.stages_present]
    n_stages = max(bars.n_stages, 1)

    width = _LEFT + n_stages * _CELL_W + _PAD
    height = _PAD * 2 + len(nodes) * _ROW_H + 24
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        '<style>text{font-family:monospace;font-size:11px;}</style>',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]

    axis_y = _PAD + len(nodes) * _ROW_H + 8
    for stage in range(n_stages):
        x = _LEFT + stage * _CELL_W
        out.append(
            f'<line x1="{x}" y1="{_PAD}" x2="{x}" y2="{axis_y - 6}" '
            'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{x}" y="{axis_y + 10}" text-anchor="middle" '
            f'fill="#444444">{stage}</text>'
        )

    for row, node in enumerate(nodes):
        y = _PAD + row * _ROW_H
        name = _esc(labels.get(node, str(node)))
        out.append(
            f'<text x="{_LEFT - 8}" y="{y + _BAR_H}" text-anchor="end" '
            f'fill="#000000">{name}</text>'
        )
        for start, end in bars.bars(node):
            x = _LEFT + start * _CELL_W
            w = (end - start) * _CELL_W + max(_CELL_W // 2, 6)
            out.append(
                f'<rect x="{x}" y="{y}" width="{w}" height="{_BAR_H}" '
                'fill="#2b6cb0" rx="2"/>'
            )

    out.append("</svg>")
    return "\n".join(out) + "\n"
