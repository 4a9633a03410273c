"""Dependency-free SVG heatmaps for confusion and cost grids.

Cells darken linearly from white at 0 to black at the scale maximum:
per-row maxima for confusion counts (each target row reads on its own
scale), the global maximum for cost grids. Output is deterministic byte
for byte given identical input, which keeps it diffable in tests.
"""

from __future__ import annotations

import numpy as np

CELL = 14
MARGIN_LEFT = 46
MARGIN_TOP = 46
FONT = 9


def _shade(value: float, denom: float) -> str:
    if denom <= 0:
        frac = 0.0
    else:
        frac = min(max(value / denom, 0.0), 1.0)
    level = 255 - int(round(255 * frac))
    return f"#{level:02x}{level:02x}{level:02x}"


def svg_heatmap(grid, labels, per_row: bool = True) -> str:
    """Render a labelled square grid; per_row picks the scaling denominator."""
    grid = np.asarray(grid, dtype=np.float64)
    n = len(labels)
    width = MARGIN_LEFT + n * CELL + 1
    height = MARGIN_TOP + n * CELL + 1
    global_max = float(grid.max()) if grid.size else 0.0

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for c, label in enumerate(labels):
        x = MARGIN_LEFT + c * CELL + CELL // 2 + 3
        out.append(
            f'<text x="{x}" y="{MARGIN_TOP - 4}" font-family="monospace" '
            f'font-size="{FONT}" text-anchor="start" '
            f'transform="rotate(-60 {x} {MARGIN_TOP - 4})">{_esc(label)}</text>'
        )
    for r, label in enumerate(labels):
        y = MARGIN_TOP + r * CELL + CELL // 2 + 3
        out.append(
            f'<text x="{MARGIN_LEFT - 4}" y="{y}" font-family="monospace" '
            f'font-size="{FONT}" text-anchor="end">{_esc(label)}</text>'
        )
    for r in range(n):
        denom = float(grid[r].max()) if per_row else global_max
        for c in range(n):
            x = MARGIN_LEFT + c * CELL
            y = MARGIN_TOP + r * CELL
            fill = _shade(float(grid[r, c]), denom)
            out.append(
                f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" '
                f'fill="{fill}" stroke="#dddddd" stroke-width="0.5"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )
