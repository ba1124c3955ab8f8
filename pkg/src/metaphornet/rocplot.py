"""Dependency-free SVG rendering of a ROC curve (timestamp-free output)."""

from __future__ import annotations

import math
from pathlib import Path

_SIZE = 480
_MARGIN = 48


def _sx(fpr: float) -> float:
    return _MARGIN + fpr * (_SIZE - 2 * _MARGIN)


def _sy(tpr: float) -> float:
    return _SIZE - _MARGIN - tpr * (_SIZE - 2 * _MARGIN)


def write_roc_svg(points, auc: float, path) -> None:
    """Render ROC points (any objects with .fpr/.tpr) on a unit square."""
    coords = " ".join(
        f"{_sx(p.fpr):.2f},{_sy(p.tpr):.2f}" for p in points if math.isfinite(p.fpr)
    )
    ticks = []
    for v in (0.0, 0.5, 1.0):
        ticks.append(
            f'<text x="{_sx(v):.2f}" y="{_SIZE - _MARGIN + 18}" font-size="11" '
            f'text-anchor="middle">{v:.1f}</text>'
        )
        ticks.append(
            f'<text x="{_MARGIN - 8}" y="{_sy(v) + 4:.2f}" font-size="11" '
            f'text-anchor="end">{v:.1f}</text>'
        )
    svg = f"""<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" height="{_SIZE}" viewBox="0 0 {_SIZE} {_SIZE}">
  <rect width="{_SIZE}" height="{_SIZE}" fill="white"/>
  <text x="{_SIZE / 2}" y="24" font-size="14" text-anchor="middle">ROC (AUC={auc:.3f})</text>
  <rect x="{_MARGIN}" y="{_MARGIN}" width="{_SIZE - 2 * _MARGIN}" height="{_SIZE - 2 * _MARGIN}"
        fill="none" stroke="black" stroke-width="1"/>
  <line x1="{_sx(0):.2f}" y1="{_sy(0):.2f}" x2="{_sx(1):.2f}" y2="{_sy(1):.2f}"
        stroke="gray" stroke-dasharray="4 4" stroke-width="1"/>
  <polyline points="{coords}" fill="none" stroke="crimson" stroke-width="2"/>
  {''.join(ticks)}
  <text x="{_SIZE / 2}" y="{_SIZE - 12}" font-size="12" text-anchor="middle">false positive rate</text>
  <text x="16" y="{_SIZE / 2}" font-size="12" text-anchor="middle"
        transform="rotate(-90 16 {_SIZE / 2})">true positive rate</text>
</svg>
"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg, encoding="utf-8")
