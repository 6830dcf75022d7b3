"""Minimal deterministic SVG scatter/curve writers for CLI outputs."""

from __future__ import annotations

import numpy as np

_PALETTE = (
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e",
    "#e6ab02", "#a6761d", "#666666",
)

_WIDTH, _HEIGHT, _MARGIN = 640, 480, 60


def _axis_range(values):
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi <= lo:
        hi = lo + 1.0
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def _to_px(x, lo, hi, size, margin, flip=False):
    frac = (x - lo) / (hi - lo)
    if flip:
        frac = 1.0 - frac
    return margin + frac * (size - 2 * margin)


def scatter_svg(points, labels=None, title: str = "") -> str:
    """Scatter plot of (x, y) points, colored by label when given."""
    pts = np.asarray(points, dtype=float)
    xlo, xhi = _axis_range(pts[:, 0])
    ylo, yhi = _axis_range(pts[:, 1])
    labels = list(labels) if labels is not None else [None] * len(pts)
    distinct = sorted({str(l) for l in labels if l is not None})
    color_of = {lab: _PALETTE[i % len(_PALETTE)] for i, lab in enumerate(distinct)}

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH // 2}" y="24" text-anchor="middle" font-size="16">{title}</text>',
        f'<line x1="{_MARGIN}" y1="{_HEIGHT - _MARGIN}" x2="{_WIDTH - _MARGIN}" '
        f'y2="{_HEIGHT - _MARGIN}" stroke="black"/>',
        f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" '
        f'y2="{_HEIGHT - _MARGIN}" stroke="black"/>',
    ]
    for (x, y), lab in zip(pts, labels):
        px = _to_px(x, xlo, xhi, _WIDTH, _MARGIN)
        py = _to_px(y, ylo, yhi, _HEIGHT, _MARGIN, flip=True)
        color = color_of.get(str(lab), "#333333") if lab is not None else "#333333"
        parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="4" fill="{color}" fill-opacity="0.7"/>')
    for i, lab in enumerate(distinct):
        ly = _MARGIN + 18 * i
        parts.append(f'<circle cx="{_WIDTH - _MARGIN - 90}" cy="{ly}" r="5" fill="{color_of[lab]}"/>')
        parts.append(f'<text x="{_WIDTH - _MARGIN - 78}" y="{ly + 4}" font-size="12">{lab}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def roc_svg(curves, title: str = "ROC") -> str:
    """Curves as polylines over the unit square; ``curves`` maps name -> (fpr, tpr, auc)."""
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH // 2}" y="24" text-anchor="middle" font-size="16">{title}</text>',
        f'<line x1="{_MARGIN}" y1="{_HEIGHT - _MARGIN}" x2="{_WIDTH - _MARGIN}" '
        f'y2="{_HEIGHT - _MARGIN}" stroke="black"/>',
        f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" '
        f'y2="{_HEIGHT - _MARGIN}" stroke="black"/>',
        f'<line x1="{_MARGIN}" y1="{_HEIGHT - _MARGIN}" x2="{_WIDTH - _MARGIN}" '
        f'y2="{_MARGIN}" stroke="#bbbbbb" stroke-dasharray="6,4"/>',
    ]
    for i, (name, (fpr, tpr, auc)) in enumerate(sorted(curves.items())):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(
            f"{_to_px(x, 0, 1, _WIDTH, _MARGIN):.2f},"
            f"{_to_px(y, 0, 1, _HEIGHT, _MARGIN, flip=True):.2f}"
            for x, y in zip(fpr, tpr)
        )
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>')
        ly = _MARGIN + 18 * i
        parts.append(f'<text x="{_WIDTH - _MARGIN - 150}" y="{ly}" font-size="12" '
                     f'fill="{color}">{name} AUC={auc:.3f}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
