"""Deterministic SVG rendering of a double-lattice packing window."""
from __future__ import annotations

from typing import Optional

import numpy as np

from .geom import ConvexPolygon
from .lattice import DoubleLattice, PackingWindow, enumerate_packing
from .sweep import ParallelogramConfig


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _path(pts) -> str:
    coords = " L ".join(f"{_fmt(p[0])} {_fmt(p[1])}" for p in pts)
    return f"M {coords} Z"


def render_svg(P: ConvexPolygon, dl: DoubleLattice, window: float,
               cfg: Optional[ParallelogramConfig] = None,
               packing: Optional[PackingWindow] = None) -> str:
    """Packing picture over a square window of ``window`` diameters.

    Copies of the polygon, the generating half-length parallelogram, its
    extremal chord, and the primitive honeycomb cell are drawn in the input
    coordinate frame (y axis up, declared via the root transform).
    """
    half = max(window, 0.0) * P.diameter / 2.0
    bounds = (-half, -half, half, half)
    if packing is None:
        if half > 0:
            packing = enumerate_packing(P, dl, bounds)
        else:
            from .lattice import Isometry2
            packing = PackingWindow(placements=(Isometry2.identity(),),
                                    bounds=bounds)
    pad = 0.05 * P.diameter + half
    stroke = 0.004 * P.diameter
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(-pad)} {_fmt(-pad)} '
        f'{_fmt(2 * pad)} {_fmt(2 * pad)}">',
        '<g transform="scale(1,-1)">',
    ]
    for iso in packing.placements:
        pts = iso.apply(P.vertices)
        fill = "#cfd8dc" if iso.is_point_reflection else "#eceff1"
        lines.append(f'<path d="{_path(pts)}" fill="{fill}" stroke="#455a64" '
                     f'stroke-width="{_fmt(stroke)}"/>')
    if cfg is not None:
        quad = np.array([cfg.p2, cfg.p3, cfg.p5, cfg.p6])
        lines.append(f'<path d="{_path(quad)}" fill="none" stroke="#d81b60" '
                     f'stroke-width="{_fmt(2 * stroke)}"/>')
        lines.append(f'<path d="M {_fmt(cfg.p1[0])} {_fmt(cfg.p1[1])} '
                     f'L {_fmt(cfg.p4[0])} {_fmt(cfg.p4[1])}" fill="none" '
                     f'stroke="#1e88e5" stroke-width="{_fmt(2 * stroke)}"/>')
        cell = np.array([[0.0, 0.0], 2 * cfg.p6, cfg.p1 - cfg.p4, 2 * cfg.p2])
        lines.append(f'<path d="{_path(cell)}" fill="none" stroke="#43a047" '
                     f'stroke-width="{_fmt(2 * stroke)}" stroke-dasharray='
                     f'"{_fmt(4 * stroke)} {_fmt(3 * stroke)}"/>')
    lines.append('</g>')
    lines.append('</svg>')
    return "\n".join(lines) + "\n"
