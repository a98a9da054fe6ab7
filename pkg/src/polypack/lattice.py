"""Double lattices generated by a half-length parallelogram: packing
construction, density, window enumeration, and admissibility checking.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DegenerateInput
from .geom import TOL_GEOM, ConvexPolygon, convex_clip, cross, polygon_area
from .sweep import ParallelogramConfig


@dataclass(frozen=True)
class Isometry2:
    """Planar isometry x -> R x + t with R orthogonal (direct only here)."""

    matrix: np.ndarray  # (2, 2)
    offset: np.ndarray  # (2,)

    def __post_init__(self):
        self.matrix.setflags(write=False)
        self.offset.setflags(write=False)

    @staticmethod
    def identity() -> "Isometry2":
        return Isometry2(np.eye(2), np.zeros(2))

    @staticmethod
    def translation(v) -> "Isometry2":
        return Isometry2(np.eye(2), np.asarray(v, dtype=float).copy())

    @staticmethod
    def point_reflection(c) -> "Isometry2":
        return Isometry2(-np.eye(2), 2.0 * np.asarray(c, dtype=float))

    @staticmethod
    def rotation(theta: float, about=None) -> "Isometry2":
        ct, st = np.cos(theta), np.sin(theta)
        R = np.array([[ct, -st], [st, ct]])
        if about is None:
            return Isometry2(R, np.zeros(2))
        c = np.asarray(about, dtype=float)
        return Isometry2(R, c - R @ c)

    @property
    def is_point_reflection(self) -> bool:
        return np.allclose(self.matrix, -np.eye(2))

    def apply(self, pts) -> np.ndarray:
        return np.asarray(pts, dtype=float) @ self.matrix.T + self.offset

    def compose(self, other: "Isometry2") -> "Isometry2":
        """self o other."""
        return Isometry2(self.matrix @ other.matrix,
                         self.matrix @ other.offset + self.offset)

    def inverse(self) -> "Isometry2":
        Minv = self.matrix.T  # orthogonal
        return Isometry2(Minv.copy(), -Minv @ self.offset)


@dataclass(frozen=True)
class DoubleLattice:
    """Isometry set Lambda + Lambda*Ref(ref_center) with Lambda = <t1, t2>."""

    t1: np.ndarray
    t2: np.ndarray
    ref_center: np.ndarray    # one reflection center (the p2 vertex)
    cell_area: float          # honeycomb cell area (two bodies per |det|)

    def __post_init__(self):
        self.t1.setflags(write=False)
        self.t2.setflags(write=False)
        self.ref_center.setflags(write=False)

    def neighbors(self) -> List[Isometry2]:
        """The four placements surrounding the primitive honeycomb cell."""
        p2 = self.ref_center
        p6 = p2 - self.t2 / 2.0
        return [Isometry2.identity(),
                Isometry2.translation(self.t1),
                Isometry2.point_reflection(p2),
                Isometry2.point_reflection(p6)]

    def placement(self, i: int, j: int, reflected: bool) -> Isometry2:
        shift = Isometry2.translation(i * self.t1 + j * self.t2)
        if not reflected:
            return shift
        return shift.compose(Isometry2.point_reflection(self.ref_center))


def build_double_lattice(cfg: ParallelogramConfig) -> DoubleLattice:
    """Double lattice generated by reflections about the parallelogram vertices."""
    t1 = cfg.p1 - cfg.p4
    t2 = 2.0 * (cfg.p2 - cfg.p6)
    det = abs(cross(t1, t2))
    cell = 2.0 * cfg.area
    if det < 1e-14 or cell < 1e-14:
        raise DegenerateInput("degenerate double-lattice generators")
    if abs(det - 2.0 * cell) > 1e-9 * max(det, 1.0):
        raise DegenerateInput(
            f"generator determinant {det:g} inconsistent with cell area {cell:g}")
    return DoubleLattice(t1=t1.copy(), t2=t2.copy(),
                         ref_center=cfg.p2.copy(), cell_area=cell)


def density(P: ConvexPolygon, cfg: ParallelogramConfig) -> float:
    """Packing fraction of the double-lattice packing generated by cfg."""
    return P.area / (2.0 * cfg.area)


@dataclass(frozen=True)
class PackingWindow:
    placements: Tuple[Isometry2, ...]
    bounds: Tuple[float, float, float, float]  # xmin, ymin, xmax, ymax


def _index_ranges(dl: DoubleLattice, lo, hi, margin: float):
    M = np.column_stack([dl.t1, dl.t2])
    Minv = np.linalg.inv(M)
    corners = np.array([[lo[0] - margin, lo[1] - margin],
                        [hi[0] + margin, lo[1] - margin],
                        [hi[0] + margin, hi[1] + margin],
                        [lo[0] - margin, hi[1] + margin]])
    ij = corners @ Minv.T
    imin, jmin = np.floor(ij.min(axis=0)).astype(int) - 1
    imax, jmax = np.ceil(ij.max(axis=0)).astype(int) + 1
    return imin, imax, jmin, jmax


def enumerate_packing(P: ConvexPolygon, dl: DoubleLattice, bounds) -> PackingWindow:
    """All double-lattice placements whose copy of P intersects the bounds."""
    xmin, ymin, xmax, ymax = (float(b) for b in bounds)
    lo = np.array([xmin, ymin])
    hi = np.array([xmax, ymax])
    box = np.array([[xmin, ymin], [xmax, ymin], [xmax, ymax], [xmin, ymax]])
    radius = float(np.max(np.hypot(P.vertices[:, 0], P.vertices[:, 1])))
    kept: List[Isometry2] = []
    for reflected in (False, True):
        anchor = 2.0 * dl.ref_center if reflected else np.zeros(2)
        imin, imax, jmin, jmax = _index_ranges(dl, lo - anchor, hi - anchor, radius)
        for i in range(imin, imax + 1):
            for j in range(jmin, jmax + 1):
                iso = dl.placement(i, j, reflected)
                center = iso.apply(np.zeros(2))
                if (center[0] < xmin - radius or center[0] > xmax + radius
                        or center[1] < ymin - radius or center[1] > ymax + radius):
                    continue
                placed = iso.apply(P.vertices)
                if len(convex_clip(placed, box)) >= 1:
                    kept.append(iso)
    return PackingWindow(placements=tuple(kept), bounds=(xmin, ymin, xmax, ymax))


def verify_admissible(P: ConvexPolygon, window: PackingWindow,
                      tol_geom: float = TOL_GEOM) -> bool:
    """Pairwise interior-disjointness of all placed copies in the window."""
    tol_area = tol_geom * P.diameter ** 2
    radius = float(np.max(np.hypot(P.vertices[:, 0], P.vertices[:, 1])))
    polys = [iso.apply(P.vertices) for iso in window.placements]
    centers = np.array([iso.apply(np.zeros(2)) for iso in window.placements])
    m = len(polys)
    for i in range(m):
        for j in range(i + 1, m):
            gap = centers[j] - centers[i]
            if float(gap @ gap) > (2 * radius + 1e-9) ** 2:
                continue
            inter = convex_clip(polys[i], polys[j])
            if len(inter) >= 3 and abs(polygon_area(inter)) > tol_area:
                return False
    return True
