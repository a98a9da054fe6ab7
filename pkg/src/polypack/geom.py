"""Exact-tolerance planar geometry: polygon normalization, signed areas,
directional extremal chords, and direct similarities.

Tolerances are absolute after rescaling the input to diameter 2, so all
predicates are scale free.  A polygon of diameter D uses the length
tolerance ``tol_geom * D / 2`` and the area tolerance ``tol_geom * (D/2)**2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import DegenerateInput, NonConvexInput

TOL_GEOM = 1e-10


def vec(x: float, y: float) -> np.ndarray:
    return np.array([float(x), float(y)])


def cross(a, b) -> float:
    """z-component of the 2D cross product a x b."""
    return float(a[0] * b[1] - a[1] * b[0])


def unit(v) -> np.ndarray:
    n = float(np.hypot(v[0], v[1]))
    if n == 0.0:
        raise DegenerateInput("zero-length direction")
    return np.asarray(v, dtype=float) / n


def signed_area(a, b, c) -> float:
    """Signed area of the oriented triangle abc; positive iff counterclockwise."""
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


@dataclass(frozen=True)
class EdgeOrVertexRef:
    """Boundary location: a vertex, or a point strictly inside an edge.

    Edge i joins vertex i to vertex i+1 (mod n); ``t`` is the position along
    that edge in (0, 1).  For vertices ``t`` is 0.
    """

    kind: str  # "vertex" | "edge"
    index: int
    t: float = 0.0

    @property
    def is_vertex(self) -> bool:
        return self.kind == "vertex"


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon with counterclockwise vertices."""

    vertices: np.ndarray  # (n, 2)
    area: float
    diameter: float

    def __post_init__(self):
        self.vertices.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def tol(self) -> float:
        """Absolute length tolerance for this polygon (scale free)."""
        return TOL_GEOM * self.diameter / 2.0

    def vertex(self, i: int) -> np.ndarray:
        return self.vertices[i % self.n]

    def edge(self, i: int) -> Tuple[np.ndarray, np.ndarray]:
        return self.vertices[i % self.n], self.vertices[(i + 1) % self.n]

    def edge_dir(self, i: int) -> np.ndarray:
        a, b = self.edge(i)
        return unit(b - a)

    def edge_angle(self, i: int) -> float:
        a, b = self.edge(i)
        return float(np.arctan2(b[1] - a[1], b[0] - a[0]))

    def point_at(self, ref: EdgeOrVertexRef) -> np.ndarray:
        if ref.is_vertex:
            return self.vertex(ref.index)
        a, b = self.edge(ref.index)
        return a + ref.t * (b - a)

    def contains(self, p, slack: float = 0.0) -> bool:
        """True if p lies in the polygon, allowing boundary slack."""
        for i in range(self.n):
            a, b = self.edge(i)
            if cross(b - a, p - a) < -(self.tol + slack * self.diameter):
                return False
        return True


def _pairwise_diameter(pts: np.ndarray) -> float:
    d2 = np.sum((pts[:, None, :] - pts[None, :, :]) ** 2, axis=-1)
    return float(np.sqrt(d2.max()))


def _shoelace(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def normalize_polygon(raw: Sequence, tol_geom: float = TOL_GEOM) -> ConvexPolygon:
    """Validate and canonicalize a convex polygon.

    Accepts vertices in either orientation, removes duplicate and collinear
    vertices, and returns a CCW polygon starting at the lexicographically
    smallest vertex.  Raises NonConvexInput for reflex turns beyond tolerance
    and DegenerateInput when fewer than three independent vertices remain.
    """
    pts = np.asarray(raw, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise DegenerateInput("need at least 3 points of dimension 2")
    if not np.all(np.isfinite(pts)):
        raise DegenerateInput("non-finite coordinates")

    diam = _pairwise_diameter(pts)
    if diam <= 0.0:
        raise DegenerateInput("all points coincide")
    half = diam / 2.0
    area_tol = tol_geom * half * half

    if _shoelace(pts) < 0:
        pts = pts[::-1].copy()

    # Drop exact/near duplicates first, then collinear vertices.
    keep = [pts[0]]
    for p in pts[1:]:
        if np.hypot(*(p - keep[-1])) > tol_geom * half:
            keep.append(p)
    if len(keep) > 1 and np.hypot(*(keep[0] - keep[-1])) <= tol_geom * half:
        keep.pop()
    pts = np.array(keep)
    if len(pts) < 3:
        raise DegenerateInput("fewer than 3 distinct vertices")

    changed = True
    while changed:
        changed = False
        n = len(pts)
        if n < 3:
            raise DegenerateInput("polygon collapsed during normalization")
        drop = []
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            s = signed_area(a, b, c)
            if s < -area_tol:
                raise NonConvexInput(f"reflex turn at vertex {i}: signed area {s:g}")
            if abs(s) <= area_tol:
                drop.append(i)
                changed = True
        if drop:
            pts = np.delete(pts, drop, axis=0)

    if len(pts) < 3:
        raise DegenerateInput("polygon has no area")
    area = _shoelace(pts)
    if area <= area_tol:
        raise DegenerateInput(f"polygon area {area:g} below tolerance")

    start = int(np.lexsort((pts[:, 1], pts[:, 0]))[0])
    pts = np.roll(pts, -start, axis=0)
    return ConvexPolygon(vertices=pts, area=area, diameter=_pairwise_diameter(pts))


def regular_polygon(n: int, circumradius: float = 1.0) -> ConvexPolygon:
    """Regular n-gon with one vertex at (r, 0)."""
    if n < 3:
        raise DegenerateInput("regular polygon needs n >= 3")
    ang = 2.0 * np.pi * np.arange(n) / n
    pts = circumradius * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    return normalize_polygon(pts)


def support_of_point(P: ConvexPolygon, p, tol: Optional[float] = None) -> EdgeOrVertexRef:
    """Locate a boundary point as a vertex or an edge-interior reference."""
    tol = P.tol if tol is None else tol
    p = np.asarray(p, dtype=float)
    d2 = np.sum((P.vertices - p) ** 2, axis=1)
    i = int(np.argmin(d2))
    if d2[i] <= tol * tol:
        return EdgeOrVertexRef("vertex", i)
    for e in range(P.n):
        a, b = P.edge(e)
        ab = b - a
        L = float(np.hypot(*ab))
        t = float(np.dot(p - a, ab)) / (L * L)
        if -tol / L < t < 1 + tol / L and abs(cross(ab / L, p - a)) <= tol:
            t = min(max(t, 0.0), 1.0)
            return EdgeOrVertexRef("edge", e, t)
    raise DegenerateInput(f"point {p} is not on the polygon boundary")


@dataclass(frozen=True)
class Chord:
    """Segment with both endpoints on the polygon boundary."""

    a: np.ndarray
    b: np.ndarray
    support_a: EdgeOrVertexRef
    support_b: EdgeOrVertexRef
    length: float
    family: Optional[Tuple["Chord", "Chord"]] = None  # extremes when non-unique

    @property
    def non_unique(self) -> bool:
        return self.family is not None


def _clip_line(P: ConvexPolygon, q, d, tol: float):
    """Parameter interval [t0, t1] of the line q + t*d inside the polygon."""
    t0, t1 = -np.inf, np.inf
    for i in range(P.n):
        a, b = P.edge(i)
        e = b - a
        nrm = np.array([-e[1], e[0]])  # inward normal (CCW polygon)
        nl = float(np.hypot(*nrm))
        den = float(np.dot(nrm, d))
        num = float(np.dot(nrm, a - q))
        if abs(den) <= 1e-16 * nl:
            if num > tol * nl:
                return None
            continue
        t = num / den
        if den > 0:
            t0 = max(t0, t)
        else:
            t1 = min(t1, t)
    if t0 > t1 + tol:
        return None
    return t0, t1


def longest_chord(P: ConvexPolygon, direction) -> Chord:
    """Longest chord of P parallel to ``direction`` (an extremal chord).

    The maximum is always attained by a chord through a vertex, so a scan of
    vertex-anchored chords is exhaustive.  When two parallel edges support a
    sliding family of equally long chords, the two extreme representatives
    are attached as ``family`` and one of them is returned.
    """
    d = unit(direction)
    tol = P.tol
    lengths = np.empty(P.n)
    spans = []
    for i in range(P.n):
        iv = _clip_line(P, P.vertices[i], d, tol)
        if iv is None:
            lengths[i] = -1.0
            spans.append(None)
            continue
        lengths[i] = iv[1] - iv[0]
        spans.append(iv)
    L = float(lengths.max())
    if L <= tol:
        raise DegenerateInput("polygon has no extent in this direction")
    cands = [i for i in range(P.n) if lengths[i] >= L - tol]

    def make(i) -> Tuple[float, np.ndarray, np.ndarray]:
        t0, t1 = spans[i]
        a = P.vertices[i] + t0 * d
        b = P.vertices[i] + t1 * d
        tau = cross(d, P.vertices[i])
        return tau, a, b

    reps = sorted((make(i) for i in cands), key=lambda r: r[0])
    tau_lo, a_lo, b_lo = reps[0]
    tau_hi, a_hi, b_hi = reps[-1]

    def chord_of(a, b, family=None) -> Chord:
        return Chord(a=a.copy(), b=b.copy(),
                     support_a=support_of_point(P, a),
                     support_b=support_of_point(P, b),
                     length=float(np.hypot(*(b - a))), family=family)

    if tau_hi - tau_lo <= tol:
        return chord_of(a_lo, b_lo)
    fam = (chord_of(a_lo, b_lo), chord_of(a_hi, b_hi))
    return chord_of(a_lo, b_lo, family=fam)


@dataclass(frozen=True)
class SimilarityTransform:
    """Direct similarity x -> M x + offset with M = s * rotation."""

    matrix: np.ndarray  # (2, 2)
    offset: np.ndarray  # (2,)

    def __post_init__(self):
        self.matrix.setflags(write=False)
        self.offset.setflags(write=False)

    @property
    def scale(self) -> float:
        return float(np.sqrt(abs(np.linalg.det(self.matrix))))

    def apply(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        return pts @ self.matrix.T + self.offset

    def apply_vector(self, v) -> np.ndarray:
        return np.asarray(v, dtype=float) @ self.matrix.T

    def inverse(self) -> "SimilarityTransform":
        M = np.linalg.inv(self.matrix)
        return SimilarityTransform(matrix=M, offset=-M @ self.offset)


def polygon_area(pts) -> float:
    """Signed area of a closed polygon given as an (n, 2) vertex array."""
    pts = np.asarray(pts, dtype=float)
    if len(pts) < 3:
        return 0.0
    return _shoelace(pts)


def convex_clip(subject, clipper) -> np.ndarray:
    """Intersection of a polygon with a convex CCW clipper (Sutherland-Hodgman)."""
    out = [np.asarray(p, dtype=float) for p in subject]
    clipper = np.asarray(clipper, dtype=float)
    m = len(clipper)
    for i in range(m):
        if not out:
            break
        a = clipper[i]
        b = clipper[(i + 1) % m]
        e = b - a
        inp = out
        out = []
        prev = inp[-1]
        prev_in = cross(e, prev - a) >= 0.0
        for cur in inp:
            cur_in = cross(e, cur - a) >= 0.0
            if cur_in != prev_in:
                denom = cross(e, cur - prev)
                t = cross(e, a - prev) / denom if abs(denom) > 1e-300 else 0.0
                out.append(prev + t * (cur - prev))
            if cur_in:
                out.append(cur)
            prev, prev_in = cur, cur_in
    return np.array(out) if out else np.zeros((0, 2))


def similarity_to_canonical(p1, p4, tol: float = TOL_GEOM) -> SimilarityTransform:
    """Direct similarity mapping p1 -> (1, 0) and p4 -> (-1, 0)."""
    p1 = np.asarray(p1, float)
    p4 = np.asarray(p4, float)
    h = (p1 - p4) / 2.0
    n2 = float(h[0] * h[0] + h[1] * h[1])
    if np.sqrt(n2) < tol * max(1.0, np.hypot(*p1)):
        raise DegenerateInput("coincident anchor points")
    M = np.array([[h[0], h[1]], [-h[1], h[0]]]) / n2
    mid = (p1 + p4) / 2.0
    return SimilarityTransform(matrix=M, offset=-M @ mid)
