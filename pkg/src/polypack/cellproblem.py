"""The nine-contact cell problem of a double-lattice packing.

The primitive honeycomb cell is surrounded by four bodies: the reference
copy (0), its translate across the diameter (1, held fixed), and the two
point-reflected copies (2 and 6).  Their placements are perturbed as
``Tran(x_i, y_i) o xi_i o Rot(theta_i)`` with z = (x0, y0, t0, x2, y2, t2,
x6, y6, t6).  Each contact contributes signed-area disjointness constraints;
the objective is the cell (quadrilateral) area change.

Signed areas enter all functions in doubled form (the raw cross product),
which keeps the closed-form dual identities free of half factors.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DegenerateInput,
    ExceptionalConfiguration,
    PivotalConfiguration,
    VertexCoincidence,
)
from .geom import ConvexPolygon, cross, longest_chord
from .sweep import MinimizerClassification, ParallelogramConfig, classify, config_from_points

# labels of the four cell bodies and the directed cell-edge cycle; each cell
# edge crosses exactly one contact, located at the labeled point given by the
# 0-based index into cfg.points
CELL_BODIES = (0, 1, 2, 6)
_CONTACT_CYCLE = ((0, 2, 1), (2, 1, 2), (1, 6, 4), (6, 0, 5))

Z_VARIABLES = ("x0", "y0", "theta0", "x2", "y2", "theta2", "x6", "y6", "theta6")


@dataclass(frozen=True)
class Contact:
    """One signed-area constraint row of the cell problem."""

    row: int                  # 1..9
    bodies: Tuple[int, int]   # (edge body, other body)
    kind: str                 # "edge_edge" | "vertex_edge" | "edge_edge_relaxed"
    label: int                # labeled point 2..6 the contact sits at
    point: np.ndarray         # touch point in the reference frame
    edge_dir: np.ndarray      # unit vector along the supporting edge (ccw)
    half_length: float

    def __post_init__(self):
        self.point.setflags(write=False)
        self.edge_dir.setflags(write=False)


def prepare_reference(P: ConvexPolygon, cfg: ParallelogramConfig) -> ParallelogramConfig:
    """Normalize a minimizer for certification.

    Relabels the diameter endpoints so a vertex endpoint carries the p1
    label, and replaces a non-unique extremal chord by the midpoint of its
    sliding family so both endpoints lie in edge interiors (the associated
    contact constraint is then the relaxed edge-to-edge form).
    """
    ch = longest_chord(P, cfg.p1 - cfg.p4)
    pts = cfg.points.copy()
    if ch.family is not None:
        d = cfg.p1 - cfg.p4
        ends = []
        for c in ch.family:
            fwd, bwd = (c.b, c.a) if float(np.dot(c.b - c.a, d)) >= 0 else (c.a, c.b)
            ends.append((fwd, bwd))
        pts[0] = (ends[0][0] + ends[1][0]) / 2.0
        pts[3] = (ends[0][1] + ends[1][1]) / 2.0
        cfg = config_from_points(P, pts)
    if not cfg.supports[0].is_vertex and cfg.supports[3].is_vertex:
        cfg = cfg.relabeled(P)
    return cfg


def contact_list(P: ConvexPolygon, cfg: ParallelogramConfig,
                 classification: Optional[MinimizerClassification] = None) -> List[Contact]:
    """The nine contacts of the primitive cell, gated on degeneracies.

    Requires a prepared configuration (see prepare_reference): the four
    parallelogram vertices in edge interiors and the second diameter endpoint
    not at a polygon vertex.
    """
    cls = classification if classification is not None else classify(P, cfg)
    if cls.exceptional == "type_i":
        raise ExceptionalConfiguration("type_i")
    if cls.exceptional == "type_ii":
        raise ExceptionalConfiguration("type_ii")
    if cls.is_pivotal:
        raise PivotalConfiguration("minimizer sits at a parameterization breakpoint")
    for i in (1, 2, 4, 5):
        if cfg.supports[i].is_vertex:
            raise VertexCoincidence(i + 1)
    if cfg.supports[3].is_vertex:
        raise VertexCoincidence(4)

    contacts: List[Contact] = []
    row = 1
    for bfrom, bto, idx in _CONTACT_CYCLE:
        l = float(cfg.half_lengths[idx])
        if l <= P.tol:
            raise VertexCoincidence(idx + 1)
        for bodies in ((bfrom, bto), (bto, bfrom)):
            contacts.append(Contact(
                row=row, bodies=bodies, kind="edge_edge", label=idx + 1,
                point=cfg.points[idx].copy(), edge_dir=cfg.v_dirs[idx].copy(),
                half_length=l))
            row += 1
    l4 = float(cfg.half_lengths[3])
    if l4 <= P.tol:
        raise VertexCoincidence(4)
    kind = "vertex_edge" if cls.diameter_unique else "edge_edge_relaxed"
    contacts.append(Contact(
        row=9, bodies=(1, 0), kind=kind, label=4,
        point=cfg.p4.copy(), edge_dir=cfg.v_dirs[3].copy(), half_length=l4))
    return contacts


@dataclass(frozen=True)
class _Body:
    kind: str                  # "id" | "tr" | "ref"
    param: np.ndarray          # translation vector / reflection center
    zoff: Optional[int]        # start of (x, y, theta) block, None if fixed

    def place(self, x: np.ndarray, z: np.ndarray) -> np.ndarray:
        if self.kind == "tr":
            return x + self.param
        dx, dy, th = z[self.zoff:self.zoff + 3]
        ct, st = np.cos(th), np.sin(th)
        xr = np.array([ct * x[0] - st * x[1], st * x[0] + ct * x[1]])
        if self.kind == "id":
            return xr + np.array([dx, dy])
        return 2.0 * self.param - xr + np.array([dx, dy])

    def place_many(self, x: np.ndarray, Z: np.ndarray) -> np.ndarray:
        if self.kind == "tr":
            return np.broadcast_to(x + self.param, (len(Z), 2)).copy()
        dx = Z[:, self.zoff]
        dy = Z[:, self.zoff + 1]
        th = Z[:, self.zoff + 2]
        ct, st = np.cos(th), np.sin(th)
        xr = np.stack([ct * x[0] - st * x[1], st * x[0] + ct * x[1]], axis=1)
        t = np.stack([dx, dy], axis=1)
        if self.kind == "id":
            return xr + t
        return 2.0 * self.param - xr + t

    def dcols(self, x: np.ndarray) -> Optional[np.ndarray]:
        """d place(x) / d(x_i, y_i, theta_i) at z = 0, as a (2, 3) block."""
        if self.kind == "tr":
            return None
        s = 1.0 if self.kind == "id" else -1.0
        return np.array([[1.0, 0.0, -s * x[1]], [0.0, 1.0, s * x[0]]])


def _grad_triple(out: np.ndarray, b1: _Body, x1, b2: _Body, x2, b3: _Body, x3,
                 scale: float = 1.0) -> None:
    """Accumulate the z-gradient of cross(P2 - P1, P3 - P1) into ``out``."""
    z0 = np.zeros(9)
    P1, P2, P3 = b1.place(x1, z0), b2.place(x2, z0), b3.place(x3, z0)
    u = P2 - P1
    v = P3 - P1
    for body, x, sgn_u, sgn_v in ((b1, x1, -1.0, -1.0), (b2, x2, 1.0, 0.0),
                                  (b3, x3, 0.0, 1.0)):
        cols = body.dcols(x)
        if cols is None:
            continue
        for k in range(3):
            d = cols[:, k]
            out[body.zoff + k] += scale * (sgn_u * cross(d, v) + sgn_v * cross(u, d))


@dataclass(frozen=True, eq=False)
class CellFunctions:
    """Exact evaluators for the cell-area objective and the nine constraints."""

    bodies: Dict[int, _Body]
    rows: Tuple[Tuple[int, np.ndarray, np.ndarray, int, np.ndarray, float], ...]
    f_reference: float
    extent: str
    normalized: bool

    def placements(self, z) -> Dict[int, Tuple[np.ndarray, np.ndarray]]:
        """Placement of each body as (rotation-part matrix, offset) pairs."""
        z = np.asarray(z, dtype=float)
        out = {}
        for label, b in self.bodies.items():
            e1 = b.place(np.array([1.0, 0.0]), z) - b.place(np.zeros(2), z)
            e2 = b.place(np.array([0.0, 1.0]), z) - b.place(np.zeros(2), z)
            out[label] = (np.column_stack([e1, e2]), b.place(np.zeros(2), z))
        return out

    def g(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        vals = np.empty(9)
        for r, (bi, A, B, bj, C, norm) in enumerate(self.rows):
            a = self.bodies[bi].place(A, z)
            b = self.bodies[bi].place(B, z)
            c = self.bodies[bj].place(C, z)
            vals[r] = cross(b - a, c - a) / norm
        return vals

    def g_many(self, Z: np.ndarray) -> np.ndarray:
        Z = np.asarray(Z, dtype=float)
        vals = np.empty((len(Z), 9))
        for r, (bi, A, B, bj, C, norm) in enumerate(self.rows):
            a = self.bodies[bi].place_many(A, Z)
            b = self.bodies[bi].place_many(B, Z)
            c = self.bodies[bj].place_many(C, Z)
            u = b - a
            v = c - a
            vals[:, r] = (u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]) / norm
        return vals

    def _cell_area_doubled(self, z) -> float:
        z = np.asarray(z, dtype=float)
        o = np.zeros(2)
        P0 = self.bodies[0].place(o, z)
        P1 = self.bodies[1].place(o, z)
        P2 = self.bodies[2].place(o, z)
        P6 = self.bodies[6].place(o, z)
        return cross(P1 - P0, P2 - P0) + cross(P6 - P0, P1 - P0)

    def f(self, z) -> float:
        return self._cell_area_doubled(z) - self.f_reference

    def f_many(self, Z: np.ndarray) -> np.ndarray:
        Z = np.asarray(Z, dtype=float)
        o = np.zeros(2)
        P0 = self.bodies[0].place_many(o, Z)
        P1 = self.bodies[1].place_many(o, Z)
        P2 = self.bodies[2].place_many(o, Z)
        P6 = self.bodies[6].place_many(o, Z)

        def crs(u, v):
            return u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]

        return crs(P1 - P0, P2 - P0) + crs(P6 - P0, P1 - P0) - self.f_reference


def _cell_bodies(cfg: ParallelogramConfig) -> Dict[int, _Body]:
    return {
        0: _Body("id", np.zeros(2), 0),
        1: _Body("tr", (cfg.p1 - cfg.p4).copy(), None),
        2: _Body("ref", cfg.p2.copy(), 3),
        6: _Body("ref", cfg.p6.copy(), 6),
    }


def cell_functions_from_triples(cfg: ParallelogramConfig, triples,
                                normalized: bool = False) -> CellFunctions:
    """Cell problem from explicit signed-area anchor points.

    Each triple is (edge body label, A, B, other body label, C[, norm]):
    the constraint is the doubled signed area of (body(A), body(B),
    other(C)), optionally divided by ``norm``.
    """
    bodies = _cell_bodies(cfg)
    rows = []
    for t in triples:
        if len(t) == 5:
            bi, A, B, bj, C = t
            norm = 1.0
        else:
            bi, A, B, bj, C, norm = t
        rows.append((bi, np.asarray(A, float), np.asarray(B, float),
                     bj, np.asarray(C, float), float(norm)))
    cf = CellFunctions(bodies=bodies, rows=tuple(rows), f_reference=0.0,
                       extent="custom", normalized=normalized)
    ref = cf._cell_area_doubled(np.zeros(9))
    return CellFunctions(bodies=bodies, rows=tuple(rows), f_reference=ref,
                         extent="custom", normalized=normalized)


def build_cell_functions(P: ConvexPolygon, cfg: ParallelogramConfig,
                         contacts: Sequence[Contact], extent: str = "contact",
                         normalized: bool = True) -> CellFunctions:
    """Assemble the cell problem around a reference configuration.

    ``extent="contact"`` anchors each constraint at the endpoints of the
    contact subinterval (the certificate form); ``extent="edge"`` uses the
    full polygon edge through the contact, which reproduces the whole-edge
    constraints natural for the regular pentagon and heptagon.  ``normalized``
    divides each constraint by the squared contact half-length.
    """
    if extent not in ("contact", "edge"):
        raise ValueError("extent must be 'contact' or 'edge'")
    bodies = _cell_bodies(cfg)
    by_row = {c.row: c for c in contacts}
    if sorted(by_row) != list(range(1, 10)):
        raise ValueError("expected contact rows 1..9")

    def edge_points(c: Contact):
        ref = None
        for i in range(6):
            if np.allclose(cfg.points[i], c.point):
                ref = cfg.supports[i]
                break
        if ref is None or ref.is_vertex:
            raise DegenerateInput("contact point not in an edge interior")
        a, b = P.edge(ref.index)
        return b.copy(), a.copy()  # (forward, backward) along the boundary

    rows = []
    for r in range(1, 10):
        c = by_row[r]
        norm = c.half_length ** 2 if normalized else 1.0
        if r == 9:
            if extent == "contact":
                A = c.point + c.half_length * c.edge_dir
                B = c.point - c.half_length * c.edge_dir
            else:
                A, B = edge_points(c)
            C = cfg.p1.copy()
        elif extent == "contact":
            A = c.point + c.half_length * c.edge_dir
            B = c.point - c.half_length * c.edge_dir
            C = A.copy()
        else:
            A, B = edge_points(c)
            lab = c.label - 1
            sign = 1.0 if cfg.contact_ccw[lab] else -1.0
            C = c.point + sign * c.half_length * c.edge_dir
        rows.append((c.bodies[0], A, B, c.bodies[1], C, norm))

    cf = CellFunctions(bodies=bodies, rows=tuple(rows), f_reference=0.0,
                       extent=extent, normalized=normalized)
    ref = cf._cell_area_doubled(np.zeros(9))
    return CellFunctions(bodies=bodies, rows=tuple(rows), f_reference=ref,
                         extent=extent, normalized=normalized)


@dataclass(frozen=True)
class LinearizedProblem:
    """First-order model at z = 0: rows of G are constraint gradients."""

    G: np.ndarray             # (9, 9)
    c: np.ndarray             # (9,)
    fd_residual: float        # max |analytic - central difference|

    def __post_init__(self):
        self.G.setflags(write=False)
        self.c.setflags(write=False)


def linearize(cellfns: CellFunctions, fd_step: float = 1e-6,
              fd_tol: float = 1e-6) -> LinearizedProblem:
    """Analytic Jacobian and objective gradient, cross-checked by differences."""
    G = np.zeros((9, 9))
    for r, (bi, A, B, bj, C, norm) in enumerate(cellfns.rows):
        _grad_triple(G[r], cellfns.bodies[bi], A, cellfns.bodies[bi], B,
                     cellfns.bodies[bj], C, scale=1.0 / norm)

    c = np.zeros(9)
    o = np.zeros(2)
    b0, b1, b2, b6 = (cellfns.bodies[k] for k in (0, 1, 2, 6))
    _grad_triple(c, b0, o, b1, o, b2, o)
    _grad_triple(c, b0, o, b6, o, b1, o)

    # central-difference cross-check
    fd_err = 0.0
    for k in range(9):
        zp = np.zeros(9)
        zp[k] = fd_step
        zm = -zp
        col = (cellfns.g(zp) - cellfns.g(zm)) / (2 * fd_step)
        fd_err = max(fd_err, float(np.abs(col - G[:, k]).max()))
        fc = (cellfns.f(zp) - cellfns.f(zm)) / (2 * fd_step)
        fd_err = max(fd_err, abs(fc - c[k]))
    if fd_err > fd_tol:
        raise DegenerateInput(f"analytic/difference Jacobian mismatch {fd_err:g}")
    return LinearizedProblem(G=G, c=c, fd_residual=fd_err)
