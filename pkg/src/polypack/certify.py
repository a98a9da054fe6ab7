"""Local-optimality certificates for densest double-lattice packings.

The certificate checks, in the canonical frame (diameter horizontal of
length 2, bisected by the origin): rank and null vectors of the contact
Jacobian, a dual vector reproducing the objective gradient with grouped
positivity, an auxiliary balancing that makes every dual entry positive
while canceling across shared cell edges, stationarity and second-order
growth of the area profile, and a randomized perturbation oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from .cellproblem import (
    CellFunctions,
    Contact,
    LinearizedProblem,
    build_cell_functions,
    contact_list,
    linearize,
    prepare_reference,
)
from .errors import (
    DegenerateInput,
    ExceptionalConfiguration,
    GradientNotInRowSpace,
    NonConvexInput,
    PivotalConfiguration,
    RankDeficiencyUnexpected,
    SweepStall,
    VertexCoincidence,
)
from .geom import ConvexPolygon, normalize_polygon
from .lattice import density
from .sweep import (
    AreaMinimization,
    MinimizerClassification,
    ParallelogramConfig,
    _one_sided_motion,
    classify,
    config_from_points,
    minimize_area,
)

STRONGLY_EXTREME = "strongly_extreme"
EXCEPTIONAL_TYPE_I = "exceptional_type_i"
EXCEPTIONAL_TYPE_II = "exceptional_type_ii"
PIVOTAL = "pivotal"
NOT_ISOLATED = "not_isolated_minimum"
INCONCLUSIVE = "numerically_inconclusive"


@dataclass(frozen=True)
class Tolerances:
    """Certificate thresholds (canonical-frame units)."""

    tol_geom: float = 1e-10
    tol_rank: float = 1e-8       # relative, scaled by the largest singular value
    tol_pos: float = 1e-9
    tol_stat: float = 1e-8
    det_identity: float = 1e-6
    oracle_floor: float = -1e-10
    inconclusive_factor: float = 10.0

    def as_dict(self) -> Dict[str, float]:
        return {
            "tol_geom": self.tol_geom,
            "tol_rank": self.tol_rank,
            "tol_pos": self.tol_pos,
            "tol_stat": self.tol_stat,
            "det_identity": self.det_identity,
            "oracle_floor": self.oracle_floor,
            "inconclusive_factor": self.inconclusive_factor,
        }


@dataclass(frozen=True)
class AngleData:
    """Edge angles and contact half-lengths in the canonical frame."""

    phi: Dict[int, float]    # labels 2..6
    ell: Dict[int, float]
    h: float
    a: float

    @staticmethod
    def from_config(cfg: ParallelogramConfig) -> "AngleData":
        # angles and lengths are reduced to the canonical frame (h and a
        # are stored canonically already)
        rot = cfg.diameter_direction
        scale = 2.0 / float(np.hypot(*(cfg.p1 - cfg.p4)))
        phi = {i: float(cfg.phi[i - 1] - rot) for i in range(2, 7)}
        ell = {i: float(cfg.half_lengths[i - 1] * scale) for i in range(2, 7)}
        return AngleData(phi=phi, ell=ell, h=float(cfg.h), a=float(cfg.a))

    def validate(self, tol: float = 1e-10) -> None:
        s32 = math.sin(self.phi[3] - self.phi[2])
        s65 = math.sin(self.phi[6] - self.phi[5])
        if abs(s32) <= tol or abs(s65) <= tol:
            raise DegenerateInput("parallelogram side directions are degenerate")


def closed_form_null_vector(angles: AngleData) -> np.ndarray:
    """Right null generator of the contact Jacobian (closed form)."""
    p = angles.phi
    s, c = math.sin, math.cos
    k2 = s(p[2] - p[4]) / s(p[2] - p[3])
    k6 = s(p[4] - p[6]) / s(p[5] - p[6])
    return np.array([
        c(p[4]), s(p[4]), 0.0,
        c(p[3]) * k2, s(p[3]) * k2, 0.0,
        c(p[5]) * k6, s(p[5]) * k6, 0.0,
    ])


def closed_form_group_sums(angles: AngleData) -> Dict[str, float]:
    """Grouped dual sums predicted directly from the contact geometry."""
    p, l = angles.phi, angles.ell
    s = math.sin

    def cot(x):
        return math.cos(x) / math.sin(x)

    return {
        "g12": -l[2] * s(p[3]) / s(p[3] - p[2]),
        "g34": l[3] * s(p[2]) / s(p[3] - p[2]),
        "g56": l[5] * s(p[6]) / s(p[6] - p[5]),
        "g78": -l[6] * s(p[5]) / s(p[6] - p[5]),
        "g9": -(l[4] / s(p[4])) * (angles.h
                                   - 1.0 / (cot(p[3]) - cot(p[2]))
                                   - 1.0 / (cot(p[6]) - cot(p[5]))),
    }


@dataclass(frozen=True)
class NullSpaces:
    z0: np.ndarray
    eta0: np.ndarray
    rank: int
    singular_values: np.ndarray

    def __post_init__(self):
        self.z0.setflags(write=False)
        self.eta0.setflags(write=False)
        self.singular_values.setflags(write=False)


def null_spaces(G: np.ndarray, angles: Optional[AngleData] = None,
                tol_rank: float = 1e-8) -> NullSpaces:
    """Rank and the two one-dimensional null generators of G.

    With angle data the right generator is scaled to the closed form whose
    translation block for the reference body is the unit vector along the
    sliding edge; otherwise that block is normalized to unit length.
    """
    U, s, Vt = np.linalg.svd(G)
    thresh = tol_rank * s[0]
    rank = int(np.sum(s > thresh))
    if rank < 8:
        raise RankDeficiencyUnexpected(
            f"contact Jacobian rank {rank} < 8 (singular values {s})")
    z0 = Vt[-1].copy()
    eta0 = U[:, -1].copy()
    if angles is not None:
        v4 = np.array([math.cos(angles.phi[4]), math.sin(angles.phi[4])])
        scale = float(z0[0] * v4[0] + z0[1] * v4[1])
        if abs(scale) < 1e-12:
            raise RankDeficiencyUnexpected("null vector inconsistent with geometry")
        z0 = z0 / scale
    else:
        nrm = float(np.hypot(z0[0], z0[1]))
        if nrm > 0:
            z0 = z0 / nrm
            if z0[1] < 0 or (z0[1] == 0 and z0[0] < 0):
                z0 = -z0
    if abs(eta0[0]) > 1e-12:
        eta0 = eta0 / eta0[0]
    return NullSpaces(z0=z0, eta0=eta0, rank=rank, singular_values=s.copy())


def determinant_identity_residual(G: np.ndarray, z0: np.ndarray,
                                  eta0: np.ndarray, angles: AngleData) -> float:
    """Relative defect of the rank-one-update determinant identity.

    det(G - eta0 z0^T) / (z0 . z0) equals
    2^14 sin(phi3 - phi2) sin(phi6 - phi5) / (l2 l3 l4 l5 l6)
    when z0 carries the closed-form scaling and eta0 the (+1, -1, ...) sign
    pattern.
    """
    p, l = angles.phi, angles.ell
    sgn = np.ones(9)
    sgn[1::2] = -1.0
    sgn[8] = 0.0
    lhs = float(np.linalg.det(G - np.outer(sgn, z0))) / float(z0 @ z0)
    rhs = (2.0 ** 14 * math.sin(p[3] - p[2]) * math.sin(p[6] - p[5])
           / (l[2] * l[3] * l[4] * l[5] * l[6]))
    return abs(lhs - rhs) / max(abs(rhs), 1e-300)


def solve_eta(G: np.ndarray, c: np.ndarray, eta0: np.ndarray,
              z0: Optional[np.ndarray] = None, tol_rank: float = 1e-8,
              align_to: Optional[np.ndarray] = None) -> np.ndarray:
    """Dual vector with eta^T G = c, gauge-fixed orthogonal to eta0.

    The solution set is a line eta + s*eta0; ``align_to`` selects the member
    closest to a given vector instead of the orthogonal one.
    """
    if z0 is not None:
        num = abs(float(c @ z0))
        den = float(np.linalg.norm(c) * np.linalg.norm(z0))
        if den > 0 and num > tol_rank * den:
            raise GradientNotInRowSpace(
                f"objective gradient has null-space component {num / den:g}")
    eta, *_ = np.linalg.lstsq(G.T, c, rcond=None)
    e = eta0 / float(np.linalg.norm(eta0))
    eta = eta - float(eta @ e) * e
    if align_to is not None:
        eta = eta + float((align_to - eta) @ e) * e
    return eta


@dataclass(frozen=True)
class GroupedPositivity:
    ok: bool
    sums: Dict[str, float]
    closed_form: Dict[str, float]
    margins: Dict[str, float]
    crossval_residual: float


def grouped_positivity(eta: np.ndarray, angles: AngleData,
                       tol_pos: float = 1e-9) -> GroupedPositivity:
    """The five grouped dual positivity conditions with their margins."""
    sums = {
        "g12": float(eta[0] + eta[1]),
        "g34": float(eta[2] + eta[3]),
        "g56": float(eta[4] + eta[5]),
        "g78": float(eta[6] + eta[7]),
        "g9": float(eta[8]),
    }
    cf = closed_form_group_sums(angles)
    resid = max(abs(sums[k] - cf[k]) for k in sums)
    margins = {k: sums[k] - tol_pos for k in sums}
    ok = all(v > tol_pos for v in sums.values())
    return GroupedPositivity(ok=ok, sums=sums, closed_form=cf,
                             margins=margins, crossval_residual=float(resid))


def balance_mu(eta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Pair-averaging auxiliary multipliers: mu cancels across shared cell
    edges (mu_{2k} = -mu_{2k-1}, mu_9 = 0) and eta + mu has equal entries
    within each pair."""
    mu = np.zeros(9)
    for a in (0, 2, 4, 6):
        m = (eta[a + 1] - eta[a]) / 2.0
        mu[a] = m
        mu[a + 1] = -m
    return mu, eta + mu


@dataclass(frozen=True)
class SecondOrderReport:
    area_curvature: float          # d2A/dy2, y = p4 offset per half edge length
    stationarity_residual: float
    one_sided_slopes: Tuple[float, float]
    motion_continuous: bool


def second_order_and_stationarity(P: ConvexPolygon, cfg: ParallelogramConfig,
                                  angles: Optional[AngleData] = None) -> SecondOrderReport:
    """Quadratic growth of the area profile and the stationarity defect.

    The curvature is reported per unit of the normalized sliding coordinate
    (displacement of the second diameter endpoint along its edge, in half
    edge lengths).
    """
    if angles is None:
        angles = AngleData.from_config(cfg)
    p = angles.phi
    s = math.sin

    def cot(x):
        return math.cos(x) / math.sin(x)

    stat = angles.a - (angles.h * cot(p[4])
                       - s(p[3]) * s(p[4] - p[2]) / (s(p[4]) * s(p[3] - p[2]))
                       + s(p[5]) * s(p[6] - p[4]) / (s(p[4]) * s(p[6] - p[5])))

    curv = float("nan")
    slopes = (float("nan"), float("nan"))
    continuous = False
    try:
        plus = _one_sided_motion(P, cfg, +1)
        minus = _one_sided_motion(P, cfg, -1)
    except (DegenerateInput, PivotalConfiguration, SweepStall):
        plus = minus = None
    if plus is not None and minus is not None:
        w_p, slope_p, curv_p, sup_p = plus
        w_m, slope_m, curv_m, _ = minus
        slopes = (float(slope_m), float(slope_p))
        para = (1, 2, 4, 5)
        kink = float(np.abs(w_p[para, :] + w_m[para, :]).max())
        kink = max(kink, float(np.abs((w_p[0] - w_p[3]) + (w_m[0] - w_m[3])).max()))
        continuous = kink <= 1e-7
        speed4 = float(np.hypot(*w_p[3]))
        if speed4 > 1e-12 and not sup_p[3].is_vertex:
            a, b = P.edge(sup_p[3].index)
            half_edge = float(np.hypot(*(b - a))) / 2.0
            curv = 2.0 * curv_p * (half_edge / speed4) ** 2
        else:
            curv = 2.0 * curv_p
    return SecondOrderReport(area_curvature=float(curv),
                             stationarity_residual=float(stat),
                             one_sided_slopes=slopes,
                             motion_continuous=continuous)


@dataclass(frozen=True)
class OracleResult:
    trials: int
    feasible: int
    min_f: float
    radius: float
    seed: int


def perturbation_oracle(cells: CellFunctions, trials: int, radius: float,
                        seed: int, chunk: int = 20000,
                        directions: Optional[np.ndarray] = None) -> OracleResult:
    """Randomized local search for a feasible cell-area decrease.

    Samples placements in a z-ball, keeps those satisfying every contact
    constraint, and reports the smallest objective value seen.  When
    ``directions`` are given (e.g. the constraint null direction), half the
    samples concentrate in a tube around them, where feasible decreases of a
    defective configuration live.  The seed is split deterministically per
    chunk so results do not depend on the chunking.
    """
    rng = np.random.default_rng(seed)
    n_chunks = max(1, (trials + chunk - 1) // chunk)
    seeds = rng.integers(0, 2 ** 62, size=n_chunks)
    dirs = None
    if directions is not None:
        dirs = np.atleast_2d(np.asarray(directions, dtype=float))
        dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    feasible = 0
    min_f = math.inf
    done = 0
    for k in range(n_chunks):
        m = min(chunk, trials - done)
        if m <= 0:
            break
        done += m
        r = np.random.default_rng(int(seeds[k]))
        Z = r.normal(size=(m, 9))
        Z /= np.linalg.norm(Z, axis=1, keepdims=True)
        Z *= radius * r.uniform(size=(m, 1)) ** (1.0 / 9.0)
        if dirs is not None and radius > 0:
            half = m // 2
            d = dirs[r.integers(0, len(dirs), size=half)]
            t = radius * r.uniform(-1.0, 1.0, size=(half, 1))
            tube = t * d + (radius / 50.0) * r.normal(size=(half, 9))
            nrm = np.linalg.norm(tube, axis=1, keepdims=True)
            over = nrm[:, 0] > radius
            tube[over] *= radius / nrm[over]
            Z[:half] = tube
        g = cells.g_many(Z)
        mask = np.all(g >= -1e-12, axis=1)
        feasible += int(mask.sum())
        if mask.any():
            min_f = min(min_f, float(cells.f_many(Z[mask]).min()))
    if not math.isfinite(min_f):
        min_f = 0.0
    return OracleResult(trials=done, feasible=feasible, min_f=min_f,
                        radius=radius, seed=seed)


@dataclass(frozen=True)
class DualCertificate:
    G: np.ndarray
    c: np.ndarray
    z0: np.ndarray
    eta0: np.ndarray
    eta: np.ndarray
    mu: np.ndarray
    eta_prime: np.ndarray
    rank: int
    singular_values: np.ndarray
    group_sums: Dict[str, float]
    group_closed_form: Dict[str, float]
    residuals: Dict[str, float]


@dataclass(frozen=True)
class CertificateEntry:
    status: str
    config: ParallelogramConfig
    config_canonical: Optional[ParallelogramConfig]
    classification: MinimizerClassification
    density: float
    area: float
    dual: Optional[DualCertificate]
    second_order: Optional[SecondOrderReport]
    oracle: Optional[OracleResult]
    margins: Dict[str, float]
    notes: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Certificate:
    status: str
    density: float
    min_area: float
    entries: Tuple[CertificateEntry, ...]
    tolerances: Tolerances
    profile_min: float


class _Margins:
    """Collects pass/fail checks with the 10x near-threshold rule."""

    def __init__(self, factor: float):
        self.factor = factor
        self.values: Dict[str, float] = {}
        self.failed: List[str] = []
        self.near: List[str] = []

    def lower_bound(self, name: str, value: float, threshold: float):
        """Check value > threshold, conclusive when value > factor*threshold."""
        self.values[name] = value
        if not (value > threshold):
            self.failed.append(name)
        elif value <= self.factor * threshold:
            self.near.append(name)

    def residual(self, name: str, value: float, threshold: float):
        """Check |value| < threshold, conclusive when |value| < threshold/factor."""
        v = abs(value)
        self.values[name] = v
        if not (v < threshold):
            self.failed.append(name)
        elif v >= threshold / self.factor:
            self.near.append(name)


def _classification_status(cls: MinimizerClassification,
                           isolated_globally: bool) -> Optional[str]:
    if cls.exceptional == "type_i":
        return EXCEPTIONAL_TYPE_I
    if cls.exceptional == "type_ii":
        return EXCEPTIONAL_TYPE_II
    if not isolated_globally:
        return NOT_ISOLATED
    if cls.is_pivotal:
        return PIVOTAL
    if not cls.is_isolated_local_min:
        return NOT_ISOLATED
    return None


def certify_config(P: ConvexPolygon, cfg: ParallelogramConfig,
                   trials: int = 20000, radius: float = 1e-2, seed: int = 0,
                   tolerances: Tolerances = Tolerances(),
                   isolated_globally: bool = True) -> CertificateEntry:
    """Run the certificate pipeline on one minimizer configuration."""
    tol = tolerances
    dens = density(P, cfg)
    area = cfg.area

    cls = classify(P, cfg)
    gate = _classification_status(cls, isolated_globally)
    try:
        prep = prepare_reference(P, cfg)
    except DegenerateInput:
        prep = cfg
    if gate is not None:
        return CertificateEntry(
            status=gate, config=cfg, config_canonical=None, classification=cls,
            density=dens, area=area, dual=None, second_order=None, oracle=None,
            margins={}, notes=())

    notes: List[str] = []
    margins = _Margins(tol.inconclusive_factor)
    try:
        T = prep.canonical_transform()
        polyT = normalize_polygon(T.apply(P.vertices))
        cfgT = config_from_points(polyT, T.apply(prep.points))
        contacts = contact_list(polyT, cfgT, classification=cls)
        angles = AngleData.from_config(cfgT)
        angles.validate()
        cells = build_cell_functions(polyT, cfgT, contacts)
        lin = linearize(cells)
        ns = null_spaces(lin.G, angles, tol_rank=tol.tol_rank)
        eta = solve_eta(lin.G, lin.c, ns.eta0, z0=ns.z0, tol_rank=tol.tol_rank)
    except ExceptionalConfiguration as exc:
        status = EXCEPTIONAL_TYPE_I if exc.pattern == "type_i" else EXCEPTIONAL_TYPE_II
        return CertificateEntry(status=status, config=cfg, config_canonical=None,
                                classification=cls, density=dens, area=area,
                                dual=None, second_order=None, oracle=None,
                                margins={}, notes=(str(exc),))
    except PivotalConfiguration as exc:
        return CertificateEntry(status=PIVOTAL, config=cfg, config_canonical=None,
                                classification=cls, density=dens, area=area,
                                dual=None, second_order=None, oracle=None,
                                margins={}, notes=(str(exc),))
    except (VertexCoincidence, RankDeficiencyUnexpected, GradientNotInRowSpace,
            DegenerateInput, SweepStall, NonConvexInput) as exc:
        return CertificateEntry(status=INCONCLUSIVE, config=cfg,
                                config_canonical=None, classification=cls,
                                density=dens, area=area, dual=None,
                                second_order=None, oracle=None, margins={},
                                notes=(f"{type(exc).__name__}: {exc}",))

    s = ns.singular_values
    margins.lower_bound("rank_gap", float(s[7] / s[0]), tol.tol_rank)
    margins.residual("rank_null", float(s[8] / s[0]), tol.tol_rank)
    margins.residual("null_right", float(np.abs(lin.G @ ns.z0).max()
                                         / np.abs(lin.G).max()), 1e-8)
    margins.residual("null_left", float(np.abs(ns.eta0 @ lin.G).max()
                                        / np.abs(lin.G).max()), 1e-8)
    margins.residual("gradient_null_component",
                     float(abs(lin.c @ ns.z0)
                           / max(np.linalg.norm(lin.c) * np.linalg.norm(ns.z0), 1e-300)),
                     tol.tol_rank)
    margins.residual("dual_system", float(np.abs(eta @ lin.G - lin.c).max()
                                          / max(np.abs(lin.c).max(), 1.0)), 1e-8)
    margins.residual("jacobian_fd", lin.fd_residual, 1e-6)

    # closed-form cross-validations
    z0_cf = closed_form_null_vector(angles)
    margins.residual("null_closed_form", float(np.abs(ns.z0 - z0_cf).max()), 1e-8)
    det_res = determinant_identity_residual(lin.G, ns.z0, ns.eta0, angles)
    margins.residual("determinant_identity", det_res, tol.det_identity)

    gp = grouped_positivity(eta, angles, tol_pos=tol.tol_pos)
    for k, v in gp.sums.items():
        margins.lower_bound(f"group_{k}", v, tol.tol_pos)
    margins.residual("group_closed_form", gp.crossval_residual, 1e-8)

    mu, eta_prime = balance_mu(eta)
    margins.lower_bound("eta_prime_min", float(eta_prime.min()), tol.tol_pos)

    so = second_order_and_stationarity(P, cfg, angles=angles)
    margins.residual("stationarity", so.stationarity_residual, tol.tol_stat)
    if so.motion_continuous:
        margins.lower_bound("area_curvature", so.area_curvature, tol.tol_pos)
    else:
        notes.append("breakpoint minimizer: one-sided slopes "
                     f"{so.one_sided_slopes}")
        margins.lower_bound("area_curvature", -1.0, tol.tol_pos)

    # sliding-direction witnesses: constraints vanish and the objective is a
    # convex parabola along the null direction
    ts = np.linspace(-0.01, 0.01, 20)
    gmax = float(np.abs(cells.g_many(np.outer(ts, ns.z0))).max())
    margins.residual("null_motion_contact", gmax, 1e-9)
    fvals = cells.f_many(np.outer(ts, ns.z0))
    coef = np.polynomial.polynomial.polyfit(ts, fvals, 2)
    fit = np.polynomial.polynomial.polyval(ts, coef)
    margins.residual("null_motion_fit", float(np.abs(fvals - fit).max()), 1e-10)
    margins.lower_bound("null_motion_curvature", float(coef[2]), tol.tol_pos)
    margins.residual("null_motion_linear", float(abs(coef[1])), 1e-8)

    oracle = perturbation_oracle(cells, trials=trials, radius=radius, seed=seed,
                                 directions=ns.z0)
    margins.lower_bound("oracle_min_f", oracle.min_f - tol.oracle_floor, 0.0)
    margins.values["oracle_min_f"] = oracle.min_f

    dual = DualCertificate(
        G=lin.G, c=lin.c, z0=ns.z0, eta0=ns.eta0, eta=eta, mu=mu,
        eta_prime=eta_prime, rank=ns.rank, singular_values=ns.singular_values,
        group_sums=gp.sums, group_closed_form=gp.closed_form,
        residuals={k: margins.values[k] for k in margins.values})

    if margins.failed:
        status = INCONCLUSIVE
        notes.append("failed checks: " + ", ".join(sorted(margins.failed)))
    elif margins.near:
        status = INCONCLUSIVE
        notes.append("near-threshold checks: " + ", ".join(sorted(margins.near))
                     + "; rerun with extended precision")
    else:
        status = STRONGLY_EXTREME

    return CertificateEntry(
        status=status, config=cfg, config_canonical=cfgT, classification=cls,
        density=dens, area=area, dual=dual, second_order=so, oracle=oracle,
        margins=dict(margins.values), notes=tuple(notes))


def certify(P: ConvexPolygon, trials: int = 20000, radius: float = 1e-2,
            seed: int = 0, tolerances: Tolerances = Tolerances()) -> Certificate:
    """Find the densest double-lattice packing of P and certify each global
    minimizer of the parallelogram area as a local density maximum.

    All failures are reported as certificate statuses rather than raised.
    """
    try:
        minz = minimize_area(P)
    except (SweepStall, DegenerateInput, PivotalConfiguration):
        return Certificate(status=INCONCLUSIVE, density=float("nan"),
                           min_area=float("nan"), entries=(),
                           tolerances=tolerances, profile_min=float("nan"))
    entries = []
    for k, m in enumerate(minz.global_minima):
        entries.append(certify_config(
            P, m.config, trials=trials, radius=radius, seed=seed + k,
            tolerances=tolerances,
            isolated_globally=not minz.non_isolated_global))
    status = STRONGLY_EXTREME
    for e in entries:
        if e.status != STRONGLY_EXTREME:
            status = e.status
            break
    return Certificate(status=status, density=entries[0].density,
                       min_area=minz.min_area, entries=tuple(entries),
                       tolerances=tolerances, profile_min=minz.profile_min)
