"""Command-line front end: certify polygons and emit reports and drawings.

Input polygons come either from a JSON file ``{"vertices": [[x, y], ...]}``
or as a regular n-gon.  The certificate report is written as deterministic
JSON (identical runs produce byte-identical files); wall-clock timings go to
stderr only.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .certify import Certificate, CertificateEntry, Tolerances, certify
from .errors import DegenerateInput, NonConvexInput, PolypackError
from .geom import ConvexPolygon, normalize_polygon, regular_polygon
from .lattice import build_double_lattice
from .svgout import render_svg

SCHEMA_VERSION = 1
STATUS_EXIT = {"strongly_extreme": 0}
Z_ORDER = ["x0", "y0", "theta0", "x2", "y2", "theta2", "x6", "y6", "theta6"]


@dataclasses.dataclass
class RunConfig:
    """Resolved command-line options for a single certification run."""

    input_path: Optional[str] = None
    regular_n: Optional[int] = None
    circumradius: float = 1.0
    out_dir: str = "."
    emit_svg: bool = False
    svg_window: float = 5.0
    trials: int = 20000
    oracle_radius: float = 1e-2
    seed: int = 0
    tol_geom: Optional[float] = None
    tol_pos: Optional[float] = None
    json_only: bool = False


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="polypack",
        description="Densest double-lattice packing of a convex polygon "
                    "with a local-optimality certificate.")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="PATH",
                     help="JSON file with {\"vertices\": [[x, y], ...]}")
    src.add_argument("--regular", type=int, metavar="N",
                     help="use a regular N-gon")
    p.add_argument("--radius", type=float, default=1.0,
                   help="circumradius for --regular (default 1)")
    p.add_argument("--out", default=".", metavar="DIR",
                   help="output directory for report.json (default .)")
    p.add_argument("--svg", action="store_true",
                   help="also write packing.svg")
    p.add_argument("--window", type=float, default=5.0,
                   help="svg window size in multiples of the diameter")
    p.add_argument("--trials", type=int, default=20000,
                   help="perturbation-oracle sample count")
    p.add_argument("--oracle-radius", type=float, default=1e-2,
                   help="perturbation-oracle ball radius")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--tol-geom", type=float, default=None,
                   help="override the geometric tolerance")
    p.add_argument("--tol-pos", type=float, default=None,
                   help="override the dual positivity tolerance")
    p.add_argument("--json-only", action="store_true",
                   help="print the report JSON to stdout and nothing else")
    p.add_argument("--version", action="version", version=__version__)
    return p


def _load_polygon(cfg: RunConfig) -> ConvexPolygon:
    if cfg.regular_n is not None:
        if cfg.regular_n < 3:
            raise DegenerateInput("--regular needs n >= 3")
        return regular_polygon(cfg.regular_n, cfg.circumradius)
    path = Path(cfg.input_path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise PolypackError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise PolypackError(
            f"malformed JSON in {path} at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}") from exc
    if not isinstance(data, dict) or "vertices" not in data:
        raise PolypackError(f"{path}: expected an object with a 'vertices' field")
    verts = data["vertices"]
    if (not isinstance(verts, list) or len(verts) < 3
            or any(not isinstance(v, (list, tuple)) or len(v) != 2 for v in verts)):
        raise PolypackError(f"{path}: 'vertices' must be a list of [x, y] pairs")
    return normalize_polygon(np.asarray(verts, dtype=float))


def _arr(a) -> list:
    return np.asarray(a, dtype=float).tolist()


def _entry_dict(e: CertificateEntry) -> dict:
    cfg = e.config
    out = {
        "status": e.status,
        "density": e.density,
        "area": e.area,
        "classification": {
            "is_isolated_local_min": e.classification.is_isolated_local_min,
            "is_pivotal": e.classification.is_pivotal,
            "exceptional": e.classification.exceptional,
            "vertex_coincidences": list(e.classification.vertex_coincidences),
            "diameter_unique": e.classification.diameter_unique,
        },
        "parallelogram": {
            "points": _arr(cfg.points),
            "h": cfg.h,
            "a": cfg.a,
            "edge_angles": _arr(cfg.phi),
            "half_lengths": _arr(cfg.half_lengths),
        },
        "parallelogram_canonical": None,
        "dual": None,
        "second_order": None,
        "oracle": None,
        "margins": {k: e.margins[k] for k in sorted(e.margins)},
        "notes": list(e.notes),
    }
    if e.config_canonical is not None:
        cc = e.config_canonical
        out["parallelogram_canonical"] = {
            "points": _arr(cc.points),
            "h": cc.h,
            "a": cc.a,
            "edge_angles": _arr(cc.phi),
            "half_lengths": _arr(cc.half_lengths),
        }
    if e.dual is not None:
        d = e.dual
        out["dual"] = {
            "variables": Z_ORDER,
            "G": _arr(d.G),
            "c": _arr(d.c),
            "z0": _arr(d.z0),
            "eta0": _arr(d.eta0),
            "eta": _arr(d.eta),
            "mu": _arr(d.mu),
            "eta_prime": _arr(d.eta_prime),
            "rank": d.rank,
            "singular_values": _arr(d.singular_values),
            "group_sums": {k: d.group_sums[k] for k in sorted(d.group_sums)},
            "group_closed_form": {k: d.group_closed_form[k]
                                  for k in sorted(d.group_closed_form)},
        }
    if e.second_order is not None:
        out["second_order"] = {
            "area_curvature": e.second_order.area_curvature,
            "stationarity_residual": e.second_order.stationarity_residual,
            "one_sided_slopes": list(e.second_order.one_sided_slopes),
            "motion_continuous": e.second_order.motion_continuous,
        }
    if e.oracle is not None:
        out["oracle"] = {
            "trials": e.oracle.trials,
            "feasible": e.oracle.feasible,
            "min_f": e.oracle.min_f,
            "radius": e.oracle.radius,
            "seed": e.oracle.seed,
        }
    return out


def build_report(P: ConvexPolygon, cert: Certificate, cfg: RunConfig,
                 source: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "generator": {"name": "polypack", "version": __version__},
        "input": {
            "source": source,
            "vertices": _arr(P.vertices),
            "area": P.area,
            "diameter": P.diameter,
        },
        "run": {
            "seed": cfg.seed,
            "trials": cfg.trials,
            "oracle_radius": cfg.oracle_radius,
        },
        "tolerances": cert.tolerances.as_dict(),
        "status": cert.status,
        "density": cert.density,
        "min_parallelogram_area": cert.min_area,
        "area_profile_min": cert.profile_min,
        "entries": [_entry_dict(e) for e in cert.entries],
    }


def serialize_report(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=False) + "\n"


def parse_report(text: str) -> dict:
    return json.loads(text)


def run(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    try:
        P = _load_polygon(cfg)
    except NonConvexInput as exc:
        print(f"error: input polygon is not convex: {exc}", file=sys.stderr)
        return 1
    except (PolypackError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    tol = Tolerances()
    if cfg.tol_geom is not None:
        tol = dataclasses.replace(tol, tol_geom=cfg.tol_geom)
    if cfg.tol_pos is not None:
        tol = dataclasses.replace(tol, tol_pos=cfg.tol_pos)

    try:
        cert = certify(P, trials=cfg.trials, radius=cfg.oracle_radius,
                       seed=cfg.seed, tolerances=tol)
    except PolypackError as exc:
        print(f"error: certification failed: {exc}", file=sys.stderr)
        return 1
    t_cert = time.perf_counter() - t0

    source = cfg.input_path if cfg.input_path else f"regular:{cfg.regular_n}"
    report = build_report(P, cert, cfg, source)

    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / "report.json"
    report_path.write_text(serialize_report(report))

    svg_path = None
    if cfg.emit_svg and cert.entries:
        entry = cert.entries[0]
        dl = build_double_lattice(entry.config)
        svg_path = out_dir / "packing.svg"
        svg_path.write_text(render_svg(P, dl, cfg.svg_window, cfg=entry.config))

    print(f"certified in {t_cert:.3f}s; report: {report_path}"
          + (f"; svg: {svg_path}" if svg_path else ""), file=sys.stderr)

    if cfg.json_only:
        sys.stdout.write(serialize_report(report))
    else:
        print(f"input:    {source}")
        print(f"status:   {cert.status}")
        if np.isfinite(cert.density):
            print(f"density:  {cert.density:.9f}")
            print(f"cell min: {cert.min_area:.12g} (area profile min "
                  f"{cert.profile_min:.12g})")
        print(f"minima:   {len(cert.entries)} global minimizer(s)")
        for k, e in enumerate(cert.entries):
            print(f"  [{k}] status={e.status} density={e.density:.9f}")
    return STATUS_EXIT.get(cert.status, 2)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        input_path=args.input,
        regular_n=args.regular,
        circumradius=args.radius,
        out_dir=args.out,
        emit_svg=args.svg,
        svg_window=args.window,
        trials=args.trials,
        oracle_radius=args.oracle_radius,
        seed=args.seed,
        tol_geom=args.tol_geom,
        tol_pos=args.tol_pos,
        json_only=args.json_only,
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
