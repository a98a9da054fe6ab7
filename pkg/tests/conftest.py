import numpy as np
import pytest

from polypack.certify import certify
from polypack.geom import ConvexPolygon, normalize_polygon, regular_polygon
from polypack.sweep import ParallelogramConfig, config_from_points


def random_convex_polygon(rng: np.random.Generator, n_target: int = 7) -> ConvexPolygon:
    """Random strictly convex polygon with vertices near a unit circle."""
    while True:
        n = int(rng.integers(5, max(6, n_target + 2)))
        ang = np.sort(rng.uniform(0.0, 2 * np.pi, size=n))
        if np.min(np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))) < 0.25:
            continue
        rad = rng.uniform(0.75, 1.0, size=n)
        pts = np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=1)
        try:
            P = normalize_polygon(pts)
        except Exception:
            continue
        if P.n >= 5:
            return P


def classic_pentagon():
    """The optimal configuration of the unit-circumradius regular pentagon."""
    P = regular_polygon(5)
    u = np.cos(np.pi / 5)
    k = [np.array([np.cos(2 * np.pi * i / 5), np.sin(2 * np.pi * i / 5)])
         for i in range(5)]
    pts = np.array([
        k[0],
        0.25 * k[0] + 0.75 * k[1],
        ((3 - 2 * u) * k[1] + (1 + 2 * u) * k[2]) / 4,
        0.5 * (k[2] + k[3]),
        ((1 + 2 * u) * k[3] + (3 - 2 * u) * k[4]) / 4,
        0.75 * k[4] + 0.25 * k[0],
    ])
    return P, config_from_points(P, pts), k


def classic_heptagon():
    """The optimal (mirror-symmetric) configuration of the regular heptagon."""
    P = regular_polygon(7)
    k = [np.array([np.cos(2 * np.pi * i / 7), np.sin(2 * np.pi * i / 7)])
         for i in range(7)]
    p1 = k[0]
    p4 = 0.5 * (k[3] + k[4])
    half = (p1 - p4) / 2.0
    M = np.column_stack([k[2] - k[1], -(k[3] - k[2])])
    a, b = np.linalg.solve(M, half - (k[1] - k[2]))
    pts = np.array([
        p1,
        (1 - a) * k[1] + a * k[2],
        (1 - b) * k[2] + b * k[3],
        p4,
        b * k[4] + (1 - b) * k[5],
        a * k[5] + (1 - a) * k[6],
    ])
    return P, config_from_points(P, pts), k


@pytest.fixture(scope="session")
def pentagon_classic():
    return classic_pentagon()


@pytest.fixture(scope="session")
def heptagon_classic():
    return classic_heptagon()


@pytest.fixture(scope="session")
def certified_random():
    """Twenty random convex polygons whose densest double lattice certifies."""
    out = []
    seed = 0
    while len(out) < 20 and seed < 200:
        rng = np.random.default_rng(1000 + seed)
        seed += 1
        P = random_convex_polygon(rng)
        try:
            cert = certify(P, trials=512, seed=seed)
        except Exception:
            continue
        entry = cert.entries[0]
        if entry.status == "strongly_extreme":
            out.append((P, cert, entry))
    assert len(out) == 20, f"only {len(out)} certifiable random instances"
    return out
