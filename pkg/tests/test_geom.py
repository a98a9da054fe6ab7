import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polypack.errors import DegenerateInput, NonConvexInput
from polypack.geom import (
    convex_clip,
    longest_chord,
    normalize_polygon,
    polygon_area,
    regular_polygon,
    signed_area,
    similarity_to_canonical,
)

coord = st.floats(min_value=-100, max_value=100, allow_nan=False)


def test_signed_area_examples():
    assert signed_area((0, 0), (1, 0), (0, 1)) == pytest.approx(0.5)
    assert signed_area((0, 0), (1, 0), (2, 0)) == 0.0
    assert signed_area((0, 0), (0, 1), (1, 0)) == pytest.approx(-0.5)


@given(coord, coord, coord, coord, coord, coord)
@settings(max_examples=200, deadline=None)
def test_signed_area_antisymmetry(ax, ay, bx, by, cx, cy):
    a, b, c = (ax, ay), (bx, by), (cx, cy)
    s = signed_area(a, b, c)
    assert signed_area(b, a, c) == pytest.approx(-s, abs=1e-9)
    assert signed_area(a, c, b) == pytest.approx(-s, abs=1e-9)
    assert signed_area(c, b, a) == pytest.approx(-s, abs=1e-9)


def test_normalize_square_cw():
    P = normalize_polygon([(0, 0), (0, 1), (1, 1), (1, 0)])  # clockwise input
    assert P.n == 4
    assert P.area == pytest.approx(1.0)
    assert polygon_area(P.vertices) > 0  # counterclockwise output


def test_normalize_pentagon_area():
    P = regular_polygon(5)
    assert P.area == pytest.approx(2.5 * np.sin(2 * np.pi / 5), abs=1e-12)


def test_normalize_removes_edge_midpoint():
    P = normalize_polygon([(0, 0), (0.5, 0.0), (1, 0), (1, 1), (0, 1)])
    assert P.n == 4


def test_normalize_rejects_reflex():
    with pytest.raises(NonConvexInput):
        normalize_polygon([(0, 0), (2, 0), (1, 0.2), (1, 2)])


def test_normalize_rejects_degenerate():
    with pytest.raises(DegenerateInput):
        normalize_polygon([(0, 0), (1, 0), (2, 0)])
    with pytest.raises(DegenerateInput):
        normalize_polygon([(0, 0), (1, 0)])


def test_shoelace_matches_triangle_fan():
    rng = np.random.default_rng(42)
    from conftest import random_convex_polygon
    for _ in range(25):
        P = random_convex_polygon(rng)
        fan = sum(signed_area(P.vertices[0], P.vertices[i], P.vertices[i + 1])
                  for i in range(1, P.n - 1))
        assert abs(fan - P.area) <= 1e-12 * P.area


def test_longest_chord_square_parallel_edges():
    P = normalize_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    ch = longest_chord(P, (1, 0))
    assert ch.length == pytest.approx(1.0, abs=1e-12)
    assert ch.non_unique
    lo, hi = ch.family
    assert lo.length == pytest.approx(1.0, abs=1e-12)
    assert hi.length == pytest.approx(1.0, abs=1e-12)
    # the two extreme representatives run along the bottom and top edges
    taus = sorted([lo.a[1], hi.a[1]])
    assert taus[0] == pytest.approx(0.0, abs=1e-9)
    assert taus[1] == pytest.approx(1.0, abs=1e-9)


def test_longest_chord_pentagon():
    P = regular_polygon(5)
    ch = longest_chord(P, (1, 0))
    # one endpoint at (1, 0), the other at the midpoint of the far edge
    assert ch.length == pytest.approx(1 + np.cos(np.pi / 5), abs=1e-12)
    ends = sorted([ch.a, ch.b], key=lambda p: p[0])
    assert np.allclose(ends[1], (1, 0), atol=1e-9)
    assert np.allclose(ends[0], (-np.cos(np.pi / 5), 0), atol=1e-9)
    assert not ch.non_unique


def test_longest_chord_heptagon():
    P = regular_polygon(7)
    ch = longest_chord(P, (1, 0))
    assert ch.length == pytest.approx(1 + np.cos(np.pi / 7), abs=1e-12)


def test_longest_chord_dominates_sampled_chords():
    rng = np.random.default_rng(7)
    from conftest import random_convex_polygon
    P = random_convex_polygon(rng)
    for _ in range(10):
        th = rng.uniform(0, np.pi)
        d = np.array([np.cos(th), np.sin(th)])
        L = longest_chord(P, d).length
        # sample chords through random interior points
        from polypack.geom import _clip_line
        best = 0.0
        for _ in range(100):
            w = rng.uniform(0, 1, size=P.n)
            q = (w / w.sum()) @ P.vertices
            iv = _clip_line(P, q, d, P.tol)
            if iv is not None:
                best = max(best, iv[1] - iv[0])
        assert L >= best - 1e-9


def test_longest_chord_direction_reversal():
    rng = np.random.default_rng(11)
    from conftest import random_convex_polygon
    P = random_convex_polygon(rng)
    for th in rng.uniform(0, 2 * np.pi, size=20):
        d = (np.cos(th), np.sin(th))
        l1 = longest_chord(P, d).length
        l2 = longest_chord(P, (-d[0], -d[1])).length
        assert l1 == pytest.approx(l2, abs=1e-10)


def test_similarity_examples():
    T = similarity_to_canonical((1, 0), (-1, 0))
    assert np.allclose(T.apply([(1, 0), (-1, 0)]), [(1, 0), (-1, 0)])
    T = similarity_to_canonical((2, 0), (0, 0))
    assert np.allclose(T.apply([(2, 0), (0, 0)]), [(1, 0), (-1, 0)])
    assert T.scale == pytest.approx(1.0)
    # pentagon extremal chord maps to the horizontal unit-half frame
    p1 = np.array([1.0, 0.0])
    p4 = np.array([-np.cos(np.pi / 5), 0.0])
    T = similarity_to_canonical(p1, p4)
    assert np.allclose(T.apply(p1), (1, 0), atol=1e-12)
    assert np.allclose(T.apply(p4), (-1, 0), atol=1e-12)
    assert T.scale == pytest.approx(2 / (1 + np.cos(np.pi / 5)), abs=1e-12)


def test_similarity_roundtrip():
    rng = np.random.default_rng(3)
    for _ in range(20):
        p1, p4 = rng.normal(size=(2, 2))
        if np.hypot(*(p1 - p4)) < 1e-3:
            continue
        T = similarity_to_canonical(p1, p4)
        pts = rng.normal(size=(8, 2))
        back = T.inverse().apply(T.apply(pts))
        assert np.abs(back - pts).max() <= 1e-12 * max(1.0, np.abs(pts).max())


def test_convex_clip_against_shapely():
    shapely = pytest.importorskip("shapely")
    from shapely.geometry import Polygon as SPoly

    rng = np.random.default_rng(5)
    from conftest import random_convex_polygon
    for _ in range(20):
        A = random_convex_polygon(rng)
        B = random_convex_polygon(rng)
        shift = rng.uniform(-0.8, 0.8, size=2)
        bv = B.vertices + shift
        inter = convex_clip(A.vertices, bv)
        ours = abs(polygon_area(inter)) if len(inter) >= 3 else 0.0
        ref = SPoly(A.vertices).intersection(SPoly(bv)).area
        assert ours == pytest.approx(ref, abs=1e-9)
