import numpy as np
import pytest

from polypack.cellproblem import (
    build_cell_functions,
    contact_list,
    linearize,
    prepare_reference,
)
from polypack.errors import ExceptionalConfiguration, PivotalConfiguration
from polypack.geom import normalize_polygon, regular_polygon
from polypack.lattice import Isometry2
from polypack.sweep import classify, config_at_direction, config_from_points
from tables import EDGE_ROW_ORDER, exceptional_fixtures, heptagon_expected, pentagon_expected


@pytest.fixture(scope="module")
def pentagon_cells(pentagon_classic):
    P, cfg, k = pentagon_classic
    contacts = contact_list(P, cfg)
    cells = build_cell_functions(P, cfg, contacts)
    return P, cfg, contacts, cells


def test_contact_list_pentagon(pentagon_classic):
    P, cfg, k = pentagon_classic
    contacts = contact_list(P, cfg)
    assert len(contacts) == 9
    assert [c.row for c in contacts] == list(range(1, 10))
    assert [c.bodies for c in contacts[:8]] == [
        (0, 2), (2, 0), (2, 1), (1, 2), (1, 6), (6, 1), (6, 0), (0, 6)]
    g9 = contacts[8]
    assert g9.bodies == (1, 0)
    assert g9.kind == "vertex_edge"
    # the ninth constraint pits the far-edge segment of the translated copy
    # against the first diameter endpoint
    assert np.allclose(g9.point, cfg.p4, atol=1e-12)
    assert g9.half_length == pytest.approx(np.sin(np.pi / 5), abs=1e-12)


def test_contact_list_rejects_type_ii():
    name, verts, pts, pattern = exceptional_fixtures()[2]
    P = normalize_polygon(verts)
    cfg = config_from_points(P, pts)
    with pytest.raises(ExceptionalConfiguration) as ei:
        contact_list(P, cfg)
    assert ei.value.pattern == "type_ii"


def test_contact_list_rejects_pivotal_type_i():
    name, verts, pts, pattern = exceptional_fixtures()[0]
    P = normalize_polygon(verts)
    cfg = config_from_points(P, pts)
    with pytest.raises(ExceptionalConfiguration) as ei:
        contact_list(P, cfg)
    assert ei.value.pattern == "type_i"


def test_reference_values_vanish(pentagon_cells):
    P, cfg, contacts, cells = pentagon_cells
    z0 = np.zeros(9)
    assert abs(cells.f(z0)) <= 1e-14
    assert np.abs(cells.g(z0)).max() <= 1e-13


def test_constraints_vanish_along_null_motion(pentagon_cells):
    P, cfg, contacts, cells = pentagon_cells
    lin = linearize(cells)
    from polypack.certify import null_spaces, AngleData
    ns = null_spaces(lin.G, AngleData.from_config(cfg))
    for t in np.linspace(-0.01, 0.01, 21):
        assert np.abs(cells.g(t * ns.z0)).max() <= 1e-9


def test_separation_increases_constraints(pentagon_cells):
    P, cfg, contacts, cells = pentagon_cells
    # translate the reference copy away from the reflected copy, i.e. toward
    # its own interior side of the contact edge (left of the ccw direction)
    n = np.array([-cfg.v_dirs[1][1], cfg.v_dirs[1][0]])
    z = np.zeros(9)
    z[0:2] = 1e-4 * n
    g = cells.g(z)
    assert g[0] > 0 and g[1] > 0


def test_jacobian_matches_differences_random(certified_random):
    # rebuild each certified instance's cell problem in the canonical frame
    # and compare the analytic Jacobian against central differences
    for P, cert, entry in certified_random:
        prep = prepare_reference(P, entry.config)
        T = prep.canonical_transform()
        polyT = normalize_polygon(T.apply(P.vertices))
        cfgT = config_from_points(polyT, T.apply(prep.points))
        cells = build_cell_functions(polyT, cfgT, contact_list(polyT, cfgT))
        lin = linearize(cells)
        h = 1e-6
        for k in range(9):
            zp = np.zeros(9)
            zp[k] = h
            col = (cells.g(zp) - cells.g(-zp)) / (2 * h)
            assert np.abs(col - lin.G[:, k]).max() < 1e-6


def test_row_sparsity(pentagon_cells):
    P, cfg, contacts, cells = pentagon_cells
    lin = linearize(cells)
    blocks = {0: slice(0, 3), 2: slice(3, 6), 6: slice(6, 9)}
    for r, contact in enumerate(contacts):
        involved = set(contact.bodies)
        for label, sl in blocks.items():
            if label not in involved:
                assert np.abs(lin.G[r, sl]).max() == 0.0


def test_isometry_invariance(pentagon_cells):
    P, cfg, contacts, cells = pentagon_cells
    rng = np.random.default_rng(2)
    z = 1e-3 * rng.normal(size=9)
    f0 = cells.f(z)
    g0 = cells.g(z)
    psi = Isometry2.rotation(1e-3, about=(0.2, -0.1)).compose(
        Isometry2.translation((2e-3, -1e-3)))
    # applying a common isometry to all four placements leaves every signed
    # area unchanged
    placed = cells.placements(z)
    for r, (bi, A, B, bj, C, norm) in enumerate(cells.rows):
        Mi, ti = placed[bi]
        Mj, tj = placed[bj]
        a = psi.apply(Mi @ A + ti)
        b = psi.apply(Mi @ B + ti)
        c = psi.apply(Mj @ C + tj)
        val = ((b - a)[0] * (c - a)[1] - (b - a)[1] * (c - a)[0]) / norm
        assert val == pytest.approx(g0[r], abs=1e-12)
    o = np.zeros(2)
    quad = [psi.apply(placed[k][0] @ o + placed[k][1]) for k in (0, 6, 1, 2)]
    area2 = 0.0
    for i in range(4):
        x1, y1 = quad[i]
        x2, y2 = quad[(i + 1) % 4]
        area2 += x1 * y2 - y1 * x2
    assert area2 - cells.f_reference == pytest.approx(f0, abs=1e-12)


def test_scaling_leaves_normalized_problem_invariant(pentagon_classic):
    P, cfg, k = pentagon_classic
    cells = build_cell_functions(P, cfg, contact_list(P, cfg))
    lin = linearize(cells)
    s = 3.25
    Q = normalize_polygon(s * P.vertices)
    cfg_s = config_from_points(Q, s * cfg.points)
    cells_s = build_cell_functions(Q, cfg_s, contact_list(Q, cfg_s))
    lin_s = linearize(cells_s)
    # the l^2 normalization makes rows scale uniformly: translation columns
    # by 1/s, rotation columns by 1 (exact proportionality per column type)
    tcols = [0, 1, 3, 4, 6, 7]
    rcols = [2, 5, 8]
    assert np.abs(lin_s.G[:, tcols] * s - lin.G[:, tcols]).max() < 1e-9
    assert np.abs(lin_s.G[:, rcols] - lin.G[:, rcols]).max() < 1e-9


def test_whole_edge_tables(pentagon_classic, heptagon_classic):
    # the pentagon's published anchors coincide with the automatic whole-edge
    # convention; the heptagon's use per-contact anchor choices, so both are
    # assembled from the published anchor triples
    from polypack.cellproblem import cell_functions_from_triples
    from tables import heptagon_edge_triples, pentagon_edge_triples

    P, cfg, k = pentagon_classic
    cells_auto = build_cell_functions(P, cfg, contact_list(P, cfg),
                                      extent="edge", normalized=False)
    lin_auto = linearize(cells_auto)
    Gt, eta_t, c_t, z0_t = pentagon_expected()
    assert np.abs(lin_auto.G[EDGE_ROW_ORDER, :] - Gt).max() < 1e-12
    assert np.abs(lin_auto.c - c_t).max() < 1e-12

    for (P, cfg, k), triples_of, expected in (
            (pentagon_classic, pentagon_edge_triples, pentagon_expected()),
            (heptagon_classic, heptagon_edge_triples, heptagon_expected())):
        cells = cell_functions_from_triples(cfg, triples_of(k))
        lin = linearize(cells)
        Gt, eta_t, c_t, z0_t = expected
        assert np.abs(lin.G - Gt).max() < 1e-12
        assert np.abs(lin.c - c_t).max() < 1e-12
        # published dual vector and null direction are consistent
        assert np.abs(eta_t @ Gt - c_t).max() < 1e-12
        assert np.abs(Gt @ z0_t).max() < 1e-12
