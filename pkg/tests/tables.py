"""Frozen expected values for the regular pentagon and heptagon cell
problems (whole-edge constraint convention, doubled signed areas), the
area-profile branch coefficients of the regular 5/7/9-gons, and the three
exceptional fixture polygons with their drawn parallelograms.
"""
import numpy as np

# row alignment between the builder's contact-cycle order and the whole-edge
# listing order used by the expected matrices below
EDGE_ROW_ORDER = [0, 1, 7, 6, 3, 2, 4, 5, 8]


def pentagon_expected():
    u, v = np.cos(np.pi / 5), np.sin(np.pi / 5)
    G = np.array([
        [-2*u*v, -1.5+u, 0, 2*u*v, 1.5-u, 1.5-u, 0, 0, 0],
        [-2*u*v, -1.5+u, 1.5-u, 2*u*v, 1.5-u, 0, 0, 0, 0],
        [-2*u*v, 1.5-u, 0, 0, 0, 0, 2*u*v, -1.5+u, -1.5+u],
        [-2*u*v, 1.5-u, -1.5+u, 0, 0, 0, 2*u*v, -1.5+u, 0],
        [0, 0, 0, v-2*u*v, -0.5+2*u, 1.5-u, 0, 0, 0],
        [0, 0, 0, v-2*u*v, -0.5+2*u, -3.5+4*u, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, v-2*u*v, 0.5-2*u, -1.5+u],
        [0, 0, 0, 0, 0, 0, v-2*u*v, 0.5-2*u, 3.5-4*u],
        [-2*v, 0, 0, 0, 0, 0, 0, 0, 0]])
    eta = np.array([0.25, 0.25, 0.25, 0.25, 0.1+u/10, 0.4+0.9*u,
                    0.1+u/10, 0.4+0.9*u, 2*u])
    c = np.array([-6*u*v, 0, 0, 0, 1+u, 0, 0, -1-u, 0])
    z0 = np.array([0, 2+4*u, 0, 2*v+4*u*v, 1, 0, -2*v-4*u*v, 1, 0])
    return G, eta, c, z0


def heptagon_expected():
    u, v = np.cos(np.pi / 7), np.sin(np.pi / 7)
    u2 = u * u
    G = np.array([
        [v+2*u*v-4*u2*v, 1.5+u-4*u2, 11+2*u-16*u2, -v-2*u*v+4*u2*v, -1.5-u+4*u2, -2+2*u2, 0, 0, 0],
        [v+2*u*v-4*u2*v, 1.5+u-4*u2, -2+2*u2, -v-2*u*v+4*u2*v, -1.5-u+4*u2, 11+2*u-16*u2, 0, 0, 0],
        [v+2*u*v-4*u2*v, -1.5-u+4*u2, -11-2*u+16*u2, 0, 0, 0, -v-2*u*v+4*u2*v, 1.5+u-4*u2, 2-2*u2],
        [v+2*u*v-4*u2*v, -1.5-u+4*u2, 2-2*u2, 0, 0, 0, -v-2*u*v+4*u2*v, 1.5+u-4*u2, -11-2*u+16*u2],
        [0, 0, 0, 2*v-4*u2*v, 0.5+2*u-2*u2, 2-2*u2, 0, 0, 0],
        [0, 0, 0, 2*v-4*u2*v, 0.5+2*u-2*u2, -9.5-u+12*u2, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 2*v-4*u2*v, -0.5-2*u+2*u2, -2+2*u2],
        [0, 0, 0, 0, 0, 0, 2*v-4*u2*v, -0.5-2*u+2*u2, 9.5+u-12*u2],
        [-2*v, 0, 0, 0, 0, 0, 0, 0, 0]])
    eta = np.array([0.5, -2+4*u2, 0.5, -2+4*u2,
                    (70+45*u-66*u2)/71, (-141-45*u+208*u2)/71,
                    (70+45*u-66*u2)/71, (-141-45*u+208*u2)/71,
                    -5-2*u+12*u2])
    c = np.array([7*v+2*u*v-20*u2*v, 0, 0, 0, 1+u, 0, 0, -1-u, 0])
    z0 = np.array([0, 2-8*u+8*u2, 0, -4*u*v+8*u2*v, 1, 0, 4*u*v-8*u2*v, 1, 0])
    return G, eta, c, z0


# area profile A(y) per branch, y = displacement of the far diameter endpoint
# along its edge in half-edge units; (const, linear, quadratic) with the
# linear sign quoted for the y > 0 side branch
BRANCH_PROFILES = {
    5: {"central": (1.2903580504417251, 0.0, 0.10153740507278321),
        "central_end": 1.0, "side": None},
    7: {"central": (1.5326754446782211, 0.0, 0.09176757534725741),
        "central_end": 0.506040792565066,
        "side": (1.5848482175212668, -0.08816765628922468, 0.06225952189759027)},
    9: {"central": (1.6115786662088993, 0.0, 0.033061308882837155),
        "central_end": 0.30540728933227923,
        "side": (1.633850356689106, -0.0797264910024892, 0.05533299936304392)},
}

PENTAGON_DENSITY = (5.0 - np.sqrt(5.0)) / 3.0
HEPTAGON_MIN_AREA = 1.5326754446782211


def pentagon_edge_triples(k):
    """Published whole-edge anchor points of the pentagon cell problem."""
    return [
        (0, k[1], k[0], 2, k[1]),
        (2, k[1], k[0], 0, k[1]),
        (0, k[0], k[4], 6, k[4]),
        (6, k[0], k[4], 0, k[4]),
        (1, k[2], k[1], 2, k[2]),
        (2, k[2], k[1], 1, k[2]),
        (1, k[4], k[3], 6, k[3]),
        (6, k[4], k[3], 1, k[3]),
        (1, k[3], k[2], 0, k[0]),
    ]


def heptagon_edge_triples(k):
    """Published whole-edge anchor points of the heptagon cell problem."""
    return [
        (0, k[2], k[1], 2, k[1]),
        (2, k[2], k[1], 0, k[1]),
        (0, k[6], k[5], 6, k[6]),
        (6, k[6], k[5], 0, k[6]),
        (1, k[3], k[2], 2, k[3]),
        (2, k[3], k[2], 1, k[3]),
        (1, k[5], k[4], 6, k[4]),
        (6, k[5], k[4], 1, k[4]),
        (1, k[4], k[3], 0, k[0]),
    ]


def exceptional_fixtures():
    """Three polygons with degenerate configurations: two of the first
    incidence pattern (the second via a non-unique extremal chord) and one
    of the second pattern.  Returns (name, vertices, labeled points)."""
    F = np.array
    hexa = F([(1, 0), (5/16, 44/70), (-2/9, 9/10), (-19/30, 55/90),
              (-1, 0), (0, -7/10)], dtype=float)
    top = F([(96/271, 160/271), (-175/271, 160/271)], dtype=float)
    bot = F([(-1/2, -7/20), (1/2, -7/20)], dtype=float)
    left = ("type_i", hexa,
            F([(1, 0), top[0], top[1], (-1, 0), bot[0], bot[1]], dtype=float))

    dx = F([-1/40, 1/10])
    octm = F([(1, 0), F([1, 0]) + dx, F([5/16, 44/70]) + dx,
              F([-2/9, 9/10]) + dx, F([-19/30, 55/90]) + dx,
              F([-1, 0]) + dx, (-1, 0), (0, -7/10)], dtype=float)
    mid = ("type_i", octm,
           F([F([1.0, 0.0]) + dx/2, top[0] + dx, top[1] + dx,
              F([-1.0, 0.0]) + dx/2, bot[0], bot[1]], dtype=float))

    octr = F([(1, 0), (256/669, 1888/3345), (-2/9, 3/4), (-3/5, 59/100),
              (-11/10, -59/400), (-7/10, -1/2), (0, -7/10), (13/20, -2/5)],
             dtype=float)
    right = ("type_ii", octr,
             F([(1, 0), (256/669, 1888/3345), (-413/669, 1888/3345), (-1, 0),
                (-21/34, -89/170), (13/34, -89/170)], dtype=float))
    return [("left", *left[1:], left[0]), ("middle", *mid[1:], mid[0]),
            ("right", *right[1:], right[0])]
