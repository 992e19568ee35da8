"""Shared test oracles.

The Monte-Carlo oracles here are deliberately independent of the library's
geometry kernel: membership is evaluated edge-wise with numpy over whole
probe arrays, and areas come from hit counting, never from the shoelace
values under test.
"""

import numpy as np
import pytest


def np_points_in_poly(pts: np.ndarray, verts, tol: float = 0.0) -> np.ndarray:
    """Vectorized CCW convex-polygon membership for an (N, 2) probe array."""
    vs = list(verts)
    inside = np.ones(len(pts), dtype=bool)
    for (ax, ay), (bx, by) in zip(vs, vs[1:] + vs[:1]):
        cross = (bx - ax) * (pts[:, 1] - ay) - (by - ay) * (pts[:, 0] - ax)
        inside &= cross >= -tol
    return inside


def np_points_in_region(pts: np.ndarray, region, tol: float = 0.0) -> np.ndarray:
    hit = np.zeros(len(pts), dtype=bool)
    for piece in region.pieces:
        hit |= np_points_in_poly(pts, piece.verts, tol)
    return hit


def np_region_hits_per_piece(pts: np.ndarray, region, tol: float = 0.0) -> np.ndarray:
    """How many pieces contain each probe (for disjointness checks)."""
    count = np.zeros(len(pts), dtype=int)
    for piece in region.pieces:
        count += np_points_in_poly(pts, piece.verts, tol)
    return count


def random_convex_poly(rng, center=None, radius=None, n_verts=None):
    """Random convex polygon: vertices on a circle at sorted angles."""
    from poissondisk.geom import ConvexPoly

    if n_verts is None:
        n_verts = int(rng.integers(3, 9))
    while True:
        angles = np.sort(rng.uniform(0.0, 2.0 * np.pi, n_verts))
        if np.diff(angles, append=angles[0] + 2 * np.pi).min() > 0.05:
            break
    if radius is None:
        radius = float(rng.uniform(0.08, 0.35))
    if center is None:
        center = (float(rng.uniform(0.2, 0.8)), float(rng.uniform(0.2, 0.8)))
    cx, cy = center
    verts = [(cx + radius * np.cos(a), cy + radius * np.sin(a)) for a in angles]
    return ConvexPoly(verts)


def random_region(rng, n_cuts=None):
    """Unit-square region with a few random convex polygons carved out."""
    from poissondisk.geom import convex_difference, full_square

    region = full_square(0.0, 0.0, 1.0)
    if n_cuts is None:
        n_cuts = int(rng.integers(1, 4))
    for _ in range(n_cuts):
        region = convex_difference(region, random_convex_poly(rng))
        if region.is_empty:
            break
    return region


def brute_min_dist(points) -> float:
    """All-pairs minimum distance via plain numpy broadcasting."""
    pts = np.asarray([(x, y) for x, y, *_ in points], dtype=float)
    if len(pts) < 2:
        return float("inf")
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
    np.fill_diagonal(d2, np.inf)
    return float(np.sqrt(d2.min()))


@pytest.fixture
def np_rng():
    return np.random.default_rng(1234)
