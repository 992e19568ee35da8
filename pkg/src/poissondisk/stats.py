"""Pattern analysis: spacing, density, maximality, and two-sample tests.

Everything here is a verifier, so the expensive-but-exact route is taken on
purpose: minimum distance and nearest neighbors come from all-pairs
distances, and the maximality probe measures the true worst gap over a dense
lattice.  The two-sample tests are the classical chi-square (on merged count
histograms) and Kolmogorov-Smirnov (with the asymptotic tail), used to
compare the fast sampler against the dart-throwing reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import kolmogorov
from scipy.stats import chi2 as _chi2_dist

from .engine import Pattern


class EmptyPattern(ValueError):
    """Raised when statistics are requested for a pattern with no points."""


class DegenerateHistogram(ValueError):
    """Raised when count histograms collapse to fewer than two merged bins."""


@dataclass
class PatternStats:
    n_points: int
    min_pair_dist: Optional[float]
    density_const: float
    nn_distances: np.ndarray
    generated_over_accepted: float


@dataclass
class BenchRecord:
    r: float
    n_accepted: int
    n_generated: int
    wall_seconds: float
    samples_per_second: float


def _points_array(pattern: Pattern) -> np.ndarray:
    return np.array([(x, y) for x, y, _ in pattern.points], dtype=float).reshape(-1, 2)


def nearest_neighbor_distances(pts: np.ndarray) -> np.ndarray:
    """Exact all-pairs nearest-neighbor distance per point."""
    n = len(pts)
    if n < 2:
        return np.empty(0)
    out = np.empty(n)
    block = max(16, int(2_000_000 / max(n, 1)))
    for s in range(0, n, block):
        blk = pts[s : s + block]
        d2 = ((blk[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
        rows = np.arange(len(blk))
        d2[rows, s + rows] = np.inf
        out[s : s + block] = np.sqrt(d2.min(axis=1))
    return out


def compute_stats(pattern: Pattern) -> PatternStats:
    """Exact summary of a pattern: all-pairs minimum distance, the packing
    density constant pi r^2 N / 4, sorted nearest-neighbor distances, and
    the generated-to-accepted candidate ratio."""
    pts = _points_array(pattern)
    n = len(pts)
    if n == 0:
        raise EmptyPattern("pattern has no points")
    nn = np.sort(nearest_neighbor_distances(pts))
    min_pair = float(nn[0]) if n > 1 else None
    density = math.pi * pattern.r * pattern.r * n / 4.0
    ratio = pattern.generated_count / n if pattern.generated_count else float("nan")
    return PatternStats(
        n_points=n,
        min_pair_dist=min_pair,
        density_const=density,
        nn_distances=nn,
        generated_over_accepted=ratio,
    )


def _worst_gap(pts: np.ndarray, radius: float, m: int):
    """Worst probe gap over the m x m cell-center lattice, with the probe
    that realizes it.  Exact: probes not covered by the local patches fall
    back to a tree query."""
    centers = (np.arange(m) + 0.5) / m
    field = np.full((m, m), np.inf)
    patch = max(1.3 * radius, 4.0 / m)
    for x, y in pts:
        i0 = max(0, int(math.ceil((x - patch) * m - 0.5)))
        i1 = min(m - 1, int(math.floor((x + patch) * m - 0.5)))
        j0 = max(0, int(math.ceil((y - patch) * m - 0.5)))
        j1 = min(m - 1, int(math.floor((y + patch) * m - 0.5)))
        if i0 > i1 or j0 > j1:
            continue
        dx2 = (centers[i0 : i1 + 1] - x) ** 2
        dy2 = (centers[j0 : j1 + 1] - y) ** 2
        np.minimum(field[i0 : i1 + 1, j0 : j1 + 1], dx2[:, None] + dy2[None, :],
                   out=field[i0 : i1 + 1, j0 : j1 + 1])
    uncovered = ~np.isfinite(field)
    if uncovered.any():
        from scipy.spatial import cKDTree

        ii, jj = np.nonzero(uncovered)
        probes = np.column_stack((centers[ii], centers[jj]))
        d, _ = cKDTree(pts).query(probes, k=1)
        field[ii, jj] = d * d
    flat = int(field.argmax())
    wi, wj = divmod(flat, m)
    gap = math.sqrt(float(field[wi, wj]))
    return gap, (float(centers[wi]), float(centers[wj]))


def maximality_probe(pattern: Pattern, radius: float, m: int = 1000) -> float:
    """Maximum, over an m x m lattice of probe points, of the distance to the
    nearest pattern point.  The pattern is maximal at `radius` iff the
    returned worst gap does not exceed it."""
    if m < 100:
        raise ValueError(f"probe lattice needs m >= 100, got {m}")
    pts = _points_array(pattern)
    if len(pts) == 0:
        raise EmptyPattern("pattern has no points")
    gap, _ = _worst_gap(pts, radius, m)
    return gap


def _circumcenters(pts: np.ndarray, tris: np.ndarray) -> np.ndarray:
    a = pts[tris[:, 0]]
    b = pts[tris[:, 1]]
    c = pts[tris[:, 2]]
    d = 2.0 * (
        a[:, 0] * (b[:, 1] - c[:, 1])
        + b[:, 0] * (c[:, 1] - a[:, 1])
        + c[:, 0] * (a[:, 1] - b[:, 1])
    )
    ok = np.abs(d) > 1e-14
    a, b, c, d = a[ok], b[ok], c[ok], d[ok]
    a2 = (a * a).sum(1)
    b2 = (b * b).sum(1)
    c2 = (c * c).sum(1)
    ux = (a2 * (b[:, 1] - c[:, 1]) + b2 * (c[:, 1] - a[:, 1])
          + c2 * (a[:, 1] - b[:, 1])) / d
    uy = (a2 * (c[:, 0] - b[:, 0]) + b2 * (a[:, 0] - c[:, 0])
          + c2 * (b[:, 0] - a[:, 0])) / d
    return np.column_stack((ux, uy))


def _bisector_boundary_crossings(p: np.ndarray, q: np.ndarray) -> list:
    """Points where the perpendicular bisector of p, q meets the unit-square
    boundary."""
    nx, ny = q - p
    c = float((p + q) @ (q - p)) / 2.0
    out = []
    if abs(ny) > 1e-300:
        for x in (0.0, 1.0):
            y = (c - nx * x) / ny
            if 0.0 <= y <= 1.0:
                out.append((x, y))
    if abs(nx) > 1e-300:
        for y in (0.0, 1.0):
            x = (c - ny * y) / nx
            if 0.0 <= x <= 1.0:
                out.append((x, y))
    return out


def largest_empty_circle_radius(pts: np.ndarray) -> float:
    """Exact worst gap: the maximum over the unit square of the distance to
    the nearest point.

    The nearest-distance field over a convex domain peaks at a Voronoi vertex,
    at a Voronoi-edge crossing of the boundary, or at a domain corner, so the
    maximum over that (superset of) candidates is the true maximum.  Small
    inputs enumerate all pairs and triples; larger ones take the Delaunay
    edges and triangles, which carry every Voronoi feature."""
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    n = len(pts)
    corners = np.array([(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)])
    if n == 0:
        return math.sqrt(2.0)
    cands = [corners]
    pairs: list = []
    tris = None
    if n >= 3 and n > 24:
        from scipy.spatial import Delaunay, QhullError

        try:
            mesh = Delaunay(pts)
            tris = mesh.simplices
            edges = set()
            for simplex in tris:
                for u in range(3):
                    a, b = int(simplex[u]), int(simplex[(u + 1) % 3])
                    edges.add((min(a, b), max(a, b)))
            pairs = sorted(edges)
        except QhullError:
            tris = None
    if tris is None:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        if n >= 3:
            tris = np.array(
                [(i, j, k) for i in range(n) for j in range(i + 1, n)
                 for k in range(j + 1, n)],
                dtype=int,
            )
    for i, j in pairs:
        crossings = _bisector_boundary_crossings(pts[i], pts[j])
        if crossings:
            cands.append(np.array(crossings))
    if tris is not None and len(tris):
        cc = _circumcenters(pts, np.asarray(tris))
        keep = ((cc[:, 0] >= 0.0) & (cc[:, 0] <= 1.0)
                & (cc[:, 1] >= 0.0) & (cc[:, 1] <= 1.0))
        if keep.any():
            cands.append(cc[keep])
    allc = np.vstack(cands)
    d2 = ((allc[:, None, :] - pts[None, :, :]) ** 2).sum(-1).min(axis=1)
    return float(math.sqrt(d2.max()))


def _chi2_two_sample(a: Sequence[int], b: Sequence[int]):
    """Two-sample chi-square on pooled integer histograms.

    Adjacent values merge left to right until both expected counts reach 5;
    a trailing remainder folds into the last bin.  Returns (stat, df, p)."""
    a = np.asarray(a, dtype=int)
    b = np.asarray(b, dtype=int)
    na, nb = len(a), len(b)
    lo = int(min(a.min(), b.min()))
    hi = int(max(a.max(), b.max()))
    ca = np.bincount(a - lo, minlength=hi - lo + 1).astype(float)
    cb = np.bincount(b - lo, minlength=hi - lo + 1).astype(float)
    fa = na / (na + nb)
    fb = nb / (na + nb)
    bins = []  # (observed_a, observed_b)
    acc_a = acc_b = 0.0
    for va, vb in zip(ca, cb):
        acc_a += va
        acc_b += vb
        pooled = acc_a + acc_b
        if min(fa * pooled, fb * pooled) >= 5.0:
            bins.append((acc_a, acc_b))
            acc_a = acc_b = 0.0
    if acc_a or acc_b:
        if bins:
            oa, ob = bins[-1]
            bins[-1] = (oa + acc_a, ob + acc_b)
        else:
            bins.append((acc_a, acc_b))
    if len(bins) < 2:
        raise DegenerateHistogram(f"only {len(bins)} merged bin(s)")
    stat = 0.0
    for oa, ob in bins:
        pooled = oa + ob
        ea = fa * pooled
        eb = fb * pooled
        stat += (oa - ea) ** 2 / ea + (ob - eb) ** 2 / eb
    df = len(bins) - 1
    return stat, df, float(_chi2_dist.sf(stat, df))


def two_sample_count_test(a: Sequence[int], b: Sequence[int]) -> float:
    """p-value of the chi-square test that two integer samples (point counts)
    come from the same distribution."""
    _, _, p = _chi2_two_sample(a, b)
    return p


def _ks_two_sample(a: Sequence[float], b: Sequence[float]):
    """Two-sample KS statistic and its asymptotic p-value (with the small-n
    effective-size correction).  Returns (d, p)."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    na, nb = len(a), len(b)
    pooled = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, pooled, side="right") / na
    cdf_b = np.searchsorted(b, pooled, side="right") / nb
    d = float(np.abs(cdf_a - cdf_b).max())
    en = math.sqrt(na * nb / (na + nb))
    p = float(kolmogorov((en + 0.12 + 0.11 / en) * d))
    return d, min(max(p, 0.0), 1.0)


def two_sample_ks_test(a: Sequence[float], b: Sequence[float]) -> float:
    """p-value of the two-sample Kolmogorov-Smirnov test."""
    _, p = _ks_two_sample(a, b)
    return p
