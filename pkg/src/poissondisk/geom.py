"""Planar geometry kernel for free-region bookkeeping.

Convex polygons with counter-clockwise vertex order are the only shape
primitive.  A free region is a set of pairwise-disjoint convex pieces with a
cached total area, so that clipping, area queries, and uniform sampling all
cost time proportional to the (small, bounded) piece count.

Subtracting a convex polygon P from a region uses the wedge decomposition of
P's complement: wedge i is the outside halfplane of edge i intersected with
the inside halfplanes of edges 0..i-1.  Splitting a piece edge by edge yields
exactly those wedge intersections, all convex and disjoint.

Exclusion disks are represented by circumscribed regular k-gons whose apothem
equals the disk radius, so the polygon always contains the disk and the
minimum-distance guarantee is exact.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Optional, Sequence

# Pieces and regions at or below this area are treated as empty.  Far below
# any statistically meaningful region size; prevents sliver-driven resampling.
AREA_EPS = 1e-12

# Boundary slack for point-membership tests, measured as a distance.
MEMBERSHIP_TOL = 1e-9


class EmptyRegion(ValueError):
    """Raised when an operation needs a region with positive area."""


class HalfPlane(NamedTuple):
    """The set {z : normal . z <= offset}, with a unit-length normal."""

    nx: float
    ny: float
    offset: float

    @classmethod
    def of(cls, nx: float, ny: float, offset: float) -> "HalfPlane":
        norm = math.hypot(nx, ny)
        if norm == 0.0:
            raise ValueError("halfplane normal must be nonzero")
        return cls(nx / norm, ny / norm, offset / norm)


class ConvexPoly:
    """Counter-clockwise convex polygon with cached area and bounding box."""

    __slots__ = ("verts", "area", "bx0", "by0", "bx1", "by1")

    def __init__(self, verts: Sequence[tuple[float, float]], area: float | None = None):
        vs = tuple(verts)
        self.verts = vs
        px, py = vs[-1]
        acc = 0.0
        bx0 = bx1 = px
        by0 = by1 = py
        for cx, cy in vs:
            acc += px * cy - py * cx
            if cx < bx0:
                bx0 = cx
            elif cx > bx1:
                bx1 = cx
            if cy < by0:
                by0 = cy
            elif cy > by1:
                by1 = cy
            px, py = cx, cy
        self.area = 0.5 * acc if area is None else area
        self.bx0 = bx0
        self.by0 = by0
        self.bx1 = bx1
        self.by1 = by1

    def __repr__(self) -> str:
        return f"ConvexPoly({len(self.verts)} verts, area={self.area:.6g})"

    @classmethod
    def _raw(cls, verts, area, bx0, by0, bx1, by1):
        poly = object.__new__(cls)
        poly.verts = verts
        poly.area = area
        poly.bx0 = bx0
        poly.by0 = by0
        poly.bx1 = bx1
        poly.by1 = by1
        return poly

    def validate(self) -> None:
        """Check the convexity and area invariants; raise ValueError if broken."""
        vs = self.verts
        n = len(vs)
        if n < 3:
            raise ValueError(f"polygon needs >= 3 vertices, got {n}")
        for i in range(n):
            ax, ay = vs[i - 1]
            bx, by = vs[i]
            cx, cy = vs[(i + 1) % n]
            cross = (bx - ax) * (cy - by) - (by - ay) * (cx - bx)
            if cross < -1e-12:
                raise ValueError(f"vertices not convex/CCW at index {i} (cross={cross:g})")
        if self.area <= AREA_EPS:
            raise ValueError(f"degenerate polygon area {self.area:g}")
        recomputed = _shoelace(vs)
        if abs(recomputed - self.area) > 1e-12 * max(1.0, abs(recomputed)):
            raise ValueError("cached area disagrees with shoelace formula")


class FreeRegion:
    """Pairwise-disjoint convex pieces with cached total area."""

    __slots__ = ("pieces", "area")

    def __init__(self, pieces: Sequence[ConvexPoly]):
        self.pieces = tuple(pieces)
        self.area = math.fsum(p.area for p in self.pieces)

    def __repr__(self) -> str:
        return f"FreeRegion({len(self.pieces)} pieces, area={self.area:.6g})"

    @property
    def is_empty(self) -> bool:
        return self.area <= AREA_EPS


EMPTY_REGION = FreeRegion(())


def full_square(x0: float, y0: float, side: float) -> FreeRegion:
    """Region consisting of one axis-aligned square piece."""
    sq = ConvexPoly(
        ((x0, y0), (x0 + side, y0), (x0 + side, y0 + side), (x0, y0 + side)),
        area=side * side,
    )
    return FreeRegion((sq,))


def _shoelace(verts) -> float:
    """Signed area of a vertex tuple (positive for CCW order)."""
    acc = 0.0
    px, py = verts[-1]
    for cx, cy in verts:
        acc += px * cy - py * cx
        px, py = cx, cy
    return 0.5 * acc


def _wrap_piece(vlist) -> Optional[ConvexPoly]:
    """Area, bbox, and ConvexPoly for a fresh vertex list in a single pass;
    None when the piece is a sliver at or below AREA_EPS."""
    px, py = vlist[-1]
    acc = 0.0
    bx0 = bx1 = px
    by0 = by1 = py
    for cx, cy in vlist:
        acc += px * cy - py * cx
        if cx < bx0:
            bx0 = cx
        elif cx > bx1:
            bx1 = cx
        if cy < by0:
            by0 = cy
        elif cy > by1:
            by1 = cy
        px, py = cx, cy
    area = 0.5 * acc
    if area <= AREA_EPS:
        return None
    return ConvexPoly._raw(tuple(vlist), area, bx0, by0, bx1, by1)


def _split(verts, ax, ay, ex, ey):
    """Split a convex CCW vertex list by the directed line through (ax, ay)
    with direction (ex, ey).  Returns (left_part, right_part); vertices on the
    line belong to both parts.  A side the polygon never enters is returned as
    None, with the untouched input passed through on the other side."""
    ds = [ex * (vy - ay) - ey * (vx - ax) for vx, vy in verts]
    if min(ds) >= 0.0:
        return verts, None
    if max(ds) <= 0.0:
        return None, verts
    left = []
    right = []
    push_l = left.append
    push_r = right.append
    px, py = verts[-1]
    dp = ds[-1]
    for (cx, cy), dc in zip(verts, ds):
        if dp >= 0.0:
            push_l((px, py))
        if dp <= 0.0:
            push_r((px, py))
        if (dp > 0.0 and dc < 0.0) or (dp < 0.0 and dc > 0.0):
            t = dp / (dp - dc)
            cut = (px + t * (cx - px), py + t * (cy - py))
            push_l(cut)
            push_r(cut)
        px, py, dp = cx, cy, dc
    return left, right


def clip_halfplane(poly: ConvexPoly, h: HalfPlane) -> Optional[ConvexPoly]:
    """Intersection poly ∩ h, or None when the result is (near-)empty."""
    # Keep nx*x + ny*y <= offset: the line direction (-ny, nx) has the kept
    # side on its left, anchored at the closest line point.
    anchor_x = h.nx * h.offset
    anchor_y = h.ny * h.offset
    kept, dropped = _split(poly.verts, anchor_x, anchor_y, -h.ny, h.nx)
    if kept is None:
        return None
    if dropped is None:
        return poly
    if len(kept) < 3:
        return None
    area = _shoelace(kept)
    if area <= AREA_EPS:
        return None
    return ConvexPoly(tuple(kept), area)


_KGON_CACHE: dict[int, tuple[tuple[float, float], ...]] = {}


def _unit_kgon(k: int) -> tuple[tuple[float, float], ...]:
    table = _KGON_CACHE.get(k)
    if table is None:
        step = 2.0 * math.pi / k
        table = tuple((math.cos(i * step), math.sin(i * step)) for i in range(k))
        _KGON_CACHE[k] = table
    return table


def disk_polygon(
    center: tuple[float, float], r: float, k: int, *, allow_small_k: bool = False
) -> ConvexPoly:
    """Circumscribed regular k-gon of the radius-r disk around center.

    The apothem equals r (circumradius r/cos(pi/k)), so the polygon contains
    the disk; subtracting it removes at least the disk.  k below 8 wastes too
    much area and is rejected unless allow_small_k is set (tests only).
    """
    if r <= 0.0:
        raise ValueError(f"disk radius must be positive, got {r}")
    if k < 8 and not allow_small_k:
        raise ValueError(f"disk polygon needs k >= 8, got {k}")
    if k < 3:
        raise ValueError(f"cannot build a polygon with k={k}")
    cx, cy = center
    circum = r / math.cos(math.pi / k)
    verts = tuple((cx + circum * ux, cy + circum * uy) for ux, uy in _unit_kgon(k))
    # Exact regular-polygon area; the shoelace value matches to ~1e-16.
    area = k * r * r * math.tan(math.pi / k)
    return ConvexPoly(verts, area)


def _subtract_pieces(pieces: Sequence[ConvexPoly], poly_verts) -> list[ConvexPoly]:
    """Remainder pieces of (union of pieces) minus the convex CCW polygon."""
    edges = []
    ax, ay = poly_verts[-1]
    pbx0 = pbx1 = ax
    pby0 = pby1 = ay
    for bx, by in poly_verts:
        edges.append((ax, ay, bx - ax, by - ay))
        ax, ay = bx, by
        if bx < pbx0:
            pbx0 = bx
        elif bx > pbx1:
            pbx1 = bx
        if by < pby0:
            pby0 = by
        elif by > pby1:
            pby1 = by
    out = []
    for piece in pieces:
        bx0 = piece.bx0
        by0 = piece.by0
        bx1 = piece.bx1
        by1 = piece.by1
        # Pieces whose bounding box misses the polygon's survive untouched.
        if bx1 < pbx0 or bx0 > pbx1 or by1 < pby0 or by0 > pby1:
            out.append(piece)
            continue
        work = piece.verts
        for eax, eay, ex, ey in edges:
            # Side range of the piece's bounding box (a superset of work)
            # relative to this edge line: settles most edges without a split.
            if ex >= 0.0:
                y_hi = by1
                y_lo = by0
            else:
                y_hi = by0
                y_lo = by1
            if ey >= 0.0:
                x_hi = bx0
                x_lo = bx1
            else:
                x_hi = bx1
                x_lo = bx0
            if ex * (y_hi - eay) - ey * (x_hi - eax) <= 0.0:
                # Entirely outside this edge: the remainder is all of work,
                # and later wedges (which require this edge's inside) vanish.
                if work is piece.verts:
                    out.append(piece)
                else:
                    kept = _wrap_piece(work)
                    if kept is not None:
                        out.append(kept)
                work = None
                break
            if ex * (y_lo - eay) - ey * (x_lo - eax) >= 0.0:
                continue  # entirely inside this edge: nothing to carve off
            inside, outside = _split(work, eax, eay, ex, ey)
            if outside is None:
                work = inside
                continue
            if inside is None:
                if work is piece.verts:
                    out.append(piece)
                else:
                    kept = _wrap_piece(work)
                    if kept is not None:
                        out.append(kept)
                work = None
                break
            if len(outside) >= 3:
                kept = _wrap_piece(outside)
                if kept is not None:
                    out.append(kept)
            if len(inside) < 3:
                work = None
                break
            work = inside
        # Whatever remains of `work` lies inside the polygon and is dropped;
        # slivers below AREA_EPS vanish too, making the region conservatively
        # smaller by a measure-zero amount.
    return out


def convex_difference(region: FreeRegion, p: ConvexPoly) -> FreeRegion:
    """Region minus a convex polygon, as disjoint convex pieces."""
    if region.is_empty:
        return EMPTY_REGION
    remainder = _subtract_pieces(region.pieces, p.verts)
    if not remainder:
        return EMPTY_REGION
    return FreeRegion(remainder)


def region_area(region: FreeRegion) -> float:
    """Cached total area of the region."""
    return region.area


def sample_uniform(region: FreeRegion, rng) -> tuple[float, float]:
    """Uniform point inside the region.

    One uniform walks the area-weighted pieces and the fan triangles of the
    chosen piece; two more pick the point inside that triangle by folding the
    unit square onto barycentric coordinates.  Exactly three uniforms per
    sample, so the stream layout is fixed.
    """
    if region.is_empty:
        raise EmptyRegion(f"cannot sample from region of area {region.area:g}")
    pieces = region.pieces
    target = rng.random() * region.area
    piece = pieces[-1]
    for cand in pieces:
        if cand.area >= target:
            piece = cand
            break
        target -= cand.area
    vs = piece.verts
    ax, ay = vs[0]
    # Walk the fan; fall back to the last triangle on accumulated roundoff.
    bx, by = vs[-2]
    cx, cy = vs[-1]
    for idx in range(1, len(vs) - 1):
        tx, ty = vs[idx]
        sx, sy = vs[idx + 1]
        tri_area = 0.5 * ((tx - ax) * (sy - ay) - (ty - ay) * (sx - ax))
        if tri_area >= target:
            bx, by, cx, cy = tx, ty, sx, sy
            break
        target -= tri_area
    u = rng.random()
    v = rng.random()
    if u + v > 1.0:
        u = 1.0 - u
        v = 1.0 - v
    return (ax + u * (bx - ax) + v * (cx - ax), ay + u * (by - ay) + v * (cy - ay))


def _point_in_poly(x: float, y: float, verts, tol: float) -> bool:
    px, py = verts[-1]
    for cx, cy in verts:
        ex, ey = cx - px, cy - py
        cross = ex * (y - py) - ey * (x - px)
        if cross < 0.0:
            # Scale the distance tolerance by the edge length lazily; most
            # rejections are decisively negative and never reach the sqrt.
            if tol == 0.0 or cross < -tol * math.hypot(ex, ey):
                return False
        px, py = cx, cy
    return True


def point_in_region(
    q: tuple[float, float], region: FreeRegion, tol: float = MEMBERSHIP_TOL
) -> bool:
    """True iff q lies in some piece (boundary inclusive up to tol)."""
    x, y = q
    for piece in region.pieces:
        if (x < piece.bx0 - tol or x > piece.bx1 + tol
                or y < piece.by0 - tol or y > piece.by1 + tol):
            continue
        if _point_in_poly(x, y, piece.verts, tol):
            return True
    return False
