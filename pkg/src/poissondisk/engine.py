"""Bucket-driven maximal Poisson-disk sampler with constant work per point.

Every cell of the grid holds the earliest arrival of a unit-rate spatial
Poisson process restricted to the cell's free region.  A candidate whose
arrival time beats every cell within the exclusion radius of it ("locally
early") can never be blocked, so it is committed to the output immediately.
Accepting a point subtracts its exclusion polygon from nearby free regions;
candidates wiped out by the subtraction are redrawn in the shrunken region
with their arrival time pushed back by an exponential increment at rate equal
to the new region area, which is exactly the waiting time for the next
arrival there.  Cells that may have become locally early after these updates
are rescanned and appended to a FIFO bucket; the run ends when the bucket
drains, at which point no free area remains and the pattern is maximal.

Bucket entries are committed: their candidates are mutually at least r apart
(two locally-early candidates within r of each other would each have to
precede the other), so an acceptance never invalidates them and their regions
are left untouched until they are popped, where the region is discarded
anyway.  Skipping those updates is what keeps bucket entries permanently
valid even though exclusion polygons overreach the true disk by the
circumscription slack.

All randomness flows through one seeded stream in a pinned order
(initialization in lexicographic cell order, point before time; resampling in
lexicographic order over each acceptance's update window), so a
(r, k, seed) triple reproduces the pattern byte for byte.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .geom import (
    AREA_EPS,
    ConvexPoly,
    FreeRegion,
    _point_in_poly,
    _subtract_pieces,
    _unit_kgon,
    point_in_region,
    sample_uniform,
)
from .grid import (
    ACCEPTED,
    ACTIVE,
    EXHAUSTED,
    Cell,
    Grid,
    GridParams,
    _neighbor_refs,
    init_grid,
)
from .rng import RngStream, exp_draw, make_rng

Bucket = deque  # FIFO of committed cells; unordered semantics, fixed pop order


class DegenerateArea(ValueError):
    """Raised when an exponential increment is requested for a vanished area."""


class StaleBucketEntry(RuntimeError):
    """A popped bucket entry was no longer active.  Must be unreachable."""


@dataclass
class Pattern:
    """Accepted points in acceptance order, with their arrival times."""

    points: list[tuple[float, float, float]]
    r: float
    k: Optional[int]
    seed: int
    generated_count: int
    method: str = "engine"
    params: Optional[GridParams] = field(default=None, repr=False)

    @property
    def n_points(self) -> int:
        return len(self.points)


def exp_increment(area: float, rng: RngStream) -> float:
    """Waiting time until the next Poisson arrival in a region of this area."""
    if area <= AREA_EPS:
        raise DegenerateArea(f"no arrivals in degenerate area {area:g}")
    return exp_draw(area, rng)


def _locally_early(cell: Cell) -> bool:
    t = cell.t
    i = cell.i
    j = cell.j
    for nb in cell.neighbors:
        if nb.state == ACTIVE:
            nt = nb.t
            if nt < t or (nt == t and (nb.i, nb.j) < (i, j)):
                return False
    return True


def is_locally_early(c, grid: Grid) -> bool:
    """True iff the cell's candidate arrives before every active cell within
    r of it (accepted and exhausted neighbors no longer compete; exact time
    ties go to the lexicographically smaller cell index)."""
    cell = grid.cell(*c) if isinstance(c, tuple) else c
    return _locally_early(cell)


def build_initial_bucket(grid: Grid) -> Bucket:
    """Scan the fresh grid and collect every locally-early cell."""
    bucket: Bucket = deque()
    for cell in grid.cells:
        if cell.state == ACTIVE and _locally_early(cell):
            cell.in_bucket = True
            bucket.append(cell)
    return bucket


class Sampler:
    """One sampling run; owns the grid, the bucket, and the random stream.

    step() accepts a single point and returns it, or None once the pattern is
    maximal; run() drains the bucket and returns the full Pattern.  With
    debug=True every acceptance re-verifies the structural invariants (bucket
    compatibility, candidate membership, monotone times and areas, bounded
    update work) at considerable cost.
    """

    def __init__(self, r: float, k: int = 64, seed: int = 0, debug: bool = False):
        if k < 8:
            raise ValueError(f"exclusion polygon needs k >= 8, got {k}")
        self.seed = int(seed)
        self.rng = make_rng(self.seed)
        self.grid = init_grid(r, k, self.rng)
        self.params = self.grid.params
        self.debug = debug
        p = self.params
        self.r2 = p.r * p.r
        self.circum = p.r / math.cos(math.pi / k)
        self.circ2 = self.circum * self.circum
        self.update_reach = math.ceil(self.circum / p.s) + 1
        self.recheck_reach = math.ceil(2.0 * p.r / p.s) + 2
        # Constant per-acceptance work bound implied by the two reaches.
        self.visit_bound = (2 * self.update_reach + 1) ** 2 + (
            2 * (self.recheck_reach + self.update_reach) + 1
        ) ** 2
        self.points: list[tuple[float, float, float]] = []
        self.generated_count = p.n * p.n
        self.bucket = build_initial_bucket(self.grid)
        self.last_visits = 0
        if debug:
            self._areas = {c.index: c.region.area for c in self.grid.cells}
            self._times = {c.index: c.t for c in self.grid.cells}

    # -- core loop ---------------------------------------------------------

    def step(self) -> Optional[tuple[float, float, float]]:
        """Accept one point; None when the bucket has drained."""
        if not self.bucket:
            self._assert_exhausted()
            return None
        cell = self.bucket.popleft()
        if cell.state != ACTIVE:
            raise StaleBucketEntry(f"popped cell {cell.index} in state {cell.state}")
        self.accept(cell)
        if self.debug:
            self._check_invariants(cell)
        return self.points[-1]

    def run(self) -> Pattern:
        while self.step() is not None:
            pass
        return Pattern(
            points=self.points,
            r=self.params.r,
            k=self.params.k,
            seed=self.seed,
            generated_count=self.generated_count,
            method="engine",
            params=self.params,
        )

    def __iter__(self) -> Iterator[tuple[float, float, float]]:
        while (pt := self.step()) is not None:
            yield pt

    # -- one acceptance ----------------------------------------------------

    def accept(self, cell: Cell) -> None:
        """Commit the cell's candidate, update nearby free regions, resample
        invalidated candidates, and re-scan for newly locally-early cells."""
        grid = self.grid
        n = grid.n
        cells = grid.cells
        rng = self.rng
        px, py, tp = cell.cx, cell.cy, cell.t
        cell.state = ACCEPTED
        cell.in_bucket = False
        cell.region = None
        self.points.append((px, py, tp))

        circum = self.circum
        pverts = [(px + circum * ux, py + circum * uy) for ux, uy in _unit_kgon(self.params.k)]

        reach = self.update_reach
        lo_i = cell.i - reach
        if lo_i < 0:
            lo_i = 0
        hi_i = cell.i + reach
        if hi_i >= n:
            hi_i = n - 1
        lo_j = cell.j - reach
        if lo_j < 0:
            lo_j = 0
        hi_j = cell.j + reach
        if hi_j >= n:
            hi_j = n - 1

        s = self.params.s
        r2 = self.r2
        circ2 = self.circ2
        changed = [cell]
        visits = (hi_i - lo_i + 1) * (hi_j - lo_j + 1)
        for i in range(lo_i, hi_i + 1):
            colx0 = i * s
            colx1 = colx0 + s
            dxx = colx0 - px
            if dxx < 0.0:
                dxx = px - colx1
                if dxx < 0.0:
                    dxx = 0.0
            dx2 = dxx * dxx
            if dx2 > circ2:
                continue
            rem2 = circ2 - dx2
            fx = px - colx0
            gx = colx1 - px
            if gx > fx:
                fx = gx
            fx2 = fx * fx
            strip = False  # lazily computed polygon ∩ column, None if empty
            base = i * n
            for j in range(lo_j, hi_j + 1):
                d = cells[base + j]
                if d.state != ACTIVE or d.in_bucket:
                    continue
                dyy = d.y0 - py
                if dyy < 0.0:
                    dyy = py - d.y1
                    if dyy < 0.0:
                        dyy = 0.0
                if dyy * dyy > rem2:
                    continue
                fy = py - d.y0
                gy = d.y1 - py
                if gy > fy:
                    fy = gy
                if fx2 + fy * fy <= r2:
                    # Square fully inside the disk: no free area can survive.
                    d.state = EXHAUSTED
                    d.region = None
                    changed.append(d)
                    continue
                if strip is False:
                    sv = pverts
                    if px - circum < colx0:
                        sv = _clip_axis(sv, 0, colx0, True)
                    if len(sv) >= 3 and px + circum > colx1:
                        sv = _clip_axis(sv, 0, colx1, False)
                    strip = sv if len(sv) >= 3 else None
                if strip is None:
                    continue
                local = strip
                if py - circum < d.y0:
                    local = _clip_axis(local, 1, d.y0, True)
                if len(local) >= 3 and py + circum > d.y1:
                    local = _clip_axis(local, 1, d.y1, False)
                if len(local) < 3:
                    continue
                new_pieces = _subtract_pieces(d.region.pieces, local)
                if not new_pieces:
                    d.state = EXHAUSTED
                    d.region = None
                    changed.append(d)
                    continue
                region = FreeRegion(new_pieces)
                d.region = region
                if not _candidate_survives(d, new_pieces):
                    d.cx, d.cy = sample_uniform(region, rng)
                    d.t += exp_increment(region.area, rng)
                    d.neighbors = _neighbor_refs(d.cx, d.cy, grid, exclude=d)
                    self.generated_count += 1
                    changed.append(d)

        visits += self._recheck(changed)
        self.last_visits = visits

    def _recheck(self, changed: list[Cell]) -> int:
        """Test every active non-bucket cell near the state changes and
        insert the newly locally-early ones, in lexicographic order."""
        grid = self.grid
        n = grid.n
        cells = grid.cells
        bucket = self.bucket
        rad = self.recheck_reach
        lo_i = min(c.i for c in changed) - rad
        hi_i = max(c.i for c in changed) + rad
        lo_j = min(c.j for c in changed) - rad
        hi_j = max(c.j for c in changed) + rad
        if lo_i < 0:
            lo_i = 0
        if hi_i >= n:
            hi_i = n - 1
        if lo_j < 0:
            lo_j = 0
        if hi_j >= n:
            hi_j = n - 1
        visits = 0
        for i in range(lo_i, hi_i + 1):
            base = i * n
            for j in range(lo_j, hi_j + 1):
                visits += 1
                f = cells[base + j]
                if f.state == ACTIVE and not f.in_bucket and _locally_early(f):
                    f.in_bucket = True
                    bucket.append(f)
        return visits

    # -- invariant machinery -------------------------------------------------

    def _assert_exhausted(self) -> None:
        for c in self.grid.cells:
            if c.state == ACTIVE:
                raise RuntimeError(
                    f"bucket drained while cell {c.index} is still active"
                )

    def _check_invariants(self, accepted: Cell) -> None:
        ax, ay, _ = self.points[-1]
        r = self.params.r
        r2 = r * r
        # New point keeps its distance to everything accepted before it.
        for qx, qy, _ in self.points[:-1]:
            if (qx - ax) ** 2 + (qy - ay) ** 2 < r2:
                raise AssertionError(
                    f"accepted pair closer than r: ({qx},{qy}) vs ({ax},{ay})"
                )
        # Bucket entries are pairwise compatible and still locally early.
        entries = list(self.bucket)
        for a in range(len(entries)):
            ca = entries[a]
            if ca.state != ACTIVE:
                raise AssertionError(f"bucket entry {ca.index} not active")
            if not _locally_early(ca):
                raise AssertionError(f"bucket entry {ca.index} no longer locally early")
            for b in range(a + 1, len(entries)):
                cb = entries[b]
                if (ca.cx - cb.cx) ** 2 + (ca.cy - cb.cy) ** 2 < r2:
                    raise AssertionError(
                        f"bucket entries {ca.index} and {cb.index} within r"
                    )
        for c in self.grid.cells:
            if c.state == ACTIVE:
                if c.region is None or c.region.area <= AREA_EPS:
                    raise AssertionError(f"active cell {c.index} lacks a usable region")
                if not point_in_region((c.cx, c.cy), c.region):
                    raise AssertionError(f"candidate of {c.index} escaped its region")
                if not (c.t > 0.0 and math.isfinite(c.t)):
                    raise AssertionError(f"bad arrival time {c.t} in {c.index}")
                prev_area = self._areas[c.index]
                if c.region.area > prev_area + 1e-12:
                    raise AssertionError(f"free area of {c.index} grew")
                self._areas[c.index] = c.region.area
                if c.t < self._times[c.index]:
                    raise AssertionError(f"arrival time of {c.index} decreased")
                self._times[c.index] = c.t
        if self.last_visits > self.visit_bound:
            raise AssertionError(
                f"acceptance touched {self.last_visits} cells, bound {self.visit_bound}"
            )
        if not self.bucket:
            self._assert_exhausted()


def _candidate_survives(d: Cell, pieces: list[ConvexPoly]) -> bool:
    """Zero-tolerance membership of the standing candidate in the new region.

    The closed remainder pieces touch the subtracted polygon only along its
    boundary, where the distance to the new point is at least the apothem r,
    so keeping boundary candidates never violates the minimum distance."""
    x = d.cx
    y = d.cy
    for piece in pieces:
        if x < piece.bx0 or x > piece.bx1 or y < piece.by0 or y > piece.by1:
            continue
        if _point_in_poly(x, y, piece.verts, 0.0):
            return True
    return False


def _clip_axis(verts, axis: int, bound: float, keep_ge: bool):
    out = []
    px, py = verts[-1]
    pc = px if axis == 0 else py
    pin = pc >= bound if keep_ge else pc <= bound
    for vx, vy in verts:
        vc = vx if axis == 0 else vy
        vin = vc >= bound if keep_ge else vc <= bound
        if vin != pin:
            t = (bound - pc) / (vc - pc)
            if axis == 0:
                out.append((bound, py + t * (vy - py)))
            else:
                out.append((px + t * (vx - px), bound))
        if vin:
            out.append((vx, vy))
        px, py, pc, pin = vx, vy, vc, vin
    return out


def run(r: float, k: int = 64, seed: int = 0, debug: bool = False) -> Pattern:
    """Generate a maximal pattern at exclusion radius r.

    Deterministic in (r, k, seed).  Every point of the unit square ends up
    within r/cos(pi/k) of an accepted point, and all pairwise distances are
    at least r.
    """
    return Sampler(r, k=k, seed=seed, debug=debug).run()


def iter_points(r: float, k: int = 64, seed: int = 0) -> Iterator[tuple[float, float, float]]:
    """Stream accepted points one at a time, in acceptance order."""
    return iter(Sampler(r, k=k, seed=seed))
