"""Spatial grid of first-arrival candidates.

The unit square is tiled by n x n cells with n = ceil(sqrt(2)/r), the
coarsest spacing at which the cell diagonal does not exceed the exclusion
radius, so a finished pattern holds at most one point per cell.  Each active
cell stores the free region where its future point may still land, the
current candidate point drawn uniformly from that region, and the candidate's
arrival time under a unit-rate spatial Poisson process (exponential in the
region area).

Cells are visited in lexicographic (i, j) index order wherever the iteration
order matters; initialization draws, per cell, the candidate point first and
the arrival time second.  This pins the random stream layout and makes runs
byte-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geom import FreeRegion, full_square
from .rng import RngStream, exp_draw

SQRT2 = math.sqrt(2.0)

# Cell states.
ACTIVE = 0
ACCEPTED = 1
EXHAUSTED = 2


class NonPositiveRadius(ValueError):
    """Raised when a grid is requested for r <= 0."""


@dataclass(frozen=True)
class GridParams:
    """Derived grid geometry for an exclusion radius r and polygon count k."""

    r: float
    n: int
    s: float
    a0: float
    k: int

    def __post_init__(self):
        if self.s * SQRT2 > self.r * (1.0 + 1e-12):
            raise ValueError(
                f"cell side {self.s} violates the diagonal bound for r={self.r}"
            )


class Cell:
    """One grid square and its candidate bookkeeping (mutated by the engine)."""

    __slots__ = (
        "i", "j", "x0", "y0", "x1", "y1",
        "state", "cx", "cy", "t", "region", "in_bucket", "neighbors",
    )

    def __init__(self, i: int, j: int, s: float):
        self.i = i
        self.j = j
        self.x0 = i * s
        self.y0 = j * s
        self.x1 = (i + 1) * s
        self.y1 = (j + 1) * s
        self.state = ACTIVE
        self.cx = 0.0
        self.cy = 0.0
        self.t = 0.0
        self.region: FreeRegion | None = None
        self.in_bucket = False
        self.neighbors: list["Cell"] = []

    @property
    def index(self) -> tuple[int, int]:
        return (self.i, self.j)

    def __repr__(self) -> str:
        names = {ACTIVE: "Active", ACCEPTED: "Accepted", EXHAUSTED: "Exhausted"}
        return f"Cell({self.i},{self.j} {names[self.state]} t={self.t:.4g})"


class Grid:
    """n x n cell lattice over the unit square."""

    __slots__ = ("params", "n", "cells")

    def __init__(self, params: GridParams):
        self.params = params
        self.n = params.n
        self.cells = [Cell(i, j, params.s) for i in range(self.n) for j in range(self.n)]

    def cell(self, i: int, j: int) -> Cell:
        return self.cells[i * self.n + j]

    def __iter__(self):
        return iter(self.cells)


def grid_params(r: float, k: int) -> GridParams:
    if r <= 0.0 or not math.isfinite(r):
        raise NonPositiveRadius(f"exclusion radius must be positive, got {r}")
    n = max(1, math.ceil(SQRT2 / r))
    s = 1.0 / n
    return GridParams(r=r, n=n, s=s, a0=s * s, k=k)


def init_grid(r: float, k: int, rng: RngStream) -> Grid:
    """Fresh grid: every cell active, free region the whole square, candidate
    uniform in the square, arrival time exponential with rate the cell area."""
    params = grid_params(r, k)
    grid = Grid(params)
    s = params.s
    a0 = params.a0
    for cell in grid.cells:
        cell.region = full_square(cell.x0, cell.y0, s)
        cell.cx = cell.x0 + s * rng.random()
        cell.cy = cell.y0 + s * rng.random()
        cell.t = exp_draw(a0, rng)
    for cell in grid.cells:
        cell.neighbors = _neighbor_refs(cell.cx, cell.cy, grid, exclude=cell)
    return grid


def cell_of(p: tuple[float, float], grid: Grid) -> tuple[int, int]:
    """Index of the cell containing p; coordinates exactly 1 clamp inward."""
    n = grid.n
    i = int(p[0] * n)
    j = int(p[1] * n)
    if i >= n:
        i = n - 1
    if j >= n:
        j = n - 1
    return (i, j)


def _neighbor_refs(px: float, py: float, grid: Grid, exclude: Cell | None = None) -> list[Cell]:
    """Cells whose closed square lies within r of (px, py), lex order."""
    n = grid.n
    r = grid.params.r
    s = grid.params.s
    r2 = r * r
    lo_i = max(0, int((px - r) * n) - 1)
    hi_i = min(n - 1, int((px + r) * n) + 1)
    lo_j = max(0, int((py - r) * n) - 1)
    hi_j = min(n - 1, int((py + r) * n) + 1)
    cells = grid.cells
    out = []
    push = out.append
    for i in range(lo_i, hi_i + 1):
        x0 = i * s
        dx = x0 - px
        if dx < 0.0:
            dx = px - x0 - s
            if dx < 0.0:
                dx = 0.0
        dx2 = dx * dx
        if dx2 > r2:
            continue
        rem2 = r2 - dx2
        base = i * n
        for j in range(lo_j, hi_j + 1):
            y0 = j * s
            dy = y0 - py
            if dy < 0.0:
                dy = py - y0 - s
                if dy < 0.0:
                    dy = 0.0
            if dy * dy <= rem2:
                cell = cells[base + j]
                if cell is not exclude:
                    push(cell)
    return out


def neighbor_cells(p: tuple[float, float], grid: Grid) -> list[tuple[int, int]]:
    """Indices of every cell whose closed square is within r of p (closed
    disk, so exact-distance boundaries count), the point's own cell included.
    Returned in lexicographic order without duplicates."""
    return [c.index for c in _neighbor_refs(p[0], p[1], grid)]
