import math

import numpy as np
import pytest

from poissondisk.geom import point_in_region
from poissondisk.grid import (
    ACTIVE,
    Grid,
    NonPositiveRadius,
    cell_of,
    grid_params,
    init_grid,
    neighbor_cells,
)
from poissondisk.rng import make_rng

SQRT2 = math.sqrt(2.0)


class TestGridParams:
    def test_r_half(self):
        p = grid_params(0.5, 64)
        assert p.n == 3
        assert p.s == pytest.approx(1.0 / 3.0)
        assert p.a0 == pytest.approx(1.0 / 9.0)
        assert p.s <= 0.5 / SQRT2 + 1e-15

    def test_r_tenth(self):
        assert grid_params(0.1, 64).n == 15

    def test_oversized_radius_clamps_to_one_cell(self):
        p = grid_params(1.5, 64)
        assert p.n == 1 and p.s == 1.0

    def test_nonpositive_radius(self):
        with pytest.raises(NonPositiveRadius):
            grid_params(0.0, 64)
        with pytest.raises(NonPositiveRadius):
            grid_params(-0.3, 64)

    @pytest.mark.parametrize("r", [0.7, 0.35, 0.2, 0.1, 0.05, 0.013, 0.004])
    def test_diagonal_spacing_bound(self, r):
        p = grid_params(r, 64)
        assert p.s * SQRT2 <= r * (1.0 + 1e-12)
        assert p.n == math.ceil(SQRT2 / r)


class TestInitGrid:
    def test_fresh_cells(self):
        grid = init_grid(0.3, 64, make_rng(5))
        s = grid.params.s
        for cell in grid.cells:
            assert cell.state == ACTIVE
            assert cell.region.area == pytest.approx(s * s, rel=1e-12)
            assert cell.x0 <= cell.cx <= cell.x1
            assert cell.y0 <= cell.cy <= cell.y1
            assert point_in_region((cell.cx, cell.cy), cell.region)
            assert cell.t > 0.0 and math.isfinite(cell.t)
            assert not cell.in_bucket

    def test_deterministic(self):
        a = init_grid(0.25, 64, make_rng(9))
        b = init_grid(0.25, 64, make_rng(9))
        assert [(c.cx, c.cy, c.t) for c in a.cells] == [
            (c.cx, c.cy, c.t) for c in b.cells
        ]

    def test_arrival_times_are_exponential_rate_a0(self):
        # Mean of Exp(rate=a0) is 1/a0; check the sample mean at 3 sigma.
        grid = init_grid(0.05, 64, make_rng(2))
        a0 = grid.params.a0
        times = [c.t for c in grid.cells]
        n = len(times)
        mean = sum(times) / n
        sigma = (1.0 / a0) / math.sqrt(n)
        assert abs(mean - 1.0 / a0) <= 3.5 * sigma

    def test_neighbor_cache_matches_public_relation(self):
        grid = init_grid(0.3, 64, make_rng(4))
        for cell in list(grid.cells)[::5]:
            cached = sorted(c.index for c in cell.neighbors)
            public = [idx for idx in neighbor_cells((cell.cx, cell.cy), grid)
                      if idx != cell.index]
            assert cached == public


class TestCellOf:
    def test_interior(self):
        grid = Grid(grid_params(0.5, 64))
        assert cell_of((0.99, 0.01), grid) == (2, 0)

    def test_boundary_clamp(self):
        grid = Grid(grid_params(0.5, 64))
        assert cell_of((1.0, 1.0), grid) == (2, 2)

    def test_single_cell(self):
        grid = Grid(grid_params(1.5, 64))
        assert cell_of((0.73, 0.11), grid) == (0, 0)

    def test_own_square_contains_point(self):
        grid = Grid(grid_params(0.07, 64))
        rng = np.random.default_rng(3)
        for x, y in rng.uniform(0.0, 1.0, (500, 2)):
            i, j = cell_of((x, y), grid)
            c = grid.cell(i, j)
            assert c.x0 <= x <= c.x1 + 1e-15 and c.y0 <= y <= c.y1 + 1e-15


class TestNeighborCells:
    def test_center_point_sees_all_nine(self):
        grid = Grid(grid_params(0.5, 64))
        got = neighbor_cells((0.5, 0.5), grid)
        assert len(got) == 9  # farthest corner cell at sqrt(2)/3 < 0.5

    def test_corner_point_exact_boundary(self):
        grid = Grid(grid_params(0.5, 64))
        got = set(neighbor_cells((1.0 / 6.0, 1.0 / 6.0), grid))
        assert (2, 2) not in got  # nearest corner at sqrt(2)/2 > 0.5
        assert (2, 0) in got and (0, 2) in got  # distance exactly 0.5, <= rule
        assert (0, 0) in got

    def test_single_cell_grid(self):
        grid = Grid(grid_params(1.5, 64))
        assert neighbor_cells((0.9, 0.2), grid) == [(0, 0)]

    def test_own_cell_always_included(self):
        grid = Grid(grid_params(0.11, 64))
        rng = np.random.default_rng(6)
        for x, y in rng.uniform(0.0, 1.0, (300, 2)):
            assert cell_of((x, y), grid) in neighbor_cells((x, y), grid)

    def test_symmetry_through_cells(self):
        # If two points are within r, each point's cell is a neighbor cell of
        # the other point.
        grid = Grid(grid_params(0.23, 64))
        rng = np.random.default_rng(12)
        r = grid.params.r
        for _ in range(400):
            p = rng.uniform(0.0, 1.0, 2)
            q = p + rng.uniform(-r, r, 2)
            q = np.clip(q, 0.0, 1.0)
            if math.hypot(*(p - q)) <= r:
                assert tuple(cell_of(tuple(q), grid)) in neighbor_cells(tuple(p), grid)

    def test_exact_distance_rule(self):
        # Brute-force re-derivation of the relation over random probes.
        grid = Grid(grid_params(0.31, 64))
        r = grid.params.r
        s = grid.params.s
        n = grid.n
        rng = np.random.default_rng(44)
        for x, y in rng.uniform(0.0, 1.0, (60, 2)):
            expect = []
            for i in range(n):
                for j in range(n):
                    dx = max(i * s - x, x - (i + 1) * s, 0.0)
                    dy = max(j * s - y, y - (j + 1) * s, 0.0)
                    if dx * dx + dy * dy <= r * r:
                        expect.append((i, j))
            assert neighbor_cells((x, y), grid) == expect

    def test_cardinality_bound(self):
        rng = np.random.default_rng(77)
        for r in (0.5, 0.2, 0.09, 0.033):
            grid = Grid(grid_params(r, 64))
            bound = math.ceil(r / grid.params.s + 2) ** 2
            for x, y in rng.uniform(0.0, 1.0, (120, 2)):
                assert len(neighbor_cells((x, y), grid)) <= bound
