import math

import numpy as np
import pytest

from gridnav.errors import InvalidProblemError, NoFreeCellError
from gridnav.gridmap import GridIndex, Occupancy, OccupancyGrid, WorldPoint, grid_to_world
from gridnav.search_graph import SQRT2, SearchProblem, snap_to_free, successors

from conftest import grid_from_rows, random_grid


def all_free(n=5):
    return grid_from_rows(["." * n] * n)


class TestSearchProblem:
    def test_rejects_occupied_start(self, wall_grid):
        with pytest.raises(InvalidProblemError):
            SearchProblem(wall_grid, GridIndex(2, 0), GridIndex(4, 4))

    def test_rejects_out_of_bounds_goal(self):
        with pytest.raises(InvalidProblemError):
            SearchProblem(all_free(), GridIndex(0, 0), GridIndex(9, 9))


class TestSuccessors:
    def test_interior_node_all_free(self):
        p = SearchProblem(all_free(), GridIndex(0, 0), GridIndex(4, 4))
        out = successors(p, GridIndex(2, 2))
        assert len(out) == 8
        costs = [c for _, c in out]
        assert costs.count(1.0) == 4
        assert sum(1 for c in costs if c == pytest.approx(SQRT2)) == 4

    def test_corner_clipping(self):
        p = SearchProblem(all_free(), GridIndex(0, 0), GridIndex(4, 4))
        assert len(successors(p, GridIndex(0, 0))) == 3

    def test_order_is_n_ne_e_se_s_sw_w_nw(self):
        p = SearchProblem(all_free(), GridIndex(0, 0), GridIndex(4, 4))
        out = [m for m, _ in successors(p, GridIndex(2, 2))]
        assert out == [
            GridIndex(2, 3), GridIndex(3, 3), GridIndex(3, 2), GridIndex(3, 1),
            GridIndex(2, 1), GridIndex(1, 1), GridIndex(1, 2), GridIndex(1, 3),
        ]

    def test_no_corner_cutting_on_wall(self, wall_grid):
        # diagonal (1,3)->(2,4) must be rejected: shared cardinal (2,3) is a wall
        p = SearchProblem(wall_grid, GridIndex(0, 0), GridIndex(4, 4))
        out = [m for m, _ in successors(p, GridIndex(1, 3))]
        assert GridIndex(2, 4) not in out
        assert GridIndex(2, 3) not in out  # occupied itself

    def test_symmetric_on_random_grids(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            grid = random_grid(rng, 8, 8, 0.3)
            free = list(zip(*np.nonzero(grid.cells == Occupancy.FREE)))
            if len(free) < 2:
                continue
            p = SearchProblem(grid, GridIndex(free[0][1], free[0][0]),
                              GridIndex(free[-1][1], free[-1][0]))
            for r, c in free:
                n = GridIndex(c, r)
                for m, cost in successors(p, n):
                    back = successors(p, m)
                    assert (n, cost) in back

    def test_never_yields_occupied_or_unknown(self):
        grid = grid_from_rows(["?.#", "...", ".#."])
        p = SearchProblem(grid, GridIndex(0, 1), GridIndex(2, 1))
        for r in range(3):
            for c in range(3):
                for m, _ in successors(p, GridIndex(c, r)):
                    assert grid.cells[m.row, m.col] == Occupancy.FREE


class TestSnapToFree:
    def test_exact_center_of_free_cell(self):
        grid = all_free()
        center = grid_to_world(grid, GridIndex(3, 2))
        assert snap_to_free(grid, center) == GridIndex(3, 2)

    def test_occupied_cell_with_free_neighbor(self):
        grid = grid_from_rows(["...", ".#.", "..."])
        # center of the occupied middle cell: four free cardinals equidistant,
        # tie-break selects smallest row then col -> (1,0)
        assert snap_to_free(grid, WorldPoint(1.5, 1.5)) == GridIndex(1, 0)

    def test_tie_break_smaller_row_then_col(self):
        # only (1,2) and (2,1) free; probe equidistant from both
        grid = grid_from_rows(["#.#", "##.", "###"])
        assert grid.is_free(GridIndex(1, 2)) and grid.is_free(GridIndex(2, 1))
        assert snap_to_free(grid, WorldPoint(2.0, 2.0)) == GridIndex(2, 1)

    def test_no_free_cells(self):
        grid = grid_from_rows(["##", "##"])
        with pytest.raises(NoFreeCellError):
            snap_to_free(grid, WorldPoint(0.0, 0.0))

    def test_matches_exhaustive_argmin(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            grid = random_grid(rng, 7, 7, 0.4)
            if not (grid.cells == Occupancy.FREE).any():
                continue
            p = WorldPoint(rng.uniform(-2, 9), rng.uniform(-2, 9))
            best, best_key = None, None
            for r in range(grid.height):
                for c in range(grid.width):
                    if grid.cells[r, c] != Occupancy.FREE:
                        continue
                    w = grid_to_world(grid, GridIndex(c, r))
                    key = ((w.x - p.x) ** 2 + (w.y - p.y) ** 2, r, c)
                    if best_key is None or key < best_key:
                        best, best_key = GridIndex(c, r), key
            assert snap_to_free(grid, p) == best
