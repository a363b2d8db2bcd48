"""The planning task as a search problem over the 8-connected grid.

Cardinal moves cost 1 cell, diagonals sqrt(2). A diagonal move is rejected when
either of its two adjacent cardinal cells is not Free (no corner cutting).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidProblemError, NoFreeCellError, OutOfBoundsError
from .gridmap import GridIndex, OccupancyGrid, WorldPoint

SQRT2 = math.sqrt(2.0)

# successor order fixed for reproducible expansion: N, NE, E, SE, S, SW, W, NW
# (drow, dcol) with row increasing northward
NEIGHBOR_OFFSETS: tuple[tuple[int, int], ...] = (
    (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1),
)


@dataclass(frozen=True)
class SearchProblem:
    grid: OccupancyGrid
    start: GridIndex
    goal: GridIndex
    cardinal_cost: float = 1.0
    diagonal_cost: float = SQRT2

    def __post_init__(self):
        if self.cardinal_cost <= 0 or self.diagonal_cost < self.cardinal_cost:
            raise InvalidProblemError("need 0 < cardinal_cost <= diagonal_cost")
        for name, idx in (("start", self.start), ("goal", self.goal)):
            if not self.grid.in_bounds(idx):
                raise InvalidProblemError(f"{name} {idx} is out of bounds")
            if not self.grid.is_free(idx):
                raise InvalidProblemError(f"{name} {idx} is not a Free cell")


def successors(problem: SearchProblem, n: GridIndex) -> list[tuple[GridIndex, float]]:
    """Legal 8-neighbor moves from n with their step costs, in N..NW order."""
    grid = problem.grid
    if not grid.in_bounds(n):
        raise OutOfBoundsError(f"node {n} is out of bounds")
    out: list[tuple[GridIndex, float]] = []
    for dr, dc in NEIGHBOR_OFFSETS:
        m = GridIndex(n.col + dc, n.row + dr)
        if not grid.is_free(m):
            continue
        if dr != 0 and dc != 0:
            # corner rule: both shared cardinal cells must be Free
            if not grid.is_free(GridIndex(n.col, n.row + dr)):
                continue
            if not grid.is_free(GridIndex(n.col + dc, n.row)):
                continue
            out.append((m, problem.diagonal_cost))
        else:
            out.append((m, problem.cardinal_cost))
    return out


def snap_to_free(grid: OccupancyGrid, p: WorldPoint) -> GridIndex:
    """Free cell whose center is nearest to p; ties to smaller row, then col."""
    free = grid.free_mask()
    if not free.any():
        raise NoFreeCellError("grid has no Free cells")
    rows, cols = np.nonzero(free)
    ox, oy, oth = grid.origin
    lx = (cols + 0.5) * grid.resolution
    ly = (rows + 0.5) * grid.resolution
    if oth != 0.0:
        c, s = math.cos(oth), math.sin(oth)
        lx, ly = c * lx - s * ly, s * lx + c * ly
    d2 = (ox + lx - p.x) ** 2 + (oy + ly - p.y) ** 2
    # np.nonzero yields row-major order, so argmin's first hit is the tie-break
    best = int(np.argmin(d2))
    return GridIndex(int(cols[best]), int(rows[best]))
