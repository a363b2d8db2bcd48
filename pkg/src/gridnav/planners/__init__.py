"""Dijkstra and A* over the 8-connected grid with expansion telemetry.

Two interchangeable engines: a numba-jitted kernel (default) and a pure
numpy/heapq fallback. Set GRIDNAV_NO_NUMBA=1 to force the fallback; both
produce bit-identical results. Dijkstra is A* with the zero heuristic.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import CorruptParentChainError, NoPathError
from ..gridmap import GridIndex
from ..search_graph import SearchProblem
from ._common import H_DIAGONAL, H_EUCLIDEAN, H_MANHATTAN, H_ZERO, SQRT2
from . import _engine_py

try:
    from . import _engine_numba
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _engine_numba = None
    _HAVE_NUMBA = False


class Heuristic(Enum):
    ZERO = "zero"
    MANHATTAN = "manhattan"
    DIAGONAL = "diagonal"
    EUCLIDEAN = "euclidean"


_HEURISTIC_IDS = {
    Heuristic.ZERO: H_ZERO,
    Heuristic.MANHATTAN: H_MANHATTAN,
    Heuristic.DIAGONAL: H_DIAGONAL,
    Heuristic.EUCLIDEAN: H_EUCLIDEAN,
}


@dataclass(frozen=True)
class PlanResult:
    path: list[GridIndex]
    cost: float
    expanded: int
    expansion_order: list[GridIndex]
    wall_time: float


def numba_enabled() -> bool:
    return _HAVE_NUMBA and os.environ.get("GRIDNAV_NO_NUMBA", "0") in ("", "0")


def _engine():
    return _engine_numba if numba_enabled() else _engine_py


def heuristic_value(h: Heuristic, a: GridIndex, b: GridIndex) -> float:
    dx = float(abs(a.col - b.col))
    dy = float(abs(a.row - b.row))
    if h is Heuristic.ZERO:
        return 0.0
    if h is Heuristic.MANHATTAN:
        return dx + dy
    if h is Heuristic.DIAGONAL:
        return (dx + dy) + (SQRT2 - 2.0) * min(dx, dy)
    return math.sqrt(dx * dx + dy * dy)


def reconstruct_path(parents: dict[GridIndex, GridIndex], goal: GridIndex) -> list[GridIndex]:
    """Walk the parent chain from goal back to the start, returned start-first."""
    path = [goal]
    node = goal
    limit = len(parents) + 1
    while node in parents:
        node = parents[node]
        path.append(node)
        if len(path) > limit:
            raise CorruptParentChainError("parent chain contains a cycle")
    path.reverse()
    return path


def astar(problem: SearchProblem, h: Heuristic = Heuristic.DIAGONAL) -> PlanResult:
    """A* from problem.start to problem.goal; raises NoPathError when disconnected."""
    free = problem.grid.free_mask().astype(np.uint8)
    width = problem.grid.width
    t0 = time.perf_counter()
    found, parent, g, order, count = _engine().search(
        free,
        problem.start.row, problem.start.col,
        problem.goal.row, problem.goal.col,
        _HEURISTIC_IDS[h], problem.cardinal_cost, problem.diagonal_cost,
    )
    wall_time = time.perf_counter() - t0

    expansion_order = [GridIndex(int(n % width), int(n // width)) for n in order]
    if not found:
        raise NoPathError(f"no path from {problem.start} to {problem.goal}")

    parents: dict[GridIndex, GridIndex] = {}
    node = problem.goal.row * width + problem.goal.col
    while parent[node] >= 0:
        p = int(parent[node])
        parents[GridIndex(int(node % width), int(node // width))] = \
            GridIndex(int(p % width), int(p // width))
        node = p
    path = reconstruct_path(parents, problem.goal)

    goal_node = problem.goal.row * width + problem.goal.col
    return PlanResult(
        path=path,
        cost=float(g[goal_node]),
        expanded=count,
        expansion_order=expansion_order,
        wall_time=wall_time,
    )


def dijkstra(problem: SearchProblem) -> PlanResult:
    """Uniform-cost search: shares the A* engine with the zero heuristic."""
    return astar(problem, Heuristic.ZERO)
