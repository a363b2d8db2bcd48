import math

import numpy as np
import pytest

from gridnav.gridmap import GridIndex, Occupancy, OccupancyGrid

SQRT2 = math.sqrt(2.0)

_CHARS = {".": Occupancy.FREE, "#": Occupancy.OCCUPIED, "?": Occupancy.UNKNOWN}


def grid_from_rows(rows, resolution=1.0, origin=(0.0, 0.0, 0.0)):
    """Build a grid from ASCII art; the FIRST string is the TOP row of the map."""
    height = len(rows)
    width = len(rows[0])
    cells = np.empty((height, width), dtype=np.int8)
    for i, row in enumerate(rows):
        assert len(row) == width
        for c, ch in enumerate(row):
            cells[height - 1 - i, c] = _CHARS[ch]
    return OccupancyGrid(width=width, height=height, resolution=resolution,
                         origin=origin, cells=cells)


# wall at col 2, rows 0..3, gap at the top row
WALL_ROWS = [
    ".....",
    "..#..",
    "..#..",
    "..#..",
    "..#..",
]


@pytest.fixture
def wall_grid():
    return grid_from_rows(WALL_ROWS)


def random_grid(rng, width, height, density):
    cells = np.where(rng.random((height, width)) < density,
                     np.int8(Occupancy.OCCUPIED), np.int8(Occupancy.FREE))
    return OccupancyGrid(width=width, height=height, resolution=1.0,
                         origin=(0.0, 0.0, 0.0), cells=cells)


def oracle_shortest_cost(grid, start: GridIndex, goal: GridIndex) -> float:
    """Independent shortest-path oracle: explicit sparse graph + scipy dijkstra."""
    import scipy.sparse as sp
    from scipy.sparse.csgraph import dijkstra as sp_dijkstra

    free = grid.cells == Occupancy.FREE
    height, width = free.shape
    n = height * width
    rows, cols, data = [], [], []
    for r in range(height):
        for c in range(width):
            if not free[r, c]:
                continue
            for dr in (-1, 0, 1):
                for dc in (-1, 0, 1):
                    if dr == 0 and dc == 0:
                        continue
                    nr, nc = r + dr, c + dc
                    if not (0 <= nr < height and 0 <= nc < width):
                        continue
                    if not free[nr, nc]:
                        continue
                    if dr != 0 and dc != 0 and not (free[r + dr, c] and free[r, c + dc]):
                        continue
                    rows.append(r * width + c)
                    cols.append(nr * width + nc)
                    data.append(SQRT2 if dr != 0 and dc != 0 else 1.0)
    graph = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
    dist = sp_dijkstra(graph, indices=start.row * width + start.col)
    return float(dist[goal.row * width + goal.col])


@pytest.fixture(params=["numba", "python"])
def backend(request, monkeypatch):
    """Run planner tests against both engines."""
    monkeypatch.setenv("GRIDNAV_NO_NUMBA", "1" if request.param == "python" else "0")
    return request.param


DEFAULT_NOISE = {
    "process_cov": (2e-6 * np.eye(3)).tolist(),
    "meas_cov": [[1e-4, 0.0], [0.0, 3e-4]],
    "pose_meas_cov": [[1e-4, 0.0, 0.0], [0.0, 1e-4, 0.0], [0.0, 0.0, 3e-4]],
}

ZERO_NOISE = {
    "process_cov": np.zeros((3, 3)).tolist(),
    "meas_cov": np.zeros((2, 2)).tolist(),
    "pose_meas_cov": np.zeros((3, 3)).tolist(),
}


def make_scenario(map_path, **overrides):
    """Default small scenario dict; override any top-level field."""
    raw = {
        "map_path": map_path,
        "inflation_radius": 0.05,
        "start_pose": {"x": 0.1, "y": 0.1, "gamma": 0.0},
        "goal": {"x": 0.85, "y": 0.85},
        "algorithm": "astar",
        "heuristic": "diagonal",
        "landmarks": [
            {"id": 0, "x": 0.0, "y": 0.0},
            {"id": 1, "x": 1.0, "y": 0.0},
            {"id": 2, "x": 0.0, "y": 1.0},
            {"id": 3, "x": 1.0, "y": 1.0},
        ],
        "sensor_mode": "range_bearing",
        "sensor_max_range": 2.0,
        "noise": DEFAULT_NOISE,
        "dt": 0.1,
        "max_steps": 3000,
        "follower": {
            "lookahead": 0.1,
            "kp": 2.0,
            "ki": 0.0,
            "kd": 0.1,
            "v_max": 0.22,
            "omega_max": 2.84,
            "goal_tolerance": 0.05,
            "slowdown_radius": 0.2,
        },
        "seed": 1,
    }
    raw.update(overrides)
    return raw
