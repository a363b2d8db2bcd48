"""Benchmark the numba search kernel against the pure numpy/heapq fallback.

Usage: python3 benchmarks/bench_planners.py [--repeats N]
"""

import argparse
import os
import statistics
import sys
import tempfile
import time

import numpy as np

from gridnav.gridmap import GridIndex, Occupancy, OccupancyGrid
from gridnav.planners import Heuristic, astar, dijkstra
from gridnav.search_graph import SearchProblem


def make_case(kind, size, seed=0):
    rng = np.random.default_rng(seed)
    cells = np.zeros((size, size), dtype=np.int8)
    if kind == "wall":
        cells[: int(size * 0.8), size // 2] = Occupancy.OCCUPIED
    elif kind == "random":
        cells[rng.random((size, size)) < 0.25] = Occupancy.OCCUPIED
        cells[0, 0] = Occupancy.FREE
        cells[size - 1, size - 1] = Occupancy.FREE
    grid = OccupancyGrid(size, size, 0.05, (0, 0, 0), cells)
    return SearchProblem(grid, GridIndex(0, 0), GridIndex(size - 1, size - 1))


def time_run(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    cases = [
        ("empty 100x100", make_case("empty", 100)),
        ("wall 100x100", make_case("wall", 100)),
        ("random 200x200", make_case("random", 200, seed=3)),
        ("empty 400x400", make_case("empty", 400)),
    ]
    runs = [("dijkstra", lambda p: dijkstra(p)),
            ("astar/diagonal", lambda p: astar(p, Heuristic.DIAGONAL))]

    # warm up the numba compilation outside the timed region
    os.environ["GRIDNAV_NO_NUMBA"] = "0"
    astar(make_case("empty", 10), Heuristic.DIAGONAL)

    print(f"{'case':<16} {'algorithm':<15} {'numba (ms)':>11} {'numpy (ms)':>11} "
          f"{'speedup':>8}")
    for case_name, problem in cases:
        for run_name, fn in runs:
            timings = {}
            for backend, flag in (("numba", "0"), ("numpy", "1")):
                os.environ["GRIDNAV_NO_NUMBA"] = flag
                best, _ = time_run(lambda: fn(problem), args.repeats)
                timings[backend] = best
            speedup = timings["numpy"] / timings["numba"]
            print(f"{case_name:<16} {run_name:<15} {timings['numba'] * 1e3:>11.2f} "
                  f"{timings['numpy'] * 1e3:>11.2f} {speedup:>7.1f}x")


if __name__ == "__main__":
    main()
