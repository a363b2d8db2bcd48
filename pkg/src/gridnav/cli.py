"""Command-line interface: plan, compare, simulate, fixture.

Exit codes: 0 success, 1 no path / not reached, 2 invalid input, 3 IO failure.
With --json the only bytes on stdout are one JSON object; logs go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import fixtures
from .errors import GridNavError, MapError, NoPathError, ScenarioError
from .estimation import NoiseConfig
from .gridmap import WorldPoint, inflate, load_map
from .guidance import FollowerConfig
from .planners import Heuristic, astar, dijkstra
from .search_graph import SearchProblem, snap_to_free
from .sim import (
    OUTCOME_REACHED,
    Scenario,
    compare_planners,
    load_scenario,
    render,
    run_scenario,
    trace_to_csv,
)
from .vehicle import RobotState

EXIT_OK = 0
EXIT_NO_PATH = 1
EXIT_BAD_INPUT = 2
EXIT_IO = 3


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _parse_point(text: str) -> WorldPoint:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'X,Y', got {text!r}")
    return WorldPoint(float(parts[0]), float(parts[1]))


def _snap_endpoint(grid, p: WorldPoint, label: str):
    idx = snap_to_free(grid, p)
    from .gridmap import grid_to_world, world_to_grid
    from .errors import OutOfBoundsError
    try:
        direct = world_to_grid(grid, p)
        moved = direct != idx
    except OutOfBoundsError:
        moved = True
    if moved:
        c = grid_to_world(grid, idx)
        _log(f"warning: {label} {p.x},{p.y} is not on a Free cell; "
             f"snapped to cell {idx} (center {c.x:.3f},{c.y:.3f})")
    return idx


def _plan_once(args):
    grid = load_map(args.map)
    if args.inflate > 0:
        grid = inflate(grid, args.inflate)
    start = _snap_endpoint(grid, _parse_point(args.start), "start")
    goal = _snap_endpoint(grid, _parse_point(args.goal), "goal")
    return grid, SearchProblem(grid, start, goal)


def cmd_plan(args) -> int:
    try:
        grid, problem = _plan_once(args)
    except (ValueError, GridNavError) as e:
        _log(f"error: {e}")
        return EXIT_BAD_INPUT

    heuristic = Heuristic(args.heuristic)
    if args.algorithm == "astar" and args.heuristic_defaulted:
        _log("note: no --heuristic given, defaulting to diagonal")
    try:
        if args.algorithm == "dijkstra":
            result = dijkstra(problem)
        else:
            result = astar(problem, heuristic)
    except NoPathError:
        if args.json:
            print(json.dumps({"no_path": True, "algorithm": args.algorithm}))
        else:
            _log("no path found")
        return EXIT_NO_PATH

    if args.render:
        try:
            render(grid, result, None, args.render)
        except IOError as e:
            _log(f"error: {e}")
            return EXIT_IO

    summary = {
        "algorithm": args.algorithm,
        "heuristic": heuristic.value,
        "cost": result.cost,
        "expanded": result.expanded,
        "path_len": len(result.path),
        "runtime_ms": result.wall_time * 1000.0,
    }
    if args.json:
        print(json.dumps(summary))
    else:
        print(f"{args.algorithm} ({heuristic.value}): cost={result.cost:.6f} "
              f"expanded={result.expanded} path_len={len(result.path)} "
              f"runtime={result.wall_time * 1000.0:.2f}ms")
    return EXIT_OK


def _cli_scenario(args) -> Scenario:
    return Scenario(
        map_path=args.map,
        inflation_radius=args.inflate,
        start_pose=RobotState(*_parse_point(args.start), 0.0),
        goal=_parse_point(args.goal),
        algorithm="astar",
        heuristic=Heuristic(args.heuristic),
        landmarks=[],
        sensor_mode="direct_pose",
        sensor_max_range=1.0,
        noise=NoiseConfig.zero(),
        dt=0.1,
        max_steps=1,
        follower=FollowerConfig(),
        seed=0,
    )


def cmd_compare(args) -> int:
    try:
        sc = _cli_scenario(args)
        record = compare_planners(sc)
    except (ValueError, GridNavError) as e:
        _log(f"error: {e}")
        return EXIT_BAD_INPUT

    both_solved = "expanded_ratio" in record
    if args.render_dir and both_solved:
        try:
            os.makedirs(args.render_dir, exist_ok=True)
            grid = load_map(args.map)
            if args.inflate > 0:
                grid = inflate(grid, args.inflate)
            start = snap_to_free(grid, _parse_point(args.start))
            goal = snap_to_free(grid, _parse_point(args.goal))
            problem = SearchProblem(grid, start, goal)
            render(grid, dijkstra(problem), None,
                   os.path.join(args.render_dir, "dijkstra.ppm"))
            render(grid, astar(problem, Heuristic(args.heuristic)), None,
                   os.path.join(args.render_dir, "astar.ppm"))
        except IOError as e:
            _log(f"error: {e}")
            return EXIT_IO

    if args.json:
        print(json.dumps(record))
    else:
        for name in ("dijkstra", "astar"):
            r = record[name]
            if r.get("no_path"):
                print(f"{name}: no path")
            else:
                print(f"{name}: cost={r['cost']:.6f} expanded={r['expanded']} "
                      f"runtime={r['runtime_ms']:.2f}ms")
        if both_solved:
            print(f"expanded_ratio={record['expanded_ratio']:.4f} "
                  f"cost_delta={record['cost_delta']:.2e}")
    return EXIT_OK if both_solved else EXIT_NO_PATH


def cmd_simulate(args) -> int:
    try:
        sc = load_scenario(args.scenario, seed_override=args.seed)
    except ScenarioError as e:
        _log(f"error: {e}")
        return EXIT_BAD_INPUT

    try:
        trace = run_scenario(sc)
    except (MapError, GridNavError) as e:
        _log(f"error: {e}")
        return EXIT_BAD_INPUT

    try:
        if args.trace:
            with open(args.trace, "w") as f:
                f.write(trace_to_csv(trace))
        if args.render:
            grid = load_map(sc.map_path)
            render(grid, trace.plan, trace, args.render)
    except (OSError, IOError) as e:
        _log(f"error: {e}")
        return EXIT_IO

    summary = {
        "outcome": trace.outcome,
        "steps": len(trace.records),
        "final_error": trace.final_error,
    }
    if args.json:
        print(json.dumps(summary))
    else:
        print(f"outcome={trace.outcome} steps={len(trace.records)} "
              f"final_error={trace.final_error:.4f}m")
    return EXIT_OK if trace.outcome == OUTCOME_REACHED else EXIT_NO_PATH


def cmd_fixture(args) -> int:
    try:
        path = fixtures.make_fixture(args.kind, args.width, args.height,
                                     args.out, density=args.density,
                                     seed=args.seed)
    except ValueError as e:
        _log(f"error: {e}")
        return EXIT_BAD_INPUT
    except OSError as e:
        _log(f"error: {e}")
        return EXIT_IO
    print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gridnav",
                                description="Grid path planning and navigation simulation")
    sub = p.add_subparsers(dest="command", required=True)

    def add_map_flags(sp):
        sp.add_argument("--map", required=True, help="map descriptor YAML")
        sp.add_argument("--start", required=True, help="start as 'X,Y' (meters)")
        sp.add_argument("--goal", required=True, help="goal as 'X,Y' (meters)")
        sp.add_argument("--heuristic", default=None,
                        choices=[h.value for h in Heuristic])
        sp.add_argument("--inflate", type=float, default=0.0,
                        help="obstacle inflation radius (meters)")
        sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("plan", help="run one planner on one map")
    add_map_flags(sp)
    sp.add_argument("--algorithm", default="astar", choices=["dijkstra", "astar"])
    sp.add_argument("--render", help="write a PPM render of the search")
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("compare", help="run dijkstra vs astar on the same problem")
    add_map_flags(sp)
    sp.add_argument("--render-dir", help="write side-by-side expansion renders here")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("simulate", help="run a closed-loop scenario")
    sp.add_argument("--scenario", required=True, help="scenario JSON file")
    sp.add_argument("--trace", help="write the per-step CSV trace here")
    sp.add_argument("--render", help="write a PPM render here")
    sp.add_argument("--seed", type=int, default=None, help="override scenario seed")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("fixture", help="generate a map fixture")
    sp.add_argument("--kind", required=True, choices=["empty", "wall", "random"])
    sp.add_argument("--width", type=int, required=True)
    sp.add_argument("--height", type=int, required=True)
    sp.add_argument("--density", type=float, default=0.2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True, help="output directory")
    sp.set_defaults(func=cmd_fixture)

    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if hasattr(args, "heuristic"):
        args.heuristic_defaulted = args.heuristic is None
        if args.heuristic is None:
            args.heuristic = Heuristic.DIAGONAL.value
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
