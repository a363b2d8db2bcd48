"""Closed-loop simulation: plan once, then per tick actuate with process noise,
sense landmarks, filter, and steer from the filtered estimate.

All randomness comes from one numpy Generator (PCG64) seeded from the
scenario, so a seed fully determines the trace. Renders are binary PPM (P6);
traces export to CSV.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    DegenerateRangeError,
    NoPathError,
    OutOfBoundsError,
    ScenarioError,
)
from .estimation import (
    BeliefState,
    Landmark,
    NoiseConfig,
    RangeBearing,
    ekf_predict,
    ekf_update,
    ekf_update_pose,
    predict_measurement,
)
from .gridmap import (
    GridIndex,
    OccupancyGrid,
    Occupancy,
    WorldPoint,
    grid_to_world,
    inflate,
    load_map,
    world_to_grid,
)
from .guidance import FollowerConfig, FollowerState, at_goal, control_step, next_waypoint
from .planners import Heuristic, PlanResult, astar, dijkstra
from .search_graph import SearchProblem, snap_to_free
from .vehicle import ControlInput, RobotState, propagate, wrap_angle

OUTCOME_REACHED = "Reached"
OUTCOME_COLLIDED = "Collided"
OUTCOME_TIMEOUT = "Timeout"
OUTCOME_NO_PATH = "NoPath"

TRACE_CSV_HEADER = "step,true_x,true_y,true_gamma,est_x,est_y,est_gamma,cov_trace,v,omega"


@dataclass(frozen=True)
class Scenario:
    map_path: str
    inflation_radius: float
    start_pose: RobotState
    goal: WorldPoint
    algorithm: str  # "dijkstra" | "astar"
    heuristic: Heuristic
    landmarks: list[Landmark]
    sensor_mode: str  # "range_bearing" | "direct_pose"
    sensor_max_range: float
    noise: NoiseConfig
    dt: float
    max_steps: int
    follower: FollowerConfig
    seed: int

    def __post_init__(self):
        if self.dt <= 0:
            raise ScenarioError("dt must be > 0")
        if self.max_steps < 1:
            raise ScenarioError("max_steps must be >= 1")
        if self.sensor_max_range <= 0:
            raise ScenarioError("sensor_max_range must be > 0")
        if self.algorithm not in ("dijkstra", "astar"):
            raise ScenarioError(f"unknown algorithm '{self.algorithm}'")
        if self.sensor_mode not in ("range_bearing", "direct_pose"):
            raise ScenarioError(f"unknown sensor_mode '{self.sensor_mode}'")
        ids = [lm.id for lm in self.landmarks]
        if len(set(ids)) != len(ids):
            raise ScenarioError("landmark ids must be unique")


class StepRecord(NamedTuple):
    step: int
    true_state: RobotState
    est_mean: RobotState
    cov_trace: float
    control: ControlInput
    measurements: list[RangeBearing]


@dataclass
class SimTrace:
    records: list[StepRecord]
    outcome: str
    final_error: float
    plan: PlanResult | None
    dead_reckoning: list[RobotState] = field(default_factory=list)


def load_scenario(path: str, seed_override: int | None = None) -> Scenario:
    """Parse a scenario JSON file; missing fields raise ScenarioError by name."""
    try:
        with open(path) as f:
            raw = json.load(f)
    except FileNotFoundError:
        raise ScenarioError(f"scenario file not found: {path}")
    except json.JSONDecodeError as e:
        raise ScenarioError(f"scenario file is not valid JSON: {e}")
    if not isinstance(raw, dict):
        raise ScenarioError("scenario file must contain a JSON object")
    return scenario_from_dict(raw, base_dir=os.path.dirname(os.path.abspath(path)),
                              seed_override=seed_override)


def _require(raw: dict, key: str):
    if key not in raw:
        raise ScenarioError(f"scenario is missing required field '{key}'")
    return raw[key]


def _sub(raw: dict, parent: str, key: str):
    if key not in raw:
        raise ScenarioError(f"scenario field '{parent}' is missing key '{key}'")
    return raw[key]


def scenario_from_dict(raw: dict, base_dir: str = ".",
                       seed_override: int | None = None) -> Scenario:
    try:
        map_path = str(_require(raw, "map_path"))
        if not os.path.isabs(map_path):
            map_path = os.path.join(base_dir, map_path)
        sp = _require(raw, "start_pose")
        start_pose = RobotState(float(_sub(sp, "start_pose", "x")),
                                float(_sub(sp, "start_pose", "y")),
                                float(_sub(sp, "start_pose", "gamma")))
        gl = _require(raw, "goal")
        goal = WorldPoint(float(_sub(gl, "goal", "x")), float(_sub(gl, "goal", "y")))
        heuristic = Heuristic(str(_require(raw, "heuristic")))
        landmarks = [
            Landmark(int(_sub(lm, "landmarks", "id")),
                     float(_sub(lm, "landmarks", "x")),
                     float(_sub(lm, "landmarks", "y")))
            for lm in _require(raw, "landmarks")
        ]
        nz = _require(raw, "noise")
        noise = NoiseConfig(
            process_cov=np.array(_sub(nz, "noise", "process_cov"), dtype=float).reshape(3, 3),
            meas_cov=np.array(_sub(nz, "noise", "meas_cov"), dtype=float).reshape(2, 2),
            pose_meas_cov=np.array(_sub(nz, "noise", "pose_meas_cov"), dtype=float).reshape(3, 3),
        )
        fw = _require(raw, "follower")
        follower = FollowerConfig(
            lookahead=float(_sub(fw, "follower", "lookahead")),
            kp=float(_sub(fw, "follower", "kp")),
            ki=float(_sub(fw, "follower", "ki")),
            kd=float(_sub(fw, "follower", "kd")),
            v_max=float(_sub(fw, "follower", "v_max")),
            omega_max=float(_sub(fw, "follower", "omega_max")),
            goal_tolerance=float(_sub(fw, "follower", "goal_tolerance")),
            slowdown_radius=float(_sub(fw, "follower", "slowdown_radius")),
        )
        seed = int(_require(raw, "seed")) if seed_override is None else int(seed_override)
        return Scenario(
            map_path=map_path,
            inflation_radius=float(_require(raw, "inflation_radius")),
            start_pose=start_pose,
            goal=goal,
            algorithm=str(_require(raw, "algorithm")),
            heuristic=heuristic,
            landmarks=landmarks,
            sensor_mode=str(_require(raw, "sensor_mode")),
            sensor_max_range=float(_require(raw, "sensor_max_range")),
            noise=noise,
            dt=float(_require(raw, "dt")),
            max_steps=int(_require(raw, "max_steps")),
            follower=follower,
            seed=seed,
        )
    except (TypeError, ValueError) as e:
        raise ScenarioError(f"bad scenario field value: {e}")


def _noise_factor(cov: np.ndarray) -> np.ndarray | None:
    """Square-root factor F with F F^T = cov, or None for an all-zero cov."""
    if not np.any(cov):
        return None
    w, v = np.linalg.eigh(cov)
    return v * np.sqrt(np.clip(w, 0.0, None))


def plan_for_scenario(sc: Scenario) -> tuple[OccupancyGrid, OccupancyGrid, PlanResult | None]:
    """Load the map, inflate, snap endpoints, and plan once.

    Returns (raw grid, inflated grid, plan or None when disconnected).
    """
    grid = load_map(sc.map_path)
    inflated = inflate(grid, sc.inflation_radius)
    start = snap_to_free(inflated, WorldPoint(sc.start_pose.x, sc.start_pose.y))
    goal = snap_to_free(inflated, sc.goal)
    problem = SearchProblem(inflated, start, goal)
    try:
        if sc.algorithm == "dijkstra":
            plan = dijkstra(problem)
        else:
            plan = astar(problem, sc.heuristic)
    except NoPathError:
        return grid, inflated, None
    return grid, inflated, plan


def run_scenario(sc: Scenario) -> SimTrace:
    grid, inflated, plan = plan_for_scenario(sc)
    if plan is None:
        err = math.hypot(sc.goal.x - sc.start_pose.x, sc.goal.y - sc.start_pose.y)
        return SimTrace([], OUTCOME_NO_PATH, err, None)

    waypoints = [grid_to_world(inflated, i) for i in plan.path]
    goal_wp = waypoints[-1]
    cfg = sc.follower
    landmarks = sorted(sc.landmarks, key=lambda lm: lm.id)

    rng = np.random.default_rng(sc.seed)
    q_fac = _noise_factor(sc.noise.process_cov)
    r_fac = _noise_factor(sc.noise.meas_cov)
    pose_fac = _noise_factor(sc.noise.pose_meas_cov)

    true = sc.start_pose
    bel = BeliefState(sc.start_pose, np.zeros((3, 3)))
    dr = sc.start_pose  # dead-reckoning shadow: predict-only, never corrected
    fs = FollowerState()
    u = ControlInput(0.0, 0.0)

    records: list[StepRecord] = []
    dr_track: list[RobotState] = []
    outcome = OUTCOME_TIMEOUT

    for step in range(1, sc.max_steps + 1):
        # actuate: true state moves under last command plus process noise
        true = propagate(true, u, sc.dt)
        if q_fac is not None:
            w = q_fac @ rng.standard_normal(3)
            true = RobotState(true.x + w[0], true.y + w[1],
                              wrap_angle(true.gamma + w[2]))

        # sense from the TRUE state
        measurements: list[RangeBearing] = []
        pose_obs: RobotState | None = None
        if sc.sensor_mode == "range_bearing":
            for lm in landmarks:
                if math.hypot(true.x - lm.x, true.y - lm.y) > sc.sensor_max_range:
                    continue
                try:
                    z = predict_measurement(true, lm)
                except DegenerateRangeError:
                    continue
                if r_fac is not None:
                    e = r_fac @ rng.standard_normal(2)
                    z = RangeBearing(lm.id, z.r + e[0], wrap_angle(z.b + e[1]))
                measurements.append(z)
        else:
            pose_obs = true
            if pose_fac is not None:
                e = pose_fac @ rng.standard_normal(3)
                pose_obs = RobotState(true.x + e[0], true.y + e[1],
                                      wrap_angle(true.gamma + e[2]))

        # filter
        bel = ekf_predict(bel, u, sc.dt, sc.noise)
        dr = propagate(dr, u, sc.dt)
        if sc.sensor_mode == "range_bearing":
            by_id = {lm.id: lm for lm in landmarks}
            for z in measurements:
                try:
                    bel = ekf_update(bel, z, by_id[z.landmark_id], sc.noise)
                except DegenerateRangeError:
                    continue
        elif pose_obs is not None:
            bel = ekf_update_pose(bel, pose_obs, sc.noise)

        # guide from the estimate
        target, fs = next_waypoint(waypoints, bel.mean, fs, cfg.lookahead)
        dist_goal = math.hypot(goal_wp.x - bel.mean.x, goal_wp.y - bel.mean.y)
        u, fs = control_step(bel.mean, target, fs, cfg, sc.dt, dist_goal)

        records.append(StepRecord(step, true, bel.mean,
                                  float(np.trace(bel.cov)), u, measurements))
        dr_track.append(dr)

        # terminate: collision on the UNinflated grid beats everything
        try:
            cell = world_to_grid(grid, WorldPoint(true.x, true.y))
            collided = grid.cells[cell.row, cell.col] != Occupancy.FREE
        except OutOfBoundsError:
            collided = True
        if collided:
            outcome = OUTCOME_COLLIDED
            break
        if at_goal(true, goal_wp, cfg.goal_tolerance):
            outcome = OUTCOME_REACHED
            break

    final_error = math.hypot(goal_wp.x - true.x, goal_wp.y - true.y)
    return SimTrace(records, outcome, final_error, plan, dr_track)


def trace_to_csv(trace: SimTrace) -> str:
    lines = [TRACE_CSV_HEADER]
    for rec in trace.records:
        t, e = rec.true_state, rec.est_mean
        lines.append(str(rec.step) + "," + ",".join(repr(float(v)) for v in (
            t.x, t.y, t.gamma, e.x, e.y, e.gamma,
            rec.cov_trace, rec.control.v, rec.control.omega,
        )))
    return "\n".join(lines) + "\n"


def compare_planners(sc: Scenario) -> dict:
    """Run dijkstra and astar on the identical problem; report both plus deltas."""
    grid = load_map(sc.map_path)
    inflated = inflate(grid, sc.inflation_radius)
    start = snap_to_free(inflated, WorldPoint(sc.start_pose.x, sc.start_pose.y))
    goal = snap_to_free(inflated, sc.goal)
    problem = SearchProblem(inflated, start, goal)

    def run(fn):
        try:
            return fn()
        except NoPathError:
            return None

    d = run(lambda: dijkstra(problem))
    a = run(lambda: astar(problem, sc.heuristic))

    def summary(res: PlanResult | None) -> dict:
        if res is None:
            return {"no_path": True}
        return {
            "cost": res.cost,
            "expanded": res.expanded,
            "runtime_ms": res.wall_time * 1000.0,
            "path_len": len(res.path),
        }

    out = {"dijkstra": summary(d), "astar": summary(a),
           "heuristic": sc.heuristic.value}
    if d is not None and a is not None:
        out["expanded_ratio"] = a.expanded / d.expanded
        out["cost_delta"] = abs(a.cost - d.cost)
        out["time_ratio"] = (a.wall_time / d.wall_time) if d.wall_time > 0 else None
    return out


# --- rendering ---

COLOR_FREE = (255, 255, 255)
COLOR_OCCUPIED = (0, 0, 0)
COLOR_UNKNOWN = (160, 160, 160)
COLOR_EXPANDED = (195, 215, 250)
COLOR_PATH = (220, 50, 50)
COLOR_TRUE = (40, 160, 40)
COLOR_EST = (60, 80, 220)


def _world_to_pixel(grid: OccupancyGrid, p: WorldPoint, scale: int) -> tuple[int, int]:
    ox, oy, oth = grid.origin
    dx, dy = p.x - ox, p.y - oy
    if oth != 0.0:
        c, s = math.cos(-oth), math.sin(-oth)
        dx, dy = c * dx - s * dy, s * dx + c * dy
    col_f = dx / grid.resolution
    row_f = dy / grid.resolution
    px = int(round(col_f * scale))
    py = int(round((grid.height - row_f) * scale))
    return px, py


def _draw_line(img: np.ndarray, p0: tuple[int, int], p1: tuple[int, int],
               color: tuple[int, int, int]) -> None:
    x0, y0 = p0
    x1, y1 = p1
    steps = max(abs(x1 - x0), abs(y1 - y0), 1)
    hh, ww = img.shape[:2]
    for i in range(steps + 1):
        x = round(x0 + (x1 - x0) * i / steps)
        y = round(y0 + (y1 - y0) * i / steps)
        if 0 <= x < ww and 0 <= y < hh:
            img[y, x] = color


def render(grid: OccupancyGrid, result: PlanResult | None,
           trace: SimTrace | None, out_path: str, scale: int = 4) -> None:
    """Raster view: occupancy base, expanded cells shaded, path and trajectories."""
    img = np.empty((grid.height * scale, grid.width * scale, 3), dtype=np.uint8)

    def blit(idx: GridIndex, color):
        y0 = (grid.height - 1 - idx.row) * scale
        x0 = idx.col * scale
        img[y0:y0 + scale, x0:x0 + scale] = color

    base = np.empty((grid.height, grid.width, 3), dtype=np.uint8)
    base[grid.cells == Occupancy.FREE] = COLOR_FREE
    base[grid.cells == Occupancy.OCCUPIED] = COLOR_OCCUPIED
    base[grid.cells == Occupancy.UNKNOWN] = COLOR_UNKNOWN
    img[:] = np.kron(base[::-1, :, :], np.ones((scale, scale, 1), dtype=np.uint8))

    if result is not None:
        for idx in result.expansion_order:
            if grid.cells[idx.row, idx.col] == Occupancy.FREE:
                blit(idx, COLOR_EXPANDED)
        for idx in result.path:
            blit(idx, COLOR_PATH)

    if trace is not None and trace.records:
        pts_true = [_world_to_pixel(grid, WorldPoint(r.true_state.x, r.true_state.y), scale)
                    for r in trace.records]
        pts_est = [_world_to_pixel(grid, WorldPoint(r.est_mean.x, r.est_mean.y), scale)
                   for r in trace.records]
        for pts, color in ((pts_true, COLOR_TRUE), (pts_est, COLOR_EST)):
            for a, b in zip(pts, pts[1:]):
                _draw_line(img, a, b, color)

    header = f"P6\n{img.shape[1]} {img.shape[0]}\n255\n".encode()
    try:
        with open(out_path, "wb") as f:
            f.write(header + img.tobytes())
    except OSError as e:
        raise IOError(f"cannot write render to {out_path}: {e}")
