"""Waypoint pursuit with PID heading control.

Feeds on the estimated pose, emits (v, omega) commands. Speed is shaped by
cos(heading error), clamped at zero (no reversing), and ramps down linearly
inside the slowdown radius of the final waypoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyPathError, NonPositiveTimestepError
from .gridmap import WorldPoint
from .vehicle import ControlInput, RobotState, wrap_angle

_KI_EPS = 1e-9


@dataclass(frozen=True)
class FollowerConfig:
    lookahead: float = 0.1
    kp: float = 2.0
    ki: float = 0.0
    kd: float = 0.1
    v_max: float = 0.22
    omega_max: float = 2.84
    goal_tolerance: float = 0.05
    slowdown_radius: float = 0.2

    def __post_init__(self):
        if self.lookahead <= 0 or self.v_max <= 0 or self.omega_max <= 0:
            raise ValueError("lookahead, v_max, omega_max must be > 0")
        if self.goal_tolerance <= 0 or self.slowdown_radius < self.goal_tolerance:
            raise ValueError("need slowdown_radius >= goal_tolerance > 0")


@dataclass(frozen=True)
class FollowerState:
    target_index: int = 0
    integral_error: float = 0.0
    prev_error: float = 0.0


def next_waypoint(path: list[WorldPoint], s: RobotState, fs: FollowerState,
                  lookahead: float) -> tuple[WorldPoint, FollowerState]:
    """Advance past every waypoint within lookahead, never past the last."""
    if not path:
        raise EmptyPathError("path has no waypoints")
    idx = fs.target_index
    while idx < len(path) - 1 and math.hypot(path[idx].x - s.x, path[idx].y - s.y) <= lookahead:
        idx += 1
    if idx != fs.target_index:
        fs = FollowerState(idx, fs.integral_error, fs.prev_error)
    return path[idx], fs


def control_step(s: RobotState, target: WorldPoint, fs: FollowerState,
                 cfg: FollowerConfig, dt: float,
                 dist_to_goal: float | None = None) -> tuple[ControlInput, FollowerState]:
    """One PID step on heading error toward target.

    dist_to_goal is the distance to the FINAL waypoint, used for the slowdown
    ramp; pass None when far from the goal.
    """
    if not dt > 0:
        raise NonPositiveTimestepError(f"dt must be > 0, got {dt}")
    e = wrap_angle(math.atan2(target.y - s.y, target.x - s.x) - s.gamma)

    integral = fs.integral_error + e * dt
    bound = cfg.omega_max / max(cfg.ki, _KI_EPS)  # anti-windup
    integral = min(max(integral, -bound), bound)

    omega = cfg.kp * e + cfg.ki * integral + cfg.kd * (e - fs.prev_error) / dt
    omega = min(max(omega, -cfg.omega_max), cfg.omega_max)

    v = cfg.v_max * max(0.0, math.cos(e))
    if dist_to_goal is not None and dist_to_goal < cfg.slowdown_radius:
        v *= max(0.0, dist_to_goal / cfg.slowdown_radius)

    return ControlInput(v, omega), FollowerState(fs.target_index, integral, e)


def at_goal(s: RobotState, goal: WorldPoint, tol: float) -> bool:
    """Inclusive Euclidean check against the goal point."""
    if tol <= 0:
        raise ValueError("tolerance must be > 0")
    return math.hypot(goal.x - s.x, goal.y - s.y) <= tol
