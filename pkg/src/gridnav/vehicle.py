"""Differential-drive kinematics: nonlinear propagation and its linearization.

State is (x, y, gamma) with gamma wrapped to (-pi, pi]; controls are
(v, omega). The nonlinear model is ground truth for propagation; the
Jacobian and control matrix serve covariance propagation in the EKF.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import NonPositiveTimestepError


class RobotState(NamedTuple):
    x: float
    y: float
    gamma: float


class ControlInput(NamedTuple):
    v: float
    omega: float


def wrap_angle(a: float) -> float:
    """Wrap an angle into (-pi, pi]; exact identity for in-range inputs."""
    if -math.pi < a <= math.pi:
        return a
    w = (a + math.pi) % (2.0 * math.pi) - math.pi
    if w == -math.pi:
        w = math.pi
    return w


def _check_dt(dt: float) -> None:
    if not dt > 0:
        raise NonPositiveTimestepError(f"dt must be > 0, got {dt}")


def propagate(s: RobotState, u: ControlInput, dt: float) -> RobotState:
    """x += v cos(gamma) dt, y += v sin(gamma) dt, gamma += omega dt (wrapped)."""
    _check_dt(dt)
    return RobotState(
        s.x + u.v * math.cos(s.gamma) * dt,
        s.y + u.v * math.sin(s.gamma) * dt,
        wrap_angle(s.gamma + u.omega * dt),
    )


def motion_jacobian(s: RobotState, u: ControlInput, dt: float) -> np.ndarray:
    """3x3 partials of the propagation model with respect to the state."""
    _check_dt(dt)
    return np.array([
        [1.0, 0.0, -u.v * math.sin(s.gamma) * dt],
        [0.0, 1.0, u.v * math.cos(s.gamma) * dt],
        [0.0, 0.0, 1.0],
    ])


def control_matrix(s: RobotState, dt: float) -> np.ndarray:
    """3x2 map from controls to state increments: propagate = s + B @ u pre-wrap."""
    _check_dt(dt)
    return np.array([
        [math.cos(s.gamma) * dt, 0.0],
        [math.sin(s.gamma) * dt, 0.0],
        [0.0, dt],
    ])
