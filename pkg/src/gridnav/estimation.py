"""EKF localization with a range-bearing landmark sensor model.

Bearing uses robot-minus-landmark atan2 arguments; the simulator synthesizes
readings with the same formula, so the filter and sensor are self-consistent.
Covariance updates use the Joseph form to preserve positive semidefiniteness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateRangeError, SingularInnovationError
from .vehicle import ControlInput, RobotState, motion_jacobian, propagate, wrap_angle

_SINGULARITY_TOL = 1e-12


class Landmark(NamedTuple):
    id: int
    x: float
    y: float


class RangeBearing(NamedTuple):
    landmark_id: int
    r: float
    b: float


@dataclass(frozen=True)
class NoiseConfig:
    process_cov: np.ndarray  # 3x3 additive per-step state noise
    meas_cov: np.ndarray  # 2x2 (range, bearing)
    pose_meas_cov: np.ndarray  # 3x3 direct-pose mode

    @staticmethod
    def zero() -> "NoiseConfig":
        return NoiseConfig(np.zeros((3, 3)), np.zeros((2, 2)), np.zeros((3, 3)))


@dataclass(frozen=True)
class BeliefState:
    mean: RobotState
    cov: np.ndarray  # 3x3 symmetric PSD


def _delta(s: RobotState, lm: Landmark) -> tuple[float, float, float]:
    dx = s.x - lm.x
    dy = s.y - lm.y
    d2 = dx * dx + dy * dy
    if d2 == 0.0:
        raise DegenerateRangeError(f"robot coincides with landmark {lm.id}")
    return dx, dy, d2


def predict_measurement(s: RobotState, lm: Landmark) -> RangeBearing:
    """Expected (range, bearing) of lm as seen from s."""
    dx, dy, d2 = _delta(s, lm)
    r = math.sqrt(d2)
    b = wrap_angle(math.atan2(dy, dx) - s.gamma)
    return RangeBearing(lm.id, r, b)


def measurement_jacobian(s: RobotState, lm: Landmark) -> np.ndarray:
    """2x3 partials of (range, bearing) with respect to the robot state."""
    dx, dy, d2 = _delta(s, lm)
    d = math.sqrt(d2)
    return np.array([
        [dx / d, dy / d, 0.0],
        [-dy / d2, dx / d2, -1.0],
    ])


def ekf_predict(bel: BeliefState, u: ControlInput, dt: float,
                noise: NoiseConfig) -> BeliefState:
    """Time update: propagate the mean, push covariance through the Jacobian."""
    a = motion_jacobian(bel.mean, u, dt)
    mean = propagate(bel.mean, u, dt)
    cov = a @ bel.cov @ a.T + noise.process_cov
    cov = 0.5 * (cov + cov.T)
    return BeliefState(mean, cov)


def _apply_update(bel: BeliefState, h: np.ndarray, nu: np.ndarray,
                  r: np.ndarray) -> BeliefState:
    p = bel.cov
    if not np.any(h @ p @ h.T):
        return bel  # K = 0: nothing to correct, regardless of the measurement
    s_mat = h @ p @ h.T + r
    sv = np.linalg.svd(s_mat, compute_uv=False)
    if sv[-1] <= _SINGULARITY_TOL * max(sv[0], 1.0):
        raise SingularInnovationError("innovation covariance is singular")
    k = p @ h.T @ np.linalg.inv(s_mat)
    dx = k @ nu
    mean = RobotState(bel.mean.x + dx[0], bel.mean.y + dx[1],
                      wrap_angle(bel.mean.gamma + dx[2]))
    ikh = np.eye(3) - k @ h
    cov = ikh @ p @ ikh.T + k @ r @ k.T  # Joseph form
    cov = 0.5 * (cov + cov.T)
    return BeliefState(mean, cov)


def ekf_update(bel: BeliefState, z: RangeBearing, lm: Landmark,
               noise: NoiseConfig) -> BeliefState:
    """Measurement update from one range-bearing observation."""
    if z.landmark_id != lm.id:
        raise ValueError(f"measurement is for landmark {z.landmark_id}, got {lm.id}")
    zhat = predict_measurement(bel.mean, lm)
    h = measurement_jacobian(bel.mean, lm)
    nu = np.array([z.r - zhat.r, wrap_angle(z.b - zhat.b)])
    return _apply_update(bel, h, nu, noise.meas_cov)


def ekf_update_pose(bel: BeliefState, observed: RobotState,
                    noise: NoiseConfig) -> BeliefState:
    """Direct-pose update: identity observation matrix, wrapped angle innovation."""
    h = np.eye(3)
    nu = np.array([
        observed.x - bel.mean.x,
        observed.y - bel.mean.y,
        wrap_angle(observed.gamma - bel.mean.gamma),
    ])
    return _apply_update(bel, h, nu, noise.pose_meas_cov)
