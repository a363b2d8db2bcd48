import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridnav.errors import NonPositiveTimestepError
from gridnav.vehicle import (
    ControlInput,
    RobotState,
    control_matrix,
    motion_jacobian,
    propagate,
    wrap_angle,
)

FD_STEP = 1e-7


def fd_motion_jacobian(s, u, dt):
    """Central finite differences of propagate with respect to the state."""
    jac = np.zeros((3, 3))
    for j in range(3):
        lo = list(s)
        hi = list(s)
        lo[j] -= FD_STEP
        hi[j] += FD_STEP
        a = propagate(RobotState(*lo), u, dt)
        b = propagate(RobotState(*hi), u, dt)
        jac[0, j] = (b.x - a.x) / (2 * FD_STEP)
        jac[1, j] = (b.y - a.y) / (2 * FD_STEP)
        jac[2, j] = wrap_angle(b.gamma - a.gamma) / (2 * FD_STEP)
    return jac


class TestWrapAngle:
    @pytest.mark.parametrize("a,expect", [
        (0.0, 0.0),
        (math.pi, math.pi),
        (-math.pi, math.pi),
        (4.0, 4.0 - 2 * math.pi),
        (3 * math.pi, math.pi),
    ])
    def test_known_values(self, a, expect):
        assert wrap_angle(a) == pytest.approx(expect, abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(-50.0, 50.0))
    def test_always_in_half_open_interval(self, a):
        w = wrap_angle(a)
        assert -math.pi < w <= math.pi


class TestPropagate:
    def test_straight_line_x(self):
        s = propagate(RobotState(0, 0, 0), ControlInput(1, 0), 1.0)
        assert s == pytest.approx((1.0, 0.0, 0.0))

    def test_straight_line_y(self):
        s = propagate(RobotState(0, 0, math.pi / 2), ControlInput(1, 0), 1.0)
        assert s.x == pytest.approx(0.0, abs=1e-15)
        assert s.y == pytest.approx(1.0)
        assert s.gamma == pytest.approx(math.pi / 2)

    def test_rotation_in_place(self):
        s = propagate(RobotState(0, 0, 0), ControlInput(0, math.pi / 2), 1.0)
        assert s == pytest.approx((0.0, 0.0, math.pi / 2))

    def test_gamma_wraps(self):
        s = propagate(RobotState(0, 0, 3.0), ControlInput(0, 1), 1.0)
        assert s.gamma == pytest.approx(4.0 - 2 * math.pi)

    def test_zero_control_fixed_point(self):
        s = RobotState(1.2, -0.4, 0.7)
        assert propagate(s, ControlInput(0, 0), 0.5) == s

    def test_straight_composition(self):
        s = RobotState(0.5, 0.5, 0.3)
        u = ControlInput(1.1, 0.0)
        once = propagate(s, u, 1.0)
        twice = propagate(propagate(s, u, 0.5), u, 0.5)
        assert once == pytest.approx(twice, abs=1e-12)

    def test_rejects_bad_dt(self):
        with pytest.raises(NonPositiveTimestepError):
            propagate(RobotState(0, 0, 0), ControlInput(1, 0), 0.0)


class TestMotionJacobian:
    def test_known_value_gamma_zero(self):
        a = motion_jacobian(RobotState(0, 0, 0), ControlInput(1, 0), 0.1)
        assert a == pytest.approx(np.array([[1, 0, 0], [0, 1, 0.1], [0, 0, 1]]))

    def test_identity_when_stationary(self):
        a = motion_jacobian(RobotState(0, 0, 1.3), ControlInput(0, 2.0), 0.7)
        assert a == pytest.approx(np.eye(3))

    def test_known_value_gamma_half_pi(self):
        a = motion_jacobian(RobotState(0, 0, math.pi / 2), ControlInput(2, 0), 0.5)
        assert a == pytest.approx(np.array([[1, 0, -1], [0, 1, 0], [0, 0, 1]]), abs=1e-12)

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(1)
        for _ in range(1000):
            s = RobotState(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-3, 3))
            u = ControlInput(rng.uniform(-2, 2), rng.uniform(-2, 2))
            dt = rng.uniform(0.01, 1.0)
            analytic = motion_jacobian(s, u, dt)
            numeric = fd_motion_jacobian(s, u, dt)
            assert np.max(np.abs(analytic - numeric)) < 1e-6


class TestControlMatrix:
    def test_axis_aligned(self):
        b = control_matrix(RobotState(0, 0, 0), 1.0)
        assert b == pytest.approx(np.array([[1, 0], [0, 0], [0, 1]]))

    def test_gamma_half_pi(self):
        b = control_matrix(RobotState(0, 0, math.pi / 2), 2.0)
        assert b == pytest.approx(np.array([[0, 0], [2, 0], [0, 2]]), abs=1e-12)

    def test_reconstructs_propagate(self):
        s = RobotState(0, 0, 0)
        u = ControlInput(1, 1)
        dt = 0.1
        lin = np.array(s) + control_matrix(s, dt) @ np.array(u)
        nonlin = propagate(s, u, dt)
        assert lin == pytest.approx(np.array(nonlin), abs=1e-12)
