"""gridnav: occupancy-grid path planning with closed-loop EKF navigation."""

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
from .search_graph import SearchProblem, snap_to_free, successors
from .planners import Heuristic, PlanResult, astar, dijkstra, heuristic_value
from .vehicle import ControlInput, RobotState, propagate, wrap_angle
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
from .guidance import FollowerConfig, FollowerState
from .sim import Scenario, SimTrace, compare_planners, render, run_scenario

__version__ = "0.1.0"
