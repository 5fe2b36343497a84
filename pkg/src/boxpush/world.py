"""Box kinematics under joint agent pushes, collision and goal detection.

Action regions are numbered 1..6 counterclockwise around the box perimeter
in its local frame:

    1  left side (whole)        pushes +x   at (-L/2, 0)
    2  bottom side, left half   pushes +y   at (-L/4, -L/2)
    3  bottom side, right half  pushes +y   at (+L/4, -L/2)
    4  right side (whole)       pushes -x   at (+L/2, 0)
    5  top side, right half     pushes -y   at (+L/4, +L/2)
    6  top side, left half      pushes -y   at (-L/4, +L/2)

Pairs (2,3) and (5,6) translate identically and differ only in torque sign;
1/4, 2/5 and 3/6 are opposing pairs. The regions rotate with the box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import ContractViolationError
from .geometry import box_circle_overlap, box_segment_overlap, norm_angle
from .scenario import DEFAULT_BOX_SIDE, Scenario

ACTION_IDS = (1, 2, 3, 4, 5, 6)

DEFAULT_K_T = 1.0     # px of displacement per unit net force
DEFAULT_K_R = 0.005   # rad of rotation per unit net torque

# unit force directions per action, box frame (action id - 1)
_DIRS = ((1.0, 0.0), (0.0, 1.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0), (0.0, -1.0))
# application point scale factors of the box side (action id - 1)
_OFFS = ((-0.5, 0.0), (-0.25, -0.5), (0.25, -0.5), (0.5, 0.0), (0.25, 0.5), (-0.25, 0.5))
# torque of each action in units of (box_side / 4); equals cross(offset, dir)
_TAU_UNITS = (0, -1, 1, 0, -1, 1)


def region_force(action: int, box_side: float = DEFAULT_BOX_SIDE):
    """Force geometry of one action: (unit direction, application point).

    Both are expressed in the box frame; the application point is the offset
    from the box center.
    """
    if action not in (1, 2, 3, 4, 5, 6):
        raise ValueError(f"action id must be in 1..6, got {action!r}")
    ox, oy = _OFFS[action - 1]
    return _DIRS[action - 1], (ox * box_side, oy * box_side)


def max_step_displacement(n_agents: int, speed_factor: float, k_t: float = DEFAULT_K_T) -> float:
    """Largest possible one-step displacement magnitude (all pushes aligned)."""
    return (speed_factor * k_t) * n_agents


@dataclass
class WorldState:
    """Box pose plus episode progress; cheap to copy, safe to share."""

    x: float
    y: float
    heading: float
    step_index: int
    scenario: Scenario
    terminated: bool = False

    @property
    def pose(self):
        return (self.x, self.y, self.heading)


def initial_state(scenario: Scenario) -> WorldState:
    sx, sy = scenario.box_start
    return WorldState(
        x=sx, y=sy, heading=norm_angle(scenario.box_heading_start),
        step_index=0, scenario=scenario,
    )


@dataclass(frozen=True)
class StepOutcome:
    """Result of one joint push, evaluated on the final pose."""

    new_pose: tuple[float, float, float]
    displacement: tuple[float, float]
    rotation_delta: float
    collided: bool
    reached_goal: bool
    timed_out: bool

    @property
    def terminal(self) -> bool:
        return self.collided or self.reached_goal or self.timed_out


def _pose_reaches_goal(sc: Scenario, x: float, y: float, heading: float) -> bool:
    gx, gy, gr = sc.goal
    return box_circle_overlap(x, y, heading, gx, gy, gr, sc.box_side * 0.5)


def _pose_collides(sc: Scenario, x: float, y: float, heading: float) -> bool:
    half = sc.box_side * 0.5
    for cx, cy, r in sc.obstacles:
        if box_circle_overlap(x, y, heading, cx, cy, r, half):
            return True
    for x1, y1, x2, y2 in sc.walls:
        if box_segment_overlap(x, y, heading, x1, y1, x2, y2, half):
            return True
    return False


def check_goal(state: WorldState) -> bool:
    """Box perimeter touches the goal disc (tangency counts)."""
    return _pose_reaches_goal(state.scenario, state.x, state.y, state.heading)


def detect_collision(state: WorldState) -> bool:
    """Box perimeter touches any obstacle disc or wall segment."""
    return _pose_collides(state.scenario, state.x, state.y, state.heading)


def apply_joint_action(
    state: WorldState,
    joint,
    speed_factor: float,
    k_t: float = DEFAULT_K_T,
    k_r: float = DEFAULT_K_R,
) -> StepOutcome:
    """Advance the box one step under the agents' simultaneous pushes.

    ``joint`` is a sequence of action ids, one per agent. Net force and net
    torque are accumulated in the box frame, the force is rotated into the
    world frame, and position/heading are updated by ``speed_factor * k_t``
    and ``speed_factor * k_r`` respectively. Goal contact is checked before
    collision and wins when one step produces both.
    """
    if state.terminated:
        raise ContractViolationError("apply_joint_action on a terminated episode")
    if not 0.0 < speed_factor <= 1.0:
        raise ValueError(f"speed_factor must be in (0, 1], got {speed_factor!r}")
    sc = state.scenario
    fx = 0.0
    fy = 0.0
    tau_units = 0
    for action in joint:
        if action not in (1, 2, 3, 4, 5, 6):
            raise ValueError(f"action id must be in 1..6, got {action!r}")
        dx, dy = _DIRS[action - 1]
        fx += dx
        fy += dy
        tau_units += _TAU_UNITS[action - 1]
    scale = speed_factor * k_t
    dxb = scale * fx
    dyb = scale * fy
    c = math.cos(state.heading)
    s = math.sin(state.heading)
    dx = dxb * c - dyb * s
    dy = dxb * s + dyb * c
    nx = state.x + dx
    ny = state.y + dy
    dphi = (speed_factor * k_r) * ((0.25 * sc.box_side) * tau_units)
    nphi = norm_angle(state.heading + dphi)
    reached = _pose_reaches_goal(sc, nx, ny, nphi)
    collided = False if reached else _pose_collides(sc, nx, ny, nphi)
    timed_out = (not reached) and (not collided) and (state.step_index + 1 >= sc.max_steps)
    return StepOutcome(
        new_pose=(nx, ny, nphi),
        displacement=(dx, dy),
        rotation_delta=dphi,
        collided=collided,
        reached_goal=reached,
        timed_out=timed_out,
    )


def next_state(state: WorldState, outcome: StepOutcome) -> WorldState:
    """Successor world state for an outcome produced from ``state``."""
    nx, ny, nphi = outcome.new_pose
    return replace(
        state,
        x=nx, y=ny, heading=nphi,
        step_index=state.step_index + 1,
        terminated=outcome.terminal,
    )
