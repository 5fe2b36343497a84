"""Box sensor: octant occupancy bits plus the scaled goal bearing.

The sensor disc is split into eight 45-degree octants in the box frame,
counted counterclockwise from the local +x axis; octant k covers
[(k-1)*45, k*45) degrees. Occupancy is tested against *closed* sectors, so
an object sitting exactly on an octant boundary sets both neighboring bits.

The ninth component is the goal bearing theta, measured in the box frame
and scaled to s9 = (theta_deg - 180) / 180, which maps [0, 360) onto [-1, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import (
    disc_sector_overlap,
    norm_angle,
    segment_sector_overlap,
    to_local,
)
from .scenario import Scenario
from .world import WorldState

OCTANT = math.pi / 4.0
SENSE_EPS = 1e-9  # tolerance on the sensor radius, in px


@dataclass(frozen=True)
class StateVector:
    """Occupancy bits s1..s8 and the scaled goal bearing s9."""

    occupancy: tuple[int, ...]
    goal_angle: float

    def as_list(self) -> list[float]:
        return [float(b) for b in self.occupancy] + [self.goal_angle]


def octant_of(vx: float, vy: float) -> int:
    """Octant index 1..8 of a nonzero box-frame vector (half-open boundaries)."""
    if vx == 0.0 and vy == 0.0:
        raise ValueError("octant of the zero vector is undefined")
    ang = norm_angle(math.atan2(vy, vx))
    k = int(ang / OCTANT) + 1
    return 8 if k > 8 else k


def goal_bearing(state: WorldState, scenario: Scenario | None = None) -> float:
    """Angle from the box's local +x axis to the goal center, in [0, 2*pi)."""
    sc = scenario if scenario is not None else state.scenario
    gx, gy, _ = sc.goal
    return norm_angle(math.atan2(gy - state.y, gx - state.x) - state.heading)


def encode_state(state: WorldState, scenario: Scenario | None = None) -> StateVector:
    """Sense the world from the box: 8 occupancy bits plus the scaled bearing.

    A bit is set when any obstacle disc or wall segment touches the closed
    octant sector of the sensor disc. Objects farther than the sensor radius
    (plus a 1e-9 px tolerance) never register.
    """
    sc = scenario if scenario is not None else state.scenario
    radius = sc.sensor_radius + SENSE_EPS
    c = math.cos(state.heading)
    s = math.sin(state.heading)
    local_obstacles = [
        (*to_local(cx, cy, state.x, state.y, c, s), r) for cx, cy, r in sc.obstacles
    ]
    local_walls = [
        (*to_local(x1, y1, state.x, state.y, c, s), *to_local(x2, y2, state.x, state.y, c, s))
        for x1, y1, x2, y2 in sc.walls
    ]
    bits = []
    for k in range(8):
        a0 = k * OCTANT
        a1 = (k + 1) * OCTANT
        hit = any(
            disc_sector_overlap(lx, ly, r, radius, a0, a1)
            for lx, ly, r in local_obstacles
        ) or any(
            segment_sector_overlap(x1, y1, x2, y2, radius, a0, a1)
            for x1, y1, x2, y2 in local_walls
        )
        bits.append(1 if hit else 0)
    theta = goal_bearing(state, sc)
    s9 = (theta * (180.0 / math.pi) - 180.0) / 180.0
    return StateVector(occupancy=tuple(bits), goal_angle=s9)


def n_states(angle_bins: int = 8) -> int:
    return 256 * angle_bins


def discretize(sv: StateVector, angle_bins: int = 8) -> int:
    """Map a state vector onto a dense index in [0, 256 * angle_bins).

    The occupancy bits form a bitmask (s1 is the least significant bit); s9
    is binned into ``angle_bins`` half-open intervals over [-1, 1], with the
    final interval closed so s9 = 1 still maps inside.
    """
    if angle_bins < 1:
        raise ValueError("angle_bins must be at least 1")
    mask = 0
    for k, bit in enumerate(sv.occupancy):
        if bit:
            mask |= 1 << k
    u = (sv.goal_angle + 1.0) * 0.5
    b = int(u * angle_bins)
    if b >= angle_bins:
        b = angle_bins - 1
    elif b < 0:
        b = 0
    return mask * angle_bins + b
