"""Step reward: weighted sum of distance, rotation, collision and goal terms."""

from __future__ import annotations

import math
from dataclasses import dataclass

DISTANCE_GAIN = 2.5
ROTATION_BASELINE = 0.98
COLLISION_PENALTY = -900.0
GOAL_BONUS = 900.0


@dataclass(frozen=True)
class RewardWeights:
    """Non-negative component weights; the distance weight is the largest."""

    w1: float = 2.0  # distance
    w2: float = 1.0  # rotation
    w3: float = 1.0  # collision
    w4: float = 1.0  # goal

    def __post_init__(self):
        if min(self.w1, self.w2, self.w3, self.w4) < 0:
            raise ValueError("reward weights must be non-negative")
        if self.w1 < max(self.w2, self.w3, self.w4):
            raise ValueError("distance weight w1 must be the maximum weight")

    def as_tuple(self):
        return (self.w1, self.w2, self.w3, self.w4)


@dataclass(frozen=True)
class RewardBreakdown:
    r_dis: float
    r_rot: float
    r_col: float
    r_goal: float
    total: float


def distance_reward(d_old: float, d_new: float) -> float:
    """Reward for closing the sensor-to-goal distance: (d_old - d_new) * 2.5."""
    if d_old < 0 or d_new < 0:
        raise ValueError("distances must be non-negative")
    return (d_old - d_new) * DISTANCE_GAIN


def rotation_reward(a_old: float, a_new: float) -> float:
    """cos of the goal-bearing change minus 0.98; peaks at 0.02 for no change."""
    return math.cos(a_new - a_old) - ROTATION_BASELINE


def collision_reward(collided: bool) -> float:
    return COLLISION_PENALTY if collided else 0.0


def goal_reward(reached: bool) -> float:
    return GOAL_BONUS if reached else 0.0


def total_reward(
    d_old: float,
    d_new: float,
    a_old: float,
    a_new: float,
    collided: bool,
    reached: bool,
    weights: RewardWeights = RewardWeights(),
) -> RewardBreakdown:
    r_dis = distance_reward(d_old, d_new)
    r_rot = rotation_reward(a_old, a_new)
    r_col = collision_reward(collided)
    r_goal = goal_reward(reached)
    total = weights.w1 * r_dis + weights.w2 * r_rot + weights.w3 * r_col + weights.w4 * r_goal
    return RewardBreakdown(r_dis=r_dis, r_rot=r_rot, r_col=r_col, r_goal=r_goal, total=total)
