"""Pure-Python kernel implementations.

These are the reference semantics: the batch simulator and the episode loop
are built by composing the public world/sensing/rewards operations. The
compiled twin in ``_fastloops.pyx`` must reproduce them bit-for-bit given the
same uniform-draw buffers (see tests/test_kernels.py).
"""

from __future__ import annotations

import math

import numpy as np

from .. import rewards, sensing, world
from ..pool import action_index_from_uniform

IMPLEMENTATION = "python"

OUTCOME_SUCCESS = 0
OUTCOME_COLLISION = 1
OUTCOME_TIMEOUT = 2


def _goal_distance(gx: float, gy: float, x: float, y: float) -> float:
    dx = gx - x
    dy = gy - y
    return math.sqrt(dx * dx + dy * dy)


def bmd_batch(pdls, keys_u, action_u, step_scale: float) -> np.ndarray:
    """One-step box displacements from a fixed origin pose in an empty arena.

    ``action_u`` is (n_sims, n_agents) of uniforms; ``keys_u`` is (n_sims,)
    and is only consulted when ``pdls`` is given (pool mode). With
    ``pdls=None`` every agent picks uniformly among the six actions.
    Displacements equal ``apply_joint_action`` at heading zero.
    """
    action_u = np.asarray(action_u, dtype=np.float64)
    n_sims, n_agents = action_u.shape
    if pdls is None:
        acts = (action_u * 6.0).astype(np.int64)
        np.minimum(acts, 5, out=acts)
    else:
        pdls = np.asarray(pdls, dtype=np.float64)
        keys = (np.asarray(keys_u, dtype=np.float64) * len(pdls)).astype(np.int64)
        cum = np.cumsum(pdls[keys], axis=1)
        acts = (action_u[:, :, None] >= cum[:, None, :]).sum(axis=2)
        np.minimum(acts, 5, out=acts)
    counts = np.stack([(acts == k).sum(axis=1) for k in range(6)], axis=1)
    fx = (counts[:, 0] - counts[:, 3]).astype(np.float64)
    fy = (counts[:, 1] + counts[:, 2] - counts[:, 4] - counts[:, 5]).astype(np.float64)
    out = np.empty((n_sims, 2), dtype=np.float64)
    out[:, 0] = step_scale * fx
    out[:, 1] = step_scale * fy
    return out


def run_episode_steps(
    q: np.ndarray,
    scenario,
    pdls,
    speed_factor: float,
    k_t: float,
    k_r: float,
    weights: tuple,
    alpha: float,
    gamma: float,
    epsilon: float,
    angle_bins: int,
    keys_u: np.ndarray,
    explore_u: np.ndarray,
    action_u: np.ndarray,
):
    """Run one episode, updating the per-agent Q-tables in place.

    Uniform draws are consumed positionally from the pre-drawn buffers: key
    for step t from ``keys_u[t]`` (pool mode only), the epsilon test for agent
    a from ``explore_u[t, a]``, and its exploration sample from
    ``action_u[t, a]``. Greedy steps leave the action draw unused.

    Returns (outcome_code, steps, total_reward, trace) where trace holds the
    pose after each executed step.
    """
    n_agents = q.shape[0]
    max_steps = scenario.max_steps
    map_size = 0 if pdls is None else len(pdls)
    w = rewards.RewardWeights(*weights)

    state = world.initial_state(scenario)
    gx, gy, _ = scenario.goal
    d_old = _goal_distance(gx, gy, state.x, state.y)
    a_old = sensing.goal_bearing(state)
    s_idx = sensing.discretize(sensing.encode_state(state), angle_bins)

    trace = np.empty((max_steps, 3), dtype=np.float64)
    total = 0.0
    joint = [0] * n_agents
    for t in range(max_steps):
        key = int(keys_u[t] * map_size) if map_size else 0
        for a in range(n_agents):
            if explore_u[t, a] < epsilon:
                if pdls is None:
                    idx = int(action_u[t, a] * 6.0)
                    if idx > 5:
                        idx = 5
                else:
                    idx = action_index_from_uniform(pdls[key], action_u[t, a])
            else:
                idx = int(np.argmax(q[a, s_idx]))
            joint[a] = idx + 1
        outcome = world.apply_joint_action(state, joint, speed_factor, k_t=k_t, k_r=k_r)
        nstate = world.next_state(state, outcome)
        nx, ny, nphi = outcome.new_pose
        d_new = _goal_distance(gx, gy, nx, ny)
        a_new = sensing.goal_bearing(nstate)
        breakdown = rewards.total_reward(
            d_old, d_new, a_old, a_new, outcome.collided, outcome.reached_goal, w
        )
        r = breakdown.total
        total += r
        s_next = 0
        if not outcome.terminal:
            s_next = sensing.discretize(sensing.encode_state(nstate), angle_bins)
        for a in range(n_agents):
            act = joint[a] - 1
            qa = q[a, s_idx, act]
            if outcome.terminal:
                td = r - qa
            else:
                td = r + gamma * float(np.max(q[a, s_next])) - qa
            q[a, s_idx, act] = qa + alpha * td
        trace[t, 0] = nx
        trace[t, 1] = ny
        trace[t, 2] = nphi
        if outcome.terminal:
            if outcome.reached_goal:
                code = OUTCOME_SUCCESS
            elif outcome.collided:
                code = OUTCOME_COLLISION
            else:
                code = OUTCOME_TIMEOUT
            return code, t + 1, total, trace[: t + 1].copy()
        state = nstate
        d_old = d_new
        a_old = a_new
        s_idx = s_next
    return OUTCOME_TIMEOUT, max_steps, total, trace.copy()
