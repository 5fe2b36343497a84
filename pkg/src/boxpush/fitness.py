"""Box movement distribution (BMD) simulation and the two-part fitness test.

A BMD is the empirical distribution of one-step box displacements from a
fixed origin pose in an empty arena, under a given exploration policy. Two
scores summarize it:

* origin avoidance - the fraction of samples pushed meaningfully away from
  the origin. A sample counts as *near* when its total displacement, the sum
  of the absolute x and y displacements, is no more than a third of the
  maximum possible displacement (all agents pushing the same way).
* angular spread - how evenly the push directions cover all bearings,
  measured as 1 minus the coefficient of variation of the direction
  histogram, clamped to [0, 1]. The raw CV is reported alongside because the
  clamp loses information at very uneven spreads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .pool import PdlMap
from .world import DEFAULT_K_T, max_step_displacement


@dataclass(frozen=True)
class FitnessReport:
    origin_avoidance: float
    angular_spread: float
    raw_cv: float
    n_sims: int
    n_bins: int


def simulate_bmd(
    policy: PdlMap | None,
    n_agents: int,
    n_sims: int,
    speed_factor: float = 1.0,
    rng: np.random.Generator | None = None,
    k_t: float = DEFAULT_K_T,
) -> np.ndarray:
    """Sample ``n_sims`` one-step displacements as an (n_sims, 2) array.

    ``policy`` is a PdlMap (each sim draws one shared key, then every agent
    samples from that row) or None for uniform-random action choice. Draw
    order per call: the key uniforms in one block, then the action uniforms.
    """
    if n_sims < 1:
        raise ValueError("n_sims must be at least 1")
    if n_agents < 1:
        raise ValueError("n_agents must be at least 1")
    if not 0.0 < speed_factor <= 1.0:
        raise ValueError(f"speed_factor must be in (0, 1], got {speed_factor!r}")
    if rng is None:
        rng = np.random.default_rng()
    pdls = None
    keys_u = None
    if policy is not None:
        pdls = policy.pdls
        keys_u = rng.random(n_sims)
    action_u = rng.random((n_sims, n_agents))
    step_scale = speed_factor * k_t
    return _kernels.bmd_batch(pdls, keys_u, action_u, step_scale)


def is_near_origin(dx: float, dy: float, max_disp: float) -> bool:
    """Total displacement |dx| + |dy| within a third of the maximum."""
    return abs(dx) + abs(dy) <= max_disp / 3.0


def origin_avoidance_score(samples: np.ndarray, max_disp: float) -> float:
    """1 - (near-origin fraction); higher means fewer cancelled pushes."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("origin avoidance needs at least one sample")
    if max_disp <= 0:
        raise ValueError("max_disp must be positive")
    total = np.abs(samples[:, 0]) + np.abs(samples[:, 1])
    near = int(np.count_nonzero(total <= max_disp / 3.0))
    return 1.0 - near / samples.shape[0]


def angular_spread_score(samples: np.ndarray, n_bins: int) -> tuple[float, float]:
    """(clamped 1 - CV, raw CV) of the direction histogram.

    Directions are binned into ``n_bins`` equal arcs over [0, 360) degrees;
    zero-displacement samples carry no direction and are excluded.
    """
    if n_bins < 2:
        raise ValueError("n_bins must be at least 2")
    samples = np.asarray(samples, dtype=float)
    moved = samples[(samples[:, 0] != 0.0) | (samples[:, 1] != 0.0)]
    if moved.shape[0] == 0:
        raise ValueError("angular spread undefined: every sample is at the origin")
    angles = np.degrees(np.arctan2(moved[:, 1], moved[:, 0]))
    angles = np.mod(angles, 360.0)
    width = 360.0 / n_bins
    bins = np.minimum((angles // width).astype(np.int64), n_bins - 1)
    counts = np.bincount(bins, minlength=n_bins)
    cv = float(counts.std() / counts.mean())
    score = 1.0 - cv
    if score < 0.0:
        score = 0.0
    elif score > 1.0:
        score = 1.0
    return score, cv


def fitness_report(
    policy: PdlMap | None,
    n_agents: int,
    n_sims: int,
    n_bins: int | None = None,
    speed_factor: float = 1.0,
    seed: int = 0,
    k_t: float = DEFAULT_K_T,
) -> FitnessReport:
    """Run a BMD and score it; deterministic for a given seed.

    ``n_bins`` defaults to the number of agents.
    """
    bins = n_agents if n_bins is None else n_bins
    rng = np.random.default_rng(seed)
    samples = simulate_bmd(policy, n_agents, n_sims, speed_factor, rng, k_t)
    max_disp = max_step_displacement(n_agents, speed_factor, k_t)
    origin = origin_avoidance_score(samples, max_disp)
    spread, cv = angular_spread_score(samples, bins)
    return FitnessReport(
        origin_avoidance=origin,
        angular_spread=spread,
        raw_cv=cv,
        n_sims=n_sims,
        n_bins=bins,
    )
