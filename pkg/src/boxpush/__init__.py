"""Multi-agent box-pushing simulator with shared-pool exploration.

Agents push a box toward a goal by each picking one of six force regions per
step. Exploration can be uniform-random or driven by a shared pool of
probability distribution lists: one random key per step selects a
distribution that every agent samples from, aligning their pushes without
any communication. The package provides the world simulation, the box
sensor encoding, PDL map generation with its two-part fitness test, per-agent
tabular Q-learning, and a CLI for experiments, sweeps, and SVG plots.
"""

from ._kernels import implementation_name
from .csvio import VERSION as __version__
from .fitness import FitnessReport, fitness_report, simulate_bmd
from .learning import EpisodeRecord, TrainConfig, TrainingLog, train
from .pool import PdlMap, build_map, draw_key, load_map, sample_action, save_map, validate_pdl
from .rewards import RewardBreakdown, RewardWeights
from .scenario import Scenario, default_scenario, load_scenario
from .sensing import StateVector, discretize, encode_state, octant_of
from .world import StepOutcome, WorldState, apply_joint_action, initial_state, region_force

__all__ = [
    "EpisodeRecord",
    "FitnessReport",
    "PdlMap",
    "RewardBreakdown",
    "RewardWeights",
    "Scenario",
    "StateVector",
    "StepOutcome",
    "TrainConfig",
    "TrainingLog",
    "WorldState",
    "__version__",
    "apply_joint_action",
    "build_map",
    "default_scenario",
    "discretize",
    "draw_key",
    "encode_state",
    "fitness_report",
    "implementation_name",
    "initial_state",
    "load_map",
    "load_scenario",
    "octant_of",
    "region_force",
    "sample_action",
    "save_map",
    "simulate_bmd",
    "train",
    "validate_pdl",
]
