"""Per-agent tabular Q-learning on the shared box sensor state.

Every agent owns one Q-table over the discretized sensor state. All agents
see the same state and the same scalar reward each step; their tables differ
only through the actions they sampled. Exploration is either uniform over
the six actions or pool-driven: one shared key per step selects a PDL and
every exploring agent samples from that same row. Exploitation (the greedy
branch) is never affected by the pool.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .errors import ContractViolationError
from .pool import PdlMap, action_index_from_uniform, build_map
from .rewards import RewardWeights
from .scenario import Scenario, default_scenario
from .sensing import n_states
from .world import DEFAULT_K_R, DEFAULT_K_T

MODES = ("spi", "random")

OUTCOME_NAMES = {
    _kernels.OUTCOME_SUCCESS: "success",
    _kernels.OUTCOME_COLLISION: "collision",
    _kernels.OUTCOME_TIMEOUT: "timeout",
}


@dataclass(frozen=True)
class TrainConfig:
    """Everything a training run needs, fully reproducible from the seed."""

    mode: str = "random"
    n_agents: int = 15
    episodes: int = 1000
    speed_factor: float = 1.0
    n_pdls: int = 4000
    cap: float = 0.1
    margin: float = 0.3
    alpha: float = 0.03
    gamma: float = 0.9
    epsilon_start: float = 1.0
    epsilon_end: float = 0.01
    epsilon_decay_fraction: float = 0.8
    angle_bins: int = 8
    k_t: float = DEFAULT_K_T
    k_r: float = DEFAULT_K_R
    weights: RewardWeights = field(default_factory=RewardWeights)
    seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.episodes < 1:
            raise ValueError("episodes must be at least 1")
        if self.n_agents < 1:
            raise ValueError("n_agents must be at least 1")
        for name in ("speed_factor", "alpha", "gamma", "epsilon_start"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ValueError(f"{name} must be in (0, 1], got {value!r}")
        if not 0.0 <= self.epsilon_end <= self.epsilon_start:
            raise ValueError("epsilon_end must be in [0, epsilon_start]")
        if not 0.0 < self.epsilon_decay_fraction <= 1.0:
            raise ValueError("epsilon_decay_fraction must be in (0, 1]")
        if self.angle_bins < 1:
            raise ValueError("angle_bins must be at least 1")


@dataclass(frozen=True)
class EpisodeRecord:
    episode_index: int
    outcome: str  # success | collision | timeout
    steps: int
    total_reward: float


@dataclass
class TrainingLog:
    config: TrainConfig
    records: list[EpisodeRecord]
    epsilons: list[float]
    q_tables: np.ndarray | None = None


def epsilon_schedule(config: TrainConfig, episode: int) -> float:
    """Linear decay from epsilon_start to epsilon_end over the decay horizon."""
    horizon = max(1, int(config.episodes * config.epsilon_decay_fraction))
    frac = min(1.0, episode / horizon)
    return config.epsilon_start + (config.epsilon_end - config.epsilon_start) * frac


def new_q_tables(n_agents: int, angle_bins: int = 8) -> np.ndarray:
    return np.zeros((n_agents, n_states(angle_bins), 6), dtype=np.float64)


def select_action(
    q: np.ndarray,
    s: int,
    epsilon: float,
    mode: str,
    spi_context: tuple[PdlMap, int] | None,
    rng: np.random.Generator,
) -> int:
    """Epsilon-greedy action id in 1..6 for one agent.

    ``q`` is this agent's (n_states, 6) table. Greedy picks the argmax with
    ties broken toward the lowest action id. The exploration branch is
    uniform in ``random`` mode; in ``spi`` mode it samples the PDL selected
    by the step's shared key, supplied as ``spi_context=(pdl_map, key)``.

    Two uniforms are consumed per call regardless of the branch taken.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    u_explore = rng.random()
    u_action = rng.random()
    if u_explore < epsilon:
        if mode == "random":
            idx = int(u_action * 6.0)
            return (5 if idx > 5 else idx) + 1
        if spi_context is None or spi_context[1] is None:
            raise ContractViolationError("spi mode needs (pdl_map, key) for this step")
        pdl_map, key = spi_context
        return action_index_from_uniform(pdl_map[key], u_action) + 1
    return int(np.argmax(q[s])) + 1


def q_update(
    q: np.ndarray,
    s: int,
    a: int,
    r: float,
    s_next: int,
    terminal: bool,
    alpha: float,
    gamma: float,
) -> np.ndarray:
    """One temporal-difference backup on action id ``a`` (1..6), in place."""
    qa = q[s, a - 1]
    if terminal:
        td = r - qa
    else:
        td = r + gamma * float(np.max(q[s_next])) - qa
    q[s, a - 1] = qa + alpha * td
    return q


def run_episode(
    scenario: Scenario,
    q_tables: np.ndarray,
    config: TrainConfig,
    rng: np.random.Generator,
    pdl_map: PdlMap | None = None,
    epsilon: float | None = None,
) -> tuple[EpisodeRecord, np.ndarray]:
    """One episode from the scenario start; Q-tables are updated in place.

    Uniform draws are taken as three blocks up front (keys, epsilon tests,
    action samples) and consumed positionally, so a run is reproducible from
    the generator state alone. Returns the record and the pose trace.
    """
    if config.mode == "spi":
        if pdl_map is None:
            raise ContractViolationError("spi mode needs a pdl_map")
        if len(pdl_map) <= config.n_agents:
            raise ValueError(
                f"map size {len(pdl_map)} must exceed the number of agents "
                f"{config.n_agents}"
            )
    expected = (config.n_agents, n_states(config.angle_bins), 6)
    if q_tables.shape != expected:
        raise ValueError(f"q_tables shape {q_tables.shape} != {expected}")
    eps = config.epsilon_start if epsilon is None else epsilon
    max_steps = scenario.max_steps
    keys_u = rng.random(max_steps)
    explore_u = rng.random((max_steps, config.n_agents))
    action_u = rng.random((max_steps, config.n_agents))
    pdls = pdl_map.pdls if (pdl_map is not None and config.mode == "spi") else None
    code, steps, total, trace = _kernels.run_episode_steps(
        q_tables,
        scenario,
        pdls,
        config.speed_factor,
        config.k_t,
        config.k_r,
        config.weights.as_tuple(),
        config.alpha,
        config.gamma,
        eps,
        config.angle_bins,
        keys_u,
        explore_u,
        action_u,
    )
    record = EpisodeRecord(
        episode_index=0,
        outcome=OUTCOME_NAMES[code],
        steps=steps,
        total_reward=total,
    )
    return record, trace


def train(config: TrainConfig, scenario: Scenario | None = None) -> TrainingLog:
    """Run the configured number of episodes with a decaying epsilon.

    Deterministic from ``config.seed``: the pool map (spi mode) is built from
    the seed directly, and episodes draw from an independent substream.
    """
    sc = scenario if scenario is not None else default_scenario()
    pdl_map = None
    if config.mode == "spi":
        pdl_map = build_map(config.n_pdls, config.cap, config.margin, config.seed)
        if len(pdl_map) <= config.n_agents:
            raise ValueError("n_pdls must exceed n_agents")
    rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(1,)))
    q_tables = new_q_tables(config.n_agents, config.angle_bins)
    records: list[EpisodeRecord] = []
    epsilons: list[float] = []
    for episode in range(config.episodes):
        eps = epsilon_schedule(config, episode)
        record, _ = run_episode(sc, q_tables, config, rng, pdl_map, eps)
        records.append(replace(record, episode_index=episode))
        epsilons.append(eps)
    return TrainingLog(config=config, records=records, epsilons=epsilons, q_tables=q_tables)


LOG_HEADER = [
    "episode_index", "mode", "speed_factor", "outcome", "steps",
    "total_reward", "epsilon",
]


def log_rows(log: TrainingLog):
    cfg = log.config
    for record, eps in zip(log.records, log.epsilons):
        yield [
            record.episode_index, cfg.mode, cfg.speed_factor, record.outcome,
            record.steps, record.total_reward, eps,
        ]


def save_log_csv(log: TrainingLog, path) -> None:
    from .csvio import write_csv

    write_csv(path, LOG_HEADER, log_rows(log))


def load_log_csv(path) -> TrainingLog:
    """Rebuild a log from CSV; only CSV-carried config fields are restored."""
    from .csvio import read_csv
    from .errors import FormatError

    header, rows = read_csv(path)
    if header != LOG_HEADER:
        raise FormatError(str(path), 1, f"unexpected header {header!r}")
    if not rows:
        raise FormatError(str(path), 0, "no episode rows")
    mode = rows[0][1]
    speed_factor = float(rows[0][2])
    records = []
    epsilons = []
    for row in rows:
        records.append(
            EpisodeRecord(
                episode_index=int(row[0]),
                outcome=row[3],
                steps=int(row[4]),
                total_reward=float(row[5]),
            )
        )
        epsilons.append(float(row[6]))
    config = TrainConfig(mode=mode, speed_factor=speed_factor, episodes=len(rows))
    return TrainingLog(config=config, records=records, epsilons=epsilons)
