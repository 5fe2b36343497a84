import time

import numpy as np
import pytest

from boxpush import build_map, default_scenario
from boxpush.scenario import Scenario


@pytest.fixture(scope="session")
def default_sc():
    return default_scenario()


@pytest.fixture(scope="session")
def trained_logs_speed_third():
    """Five matched seeds per mode, 1000 episodes, speed factor 1/3.

    Shared by the acceptance comparison and the statistical example checks.
    Returns (logs_by_mode, wall_seconds).
    """
    from boxpush.analysis import train_many
    from boxpush.learning import TrainConfig

    seeds = [1, 2, 3, 4, 5]
    t0 = time.perf_counter()
    logs = {}
    for mode in ("spi", "random"):
        configs = [
            TrainConfig(mode=mode, episodes=1000, speed_factor=1 / 3, seed=s)
            for s in seeds
        ]
        logs[mode] = train_many(configs, workers=2)
    return logs, time.perf_counter() - t0


@pytest.fixture(scope="session")
def small_map():
    return build_map(100, 0.1, 0.3, seed=9)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def open_arena(goal=(900.0, 500.0, 30.0), box_start=(500.0, 500.0), **kwargs) -> Scenario:
    """Large arena with no walls or obstacles unless given."""
    defaults = dict(
        arena_width=1000.0,
        arena_height=1000.0,
        goal=goal,
        box_start=box_start,
        walls=(),
        obstacles=(),
    )
    defaults.update(kwargs)
    return Scenario(**defaults)
