import math

import numpy as np
import pytest

from boxpush.errors import ContractViolationError
from boxpush.learning import (
    EpisodeRecord,
    TrainConfig,
    epsilon_schedule,
    load_log_csv,
    new_q_tables,
    q_update,
    run_episode,
    save_log_csv,
    select_action,
    train,
)
from boxpush.pool import PdlMap, build_map

from .conftest import open_arena


def one_way_map():
    row = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    return PdlMap(pdls=np.array([row] * 16), cap=1.0, margin=0.0, seed=0)


def test_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(mode="greedy")
    with pytest.raises(ValueError):
        TrainConfig(episodes=0)
    with pytest.raises(ValueError):
        TrainConfig(alpha=0.0)
    with pytest.raises(ValueError):
        TrainConfig(speed_factor=1.2)
    with pytest.raises(ValueError):
        TrainConfig(epsilon_end=0.9, epsilon_start=0.5)


def test_epsilon_schedule_linear():
    cfg = TrainConfig(episodes=100, epsilon_start=1.0, epsilon_end=0.0,
                      epsilon_decay_fraction=0.8)
    assert epsilon_schedule(cfg, 0) == 1.0
    assert epsilon_schedule(cfg, 40) == pytest.approx(0.5)
    assert epsilon_schedule(cfg, 80) == 0.0
    assert epsilon_schedule(cfg, 99) == 0.0


def test_select_action_greedy_argmax_and_ties(rng):
    q = np.zeros((8, 6))
    q[3] = [0.0, 2.0, 2.0, -1.0, 0.5, 1.9]
    assert select_action(q, 3, 0.0, "random", None, rng) == 2  # first max wins
    q[3] = [5.0, 5.0, 5.0, 5.0, 5.0, 5.0]
    assert select_action(q, 3, 0.0, "random", None, rng) == 1


def test_select_action_uniform_explore_frequencies(rng):
    q = np.zeros((2, 6))
    n = 100_000
    counts = np.zeros(6)
    for _ in range(n):
        counts[select_action(q, 0, 1.0, "random", None, rng) - 1] += 1
    p = 1 / 6
    sigma = (n * p * (1 - p)) ** 0.5
    assert np.all(np.abs(counts - n * p) < 3 * sigma)


def test_select_action_pool_mode(rng):
    q = np.zeros((2, 6))
    pool = one_way_map()
    for _ in range(50):
        assert select_action(q, 0, 1.0, "spi", (pool, 3), rng) == 1


def test_exploitation_never_touches_the_pool(rng):
    # the greedy branch is identical in both modes and needs no key
    q = np.zeros((2, 6))
    q[0] = [0.0, 0.0, 3.0, 0.0, 0.0, 0.0]
    assert select_action(q, 0, 0.0, "spi", None, rng) == 3


def test_select_action_missing_key_is_contract_violation(rng):
    q = np.zeros((2, 6))
    with pytest.raises(ContractViolationError):
        select_action(q, 0, 1.0, "spi", None, rng)
    with pytest.raises(ContractViolationError):
        select_action(q, 0, 1.0, "spi", (one_way_map(), None), rng)


def test_select_action_greedy_shift_invariance(rng):
    q = np.zeros((4, 6))
    q[1] = [0.3, -0.2, 1.1, 0.9, -5.0, 1.05]
    before = select_action(q, 1, 0.0, "random", None, rng)
    q[1] += 123.456
    assert select_action(q, 1, 0.0, "random", None, rng) == before


def test_q_update_examples():
    q = np.zeros((4, 6))
    q_update(q, 1, 2, 7.5, 2, True, alpha=1.0, gamma=0.0)
    assert q[1, 1] == 7.5
    q2 = q.copy()
    q_update(q2, 1, 2, 100.0, 2, False, alpha=0.0, gamma=0.9)
    assert np.array_equal(q2, q)
    q3 = np.zeros((4, 6))
    q_update(q3, 0, 1, 10.0, 1, False, alpha=0.5, gamma=0.9)
    assert q3[0, 0] == 5.0


def test_q_update_fixed_point():
    # constant reward, self-loop: q = r / (1 - gamma) is stationary
    gamma, r = 0.9, 2.0
    q = np.full((1, 6), r / (1 - gamma))
    before = q.copy()
    q_update(q, 0, 3, r, 0, False, alpha=0.7, gamma=gamma)
    assert np.allclose(q, before, atol=1e-12)


def _cfg(**kw):
    defaults = dict(mode="random", n_agents=4, episodes=1, speed_factor=1.0, seed=5)
    defaults.update(kw)
    return TrainConfig(**defaults)


def test_run_episode_goal_overlapping_start(rng):
    # goal ring around the start: first step succeeds no matter the push
    sc = open_arena(goal=(500.0, 500.0, 60.0), max_steps=50)
    cfg = _cfg()
    q = new_q_tables(cfg.n_agents)
    record, trace = run_episode(sc, q, cfg, rng, epsilon=1.0)
    assert record.outcome == "success"
    assert record.steps == 1
    assert record.total_reward > 800.0  # goal bonus credited
    assert trace.shape == (1, 3)


def test_run_episode_obstacle_near_start_collides(rng):
    # obstacle at exactly box_side clearance (the legal minimum); with k_t=2
    # the one-way map pushes the 15 agents across the 20 px gap in one step
    sc = open_arena(obstacles=((550.0, 500.0, 10.0),), max_steps=50)
    cfg = _cfg(mode="spi", n_agents=15, k_t=2.0)
    q = new_q_tables(cfg.n_agents)
    record, _ = run_episode(sc, q, cfg, rng, pdl_map=one_way_map(), epsilon=1.0)
    assert record.outcome == "collision"
    assert record.steps == 1
    # 30 px toward the goal (w1*75) + rotation 0.02 + collision (w3*-900)
    assert record.total_reward == pytest.approx(150.0 + 0.02 - 900.0, abs=1e-9)


def test_run_episode_always_terminates(default_sc, rng):
    for mode in ("random", "spi"):
        cfg = _cfg(mode=mode, n_agents=15, speed_factor=1 / 3)
        q = new_q_tables(cfg.n_agents)
        pool = build_map(100, 0.1, 0.3, seed=3) if mode == "spi" else None
        record, _ = run_episode(default_sc, q, cfg, rng, pdl_map=pool, epsilon=1.0)
        assert record.steps <= default_sc.max_steps
        assert record.outcome in ("success", "collision", "timeout")


def test_run_episode_spi_needs_map(default_sc, rng):
    cfg = _cfg(mode="spi")
    with pytest.raises(ContractViolationError):
        run_episode(default_sc, new_q_tables(cfg.n_agents), cfg, rng)


def test_run_episode_map_must_exceed_agents(default_sc, rng):
    cfg = _cfg(mode="spi", n_agents=16)
    with pytest.raises(ValueError, match="map size"):
        run_episode(default_sc, new_q_tables(16), cfg, rng, pdl_map=one_way_map())


def test_epsilon_zero_is_deterministic(default_sc):
    cfg = _cfg(n_agents=6, speed_factor=0.5)
    results = []
    for _ in range(2):
        rng = np.random.default_rng(9)
        q = new_q_tables(cfg.n_agents)
        q[:, :, 0] = 1.0  # greedy always pushes +x
        record, trace = run_episode(default_sc, q, cfg, rng, epsilon=0.0)
        results.append((record, trace.tobytes()))
    assert results[0] == results[1]


def test_train_single_episode():
    log = train(_cfg(episodes=1, n_agents=3))
    assert len(log.records) == 1
    assert log.records[0].episode_index == 0
    assert log.q_tables.shape == (3, 2048, 6)


def test_train_reproducible():
    cfg = _cfg(mode="spi", episodes=4, n_agents=15, speed_factor=0.5, seed=21,
               n_pdls=100)
    a = train(cfg)
    b = train(cfg)
    assert a.records == b.records
    assert np.array_equal(a.q_tables, b.q_tables)
    assert a.epsilons == b.epsilons


def test_train_modes_differ():
    a = train(_cfg(mode="random", episodes=3, n_agents=15, speed_factor=0.5))
    b = train(_cfg(mode="spi", episodes=3, n_agents=15, speed_factor=0.5,
                   n_pdls=100))
    assert a.records != b.records


def test_log_csv_roundtrip(tmp_path):
    log = train(_cfg(episodes=5, n_agents=3, speed_factor=0.5))
    path = tmp_path / "log.csv"
    save_log_csv(log, path)
    loaded = load_log_csv(path)
    assert loaded.records == log.records
    assert loaded.epsilons == log.epsilons
    assert loaded.config.mode == log.config.mode
    assert loaded.config.speed_factor == log.config.speed_factor


def test_qlearning_chain_converges_to_analytic_values():
    """Deterministic 3-state chain, terminal reward 1: action 1 advances,
    everything else stays. Repeated sweeps must hit the analytic optimum."""
    alpha, gamma = 0.5, 0.9
    q = np.zeros((3, 6))
    for _ in range(10_000):
        for s in (0, 1):
            for a in range(1, 7):
                if a == 1:
                    s_next = s + 1
                    terminal = s_next == 2
                    r = 1.0 if terminal else 0.0
                else:
                    s_next, terminal, r = s, False, 0.0
                q_update(q, s, a, r, s_next, terminal, alpha, gamma)
    expected = np.zeros((3, 6))
    expected[1, 0] = 1.0
    expected[1, 1:] = gamma * 1.0
    expected[0, 0] = gamma * 1.0
    expected[0, 1:] = gamma * gamma * 1.0
    assert np.max(np.abs(q[:2] - expected[:2])) < 1e-6
