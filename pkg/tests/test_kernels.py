"""Differential tests: the compiled kernels must match the pure-Python
reference bit for bit on identical uniform-draw buffers."""

import math

import numpy as np
import pytest

from boxpush import _kernels, build_map, default_scenario
from boxpush._kernels import pyloops
from boxpush.learning import new_q_tables
from boxpush.scenario import Scenario

from .conftest import open_arena

fastloops = pytest.importorskip(
    "boxpush._kernels._fastloops", reason="compiled kernels not built"
)


def _scenarios():
    yield default_scenario()
    yield open_arena(goal=(800.0, 520.0, 25.0), box_heading_start=0.9)
    yield Scenario(
        arena_width=600.0,
        arena_height=600.0,
        goal=(520.0, 520.0, 25.0),
        box_start=(120.0, 100.0),
        walls=((0.0, 0.0, 600.0, 0.0), (600.0, 0.0, 600.0, 600.0),
               (0.0, 0.0, 0.0, 600.0)),
        obstacles=((300.0, 300.0, 45.0), (200.0, 450.0, 30.0)),
        box_heading_start=5.5,
        max_steps=150,
    )


def test_bmd_batch_identical():
    rng = np.random.default_rng(100)
    pool = build_map(96, 0.1, 0.3, seed=4)
    for pdls in (None, pool.pdls):
        keys_u = rng.random(4000) if pdls is not None else None
        action_u = rng.random((4000, 15))
        for scale in (1.0, 1 / 3, 0.7):
            a = pyloops.bmd_batch(pdls, keys_u, action_u, scale)
            b = fastloops.bmd_batch(pdls, keys_u, action_u, scale)
            assert np.array_equal(a, b)


@pytest.mark.parametrize("epsilon", [0.0, 0.35, 1.0])
@pytest.mark.parametrize("use_pool", [False, True])
def test_episode_identical(epsilon, use_pool):
    rng = np.random.default_rng(2024)
    pool = build_map(64, 0.1, 0.3, seed=17)
    for sc_index, sc in enumerate(_scenarios()):
        n_agents = 15
        keys_u = rng.random(sc.max_steps)
        explore_u = rng.random((sc.max_steps, n_agents))
        action_u = rng.random((sc.max_steps, n_agents))
        q_a = new_q_tables(n_agents)
        q_a += rng.normal(scale=5.0, size=q_a.shape)  # exercise greedy paths
        q_b = q_a.copy()
        pdls = pool.pdls if use_pool else None
        args = (sc, pdls, 1 / 3, 1.0, 0.005, (2.0, 1.0, 1.0, 1.0),
                0.1, 0.95, epsilon, 8, keys_u, explore_u, action_u)
        code_a, steps_a, total_a, trace_a = pyloops.run_episode_steps(q_a, *args)
        code_b, steps_b, total_b, trace_b = fastloops.run_episode_steps(q_b, *args)
        assert code_a == code_b, f"scenario {sc_index}"
        assert steps_a == steps_b
        assert total_a == total_b  # bit-identical accumulation
        assert np.array_equal(trace_a, trace_b)
        assert np.array_equal(q_a, q_b)


def test_selected_kernel_matches_reference_on_default_run():
    sc = default_scenario()
    rng = np.random.default_rng(7)
    keys_u = rng.random(sc.max_steps)
    explore_u = rng.random((sc.max_steps, 15))
    action_u = rng.random((sc.max_steps, 15))
    q_a = new_q_tables(15)
    q_b = q_a.copy()
    args = (sc, None, 0.5, 1.0, 0.005, (2.0, 1.0, 1.0, 1.0),
            0.03, 0.9, 0.8, 8, keys_u, explore_u, action_u)
    ref = pyloops.run_episode_steps(q_a, *args)
    active = _kernels.run_episode_steps(q_b, *args)
    assert ref[0] == active[0] and ref[1] == active[1] and ref[2] == active[2]
    assert np.array_equal(q_a, q_b)


def test_outcome_codes_consistent():
    assert pyloops.OUTCOME_SUCCESS == fastloops.OUTCOME_SUCCESS == 0
    assert pyloops.OUTCOME_COLLISION == fastloops.OUTCOME_COLLISION == 1
    assert pyloops.OUTCOME_TIMEOUT == fastloops.OUTCOME_TIMEOUT == 2


def test_implementation_reports_name():
    assert _kernels.implementation_name() in ("compiled", "python")
    assert pyloops.IMPLEMENTATION == "python"
    assert fastloops.IMPLEMENTATION == "compiled"


def test_env_var_forces_pure_python():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c",
         "from boxpush import _kernels; print(_kernels.implementation_name())"],
        env={"PATH": "/usr/bin:/bin", "BOXPUSH_PURE_PYTHON": "1"},
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
