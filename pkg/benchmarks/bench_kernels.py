#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python reference.

Usage: python benchmarks/bench_kernels.py [--episodes N] [--sims N]
"""

import argparse
import time

import numpy as np

from boxpush import build_map, default_scenario
from boxpush._kernels import pyloops
from boxpush.learning import new_q_tables

try:
    from boxpush._kernels import _fastloops
except ImportError:
    _fastloops = None


def bench_bmd(mod, pdls, n_sims: int) -> float:
    rng = np.random.default_rng(1)
    keys_u = rng.random(n_sims)
    action_u = rng.random((n_sims, 15))
    t0 = time.perf_counter()
    mod.bmd_batch(pdls, keys_u, action_u, 1.0)
    return time.perf_counter() - t0


def bench_episodes(mod, pdls, scenario, n_episodes: int) -> tuple[float, int]:
    rng = np.random.default_rng(2)
    q = new_q_tables(15)
    steps = 0
    t0 = time.perf_counter()
    for _ in range(n_episodes):
        keys_u = rng.random(scenario.max_steps)
        explore_u = rng.random((scenario.max_steps, 15))
        action_u = rng.random((scenario.max_steps, 15))
        out = mod.run_episode_steps(
            q, scenario, pdls, 1 / 3, 1.0, 0.005, (2.0, 1.0, 1.0, 1.0),
            0.03, 0.9, 0.8, 8, keys_u, explore_u, action_u,
        )
        steps += out[1]
    return time.perf_counter() - t0, steps


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--episodes", type=int, default=30)
    parser.add_argument("--sims", type=int, default=200_000)
    args = parser.parse_args()

    pool = build_map(4000, 0.1, 0.3, seed=1)
    scenario = default_scenario()
    mods = [("python", pyloops)]
    if _fastloops is not None:
        mods.append(("compiled", _fastloops))
    else:
        print("compiled kernels not built; benchmarking the pure path only")

    print(f"\nbatch simulation, {args.sims} sims x 15 agents (pool policy):")
    base = None
    for name, mod in mods:
        dt = bench_bmd(mod, pool.pdls, args.sims)
        base = base or dt
        print(f"  {name:9s} {dt * 1e3:9.1f} ms   ({base / dt:5.1f}x)")

    print(f"\ntraining episodes, {args.episodes} episodes x 15 agents (pool mode):")
    base = None
    for name, mod in mods:
        dt, steps = bench_episodes(mod, pool.pdls, scenario, args.episodes)
        base = base or dt
        print(f"  {name:9s} {dt:7.2f} s  {1e6 * dt / steps:7.1f} us/step   ({base / dt:5.1f}x)")


if __name__ == "__main__":
    main()
