"""Experiment aggregation: mode comparison and parameter sweeps."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .fitness import fitness_report
from .learning import EpisodeRecord, TrainConfig, TrainingLog, train
from .pool import build_map, feasible
from .scenario import Scenario


def success_rate(records: list[EpisodeRecord], start: int, end: int) -> float:
    window = records[start:end]
    if not window:
        return 0.0
    return sum(1 for r in window if r.outcome == "success") / len(window)


def mean_reward(records: list[EpisodeRecord], start: int, end: int) -> float:
    window = records[start:end]
    if not window:
        return 0.0
    return sum(r.total_reward for r in window) / len(window)


def steps_of(records, kind: str, start: int, end: int) -> list[int]:
    """Step counts of successes, or of failures (collision and timeout)."""
    if kind == "success":
        return [r.steps for r in records[start:end] if r.outcome == "success"]
    return [r.steps for r in records[start:end] if r.outcome != "success"]


def _histogram(steps: list[int], bin_width: int, n_bins: int) -> list[int]:
    counts = [0] * n_bins
    for s in steps:
        b = s // bin_width
        if b >= n_bins:
            b = n_bins - 1
        counts[b] += 1
    return counts


@dataclass
class ModeSummary:
    mode: str
    window_success: list[tuple[int, int, float]]
    window_reward: list[tuple[int, int, float]]
    success_steps_first: list[int]
    success_steps_second: list[int]
    failure_steps_first: list[int]
    failure_steps_second: list[int]


@dataclass
class SummaryStats:
    """Per-mode aggregates over two training logs with matching settings."""

    first: ModeSummary
    second: ModeSummary
    window: int
    step_bin_width: int
    step_bins: int


def _normalized_config(config: TrainConfig) -> TrainConfig:
    # mode and pool parameters are the only fields allowed to differ
    return replace(config, mode="random", n_pdls=4000, cap=0.1, margin=0.3)


def _summarize(log: TrainingLog, window: int, bin_width: int, n_bins: int) -> ModeSummary:
    records = log.records
    n = len(records)
    half = n // 2
    windows_sr = []
    windows_rw = []
    for lo in range(0, n, window):
        hi = min(lo + window, n)
        windows_sr.append((lo, hi, success_rate(records, lo, hi)))
        windows_rw.append((lo, hi, mean_reward(records, lo, hi)))
    return ModeSummary(
        mode=log.config.mode,
        window_success=windows_sr,
        window_reward=windows_rw,
        success_steps_first=_histogram(steps_of(records, "success", 0, half), bin_width, n_bins),
        success_steps_second=_histogram(steps_of(records, "success", half, n), bin_width, n_bins),
        failure_steps_first=_histogram(steps_of(records, "failure", 0, half), bin_width, n_bins),
        failure_steps_second=_histogram(steps_of(records, "failure", half, n), bin_width, n_bins),
    )


def compare_modes(
    log_a: TrainingLog,
    log_b: TrainingLog,
    window: int = 50,
    step_bin_width: int = 10,
) -> SummaryStats:
    """Windowed success/reward curves plus half-split step histograms.

    The two logs must share every setting except the exploration mode
    (pool parameters are ignored for the comparison).
    """
    if len(log_a.records) != len(log_b.records):
        raise ValueError("logs must cover the same number of episodes")
    if _normalized_config(log_a.config) != _normalized_config(log_b.config):
        raise ValueError("logs differ in more than the exploration mode")
    if window < 1 or step_bin_width < 1:
        raise ValueError("window and step_bin_width must be positive")
    max_steps = max(
        (r.steps for r in log_a.records + log_b.records), default=1
    )
    n_bins = max(1, math.ceil((max_steps + 1) / step_bin_width))
    return SummaryStats(
        first=_summarize(log_a, window, step_bin_width, n_bins),
        second=_summarize(log_b, window, step_bin_width, n_bins),
        window=window,
        step_bin_width=step_bin_width,
        step_bins=n_bins,
    )


SUMMARY_HEADER = ["mode", "kind", "lo", "hi", "value"]


def summary_rows(stats: SummaryStats):
    """Flatten a SummaryStats into CSV rows (mode, kind, lo, hi, value)."""
    for summary in (stats.first, stats.second):
        for lo, hi, rate in summary.window_success:
            yield [summary.mode, "success_rate", lo, hi, rate]
        for lo, hi, mean in summary.window_reward:
            yield [summary.mode, "reward_mean", lo, hi, mean]
        hists = (
            ("success_steps_first_half", summary.success_steps_first),
            ("success_steps_second_half", summary.success_steps_second),
            ("failure_steps_first_half", summary.failure_steps_first),
            ("failure_steps_second_half", summary.failure_steps_second),
        )
        for kind, counts in hists:
            for b, count in enumerate(counts):
                lo = b * stats.step_bin_width
                yield [summary.mode, kind, lo, lo + stats.step_bin_width, count]


def sweep_pdl_count(
    counts: list[int],
    cap: float,
    margin: float,
    n_agents: int,
    n_sims: int,
    seed: int,
    n_bins: int | None = None,
    speed_factor: float = 1.0,
) -> list[dict]:
    """Fitness per pool size; one row per count, same seed throughout."""
    rows = []
    for count in counts:
        pool = build_map(count, cap, margin, seed)
        report = fitness_report(
            pool, n_agents, n_sims, n_bins=n_bins,
            speed_factor=speed_factor, seed=seed,
        )
        rows.append(
            {
                "n_pdls": count,
                "origin_avoidance": report.origin_avoidance,
                "angular_spread": report.angular_spread,
                "raw_cv": report.raw_cv,
                "n_sims": report.n_sims,
            }
        )
    return rows


def sweep_cap_margin(
    caps: list[float],
    margins: list[float],
    n_agents: int,
    n_sims: int,
    seed: int,
    n_bins: int | None = None,
    speed_factor: float = 1.0,
    n_pdls: int = 4000,
) -> list[dict]:
    """Full cap x margin grid; infeasible cells are kept as skipped rows."""
    rows = []
    for cap in caps:
        for margin in margins:
            if not feasible(cap, margin):
                rows.append(
                    {
                        "cap": cap, "margin": margin, "status": "skipped",
                        "origin_avoidance": "", "angular_spread": "",
                        "raw_cv": "", "n_sims": 0,
                    }
                )
                continue
            pool = build_map(n_pdls, cap, margin, seed)
            report = fitness_report(
                pool, n_agents, n_sims, n_bins=n_bins,
                speed_factor=speed_factor, seed=seed,
            )
            rows.append(
                {
                    "cap": cap, "margin": margin, "status": "ok",
                    "origin_avoidance": report.origin_avoidance,
                    "angular_spread": report.angular_spread,
                    "raw_cv": report.raw_cv,
                    "n_sims": report.n_sims,
                }
            )
    return rows


def _train_task(args):
    config, scenario = args
    return train(config, scenario)


def train_many(
    configs: list[TrainConfig],
    scenario: Scenario | None = None,
    workers: int = 1,
) -> list[TrainingLog]:
    """Independent training runs, optionally across processes.

    Results come back in input order; each run is self-seeded, so the worker
    count never changes the outputs.
    """
    tasks = [(config, scenario) for config in configs]
    if workers <= 1 or len(tasks) <= 1:
        return [_train_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_train_task, tasks))
