"""Command-line harness.

Verbs: build-map, validate-map, map-info, fitness, sweep-pdl,
sweep-capmargin, train, compare, plot. Every verb takes ``--config FILE``
(key=value lines) whose entries act as defaults; explicit flags win. Errors
leave exit code 2 (usage/data) or 1 (internal) and print a single
machine-readable JSON line to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis, csvio, fitness, learning, pool, svgplot
from .errors import FormatError
from .rewards import RewardWeights
from .scenario import default_scenario, load_scenario


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(json.dumps({"error": "usage", "detail": message}), file=sys.stderr)
        raise SystemExit(2)


def parse_ratio(text: str) -> float:
    """Accept plain floats and fractions like ``1/3``."""
    if "/" in text:
        num, _, den = text.partition("/")
        return float(num) / float(den)
    return float(text)


def _float_list(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p.strip()]


def _int_list(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p.strip()]


_CONFIG_KEYS = {
    "n_pdls": int, "cap": float, "margin": float, "seed": int, "agents": int,
    "sims": int, "total_sims": int, "bins": int, "speed_factor": parse_ratio,
    "episodes": int, "mode": str, "alpha": float, "gamma": float,
    "epsilon_start": float, "epsilon_end": float, "epsilon_decay": float,
    "angle_bins": int, "k_t": float, "k_r": float,
    "w1": float, "w2": float, "w3": float, "w4": float,
    "window": int, "counts": _int_list, "caps": _float_list,
    "margins": _float_list, "scenario": str,
}


def _load_config_file(path) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise FormatError(str(path), line_no, f"expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise FormatError(str(path), line_no, f"unknown config key {key!r}")
            try:
                values[key] = _CONFIG_KEYS[key](value.strip())
            except ValueError as exc:
                raise FormatError(str(path), line_no, f"bad value for {key!r}") from exc
    return values


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    probe, _ = parser.parse_known_args(argv)
    if getattr(probe, "config", None):
        file_values = _load_config_file(probe.config)
        sub = parser.verb_parsers[probe.verb]
        known = {a.dest for a in sub._actions}
        sub.set_defaults(**{k: v for k, v in file_values.items() if k in known})
    return parser.parse_args(argv)


def _manifest_for(out_path, verb: str, args: argparse.Namespace) -> None:
    config = {
        k: v for k, v in sorted(vars(args).items())
        if k not in ("func", "config") and v is not None
    }
    config = {k: (str(v) if isinstance(v, Path) else v) for k, v in config.items()}
    csvio.write_manifest(
        str(out_path) + ".manifest.json", verb, config, getattr(args, "seed", None)
    )


def _weights(args) -> RewardWeights:
    return RewardWeights(w1=args.w1, w2=args.w2, w3=args.w3, w4=args.w4)


# ---------------------------------------------------------------- verbs


def _cmd_build_map(args) -> int:
    pdl_map = pool.build_map(args.n_pdls, args.cap, args.margin, args.seed)
    pool.save_map(pdl_map, args.out)
    _manifest_for(args.out, "build-map", args)
    print(f"wrote {args.out}: {len(pdl_map)} PDLs (cap={args.cap}, margin={args.margin})")
    return 0


def _cmd_validate_map(args) -> int:
    pdl_map = pool.load_map(args.map)  # load_map re-checks every row
    print(f"{args.map}: valid ({len(pdl_map)} PDLs)")
    return 0


def _cmd_map_info(args) -> int:
    pdl_map = pool.load_map(args.map)
    arr = pdl_map.pdls
    print(f"n_pdls={len(pdl_map)} cap={pdl_map.cap!r} margin={pdl_map.margin!r} "
          f"seed={pdl_map.seed}")
    sums = arr.sum(axis=1)
    print(f"row sums: min={float(sums.min())!r} max={float(sums.max())!r}")
    print(f"mean pdl: {' '.join(f'{v:.4f}' for v in arr.mean(axis=0))}")
    return 0


FITNESS_HEADER = [
    "policy", "agents", "sims", "bins", "speed_factor",
    "origin_avoidance", "angular_spread", "raw_cv", "seed",
]


def _cmd_fitness(args) -> int:
    if (args.map is None) == (not args.random):
        raise ValueError("exactly one of --map or --random is required")
    policy = None if args.random else pool.load_map(args.map)
    bins = args.bins if args.bins is not None else args.agents
    report = fitness.fitness_report(
        policy, args.agents, args.sims, n_bins=bins,
        speed_factor=args.speed_factor, seed=args.seed,
    )
    name = "random" if policy is None else str(args.map)
    row = [
        name, args.agents, report.n_sims, report.n_bins, args.speed_factor,
        report.origin_avoidance, report.angular_spread, report.raw_cv, args.seed,
    ]
    if args.out:
        csvio.write_csv(args.out, FITNESS_HEADER, [row])
        _manifest_for(args.out, "fitness", args)
    if args.samples_out:
        rng = np.random.default_rng(args.seed)
        samples = fitness.simulate_bmd(
            policy, args.agents, args.sims, args.speed_factor, rng
        )
        with open(args.samples_out, "w", encoding="utf-8") as fh:
            for dx, dy in samples:
                fh.write(f"{float(dx)!r} {float(dy)!r}\n")
    print(f"origin_avoidance={report.origin_avoidance:.4f} "
          f"angular_spread={report.angular_spread:.4f} raw_cv={report.raw_cv:.4f}")
    return 0


def _cmd_sweep_pdl(args) -> int:
    per_cell = max(1, args.total_sims // len(args.counts))
    rows = analysis.sweep_pdl_count(
        args.counts, args.cap, args.margin, args.agents, per_cell, args.seed,
        n_bins=args.bins, speed_factor=args.speed_factor,
    )
    header = ["n_pdls", "origin_avoidance", "angular_spread", "raw_cv", "n_sims"]
    csvio.write_csv(args.out, header, ([r[k] for k in header] for r in rows))
    _manifest_for(args.out, "sweep-pdl", args)
    print(f"wrote {args.out}: {len(rows)} rows, {per_cell} sims per cell")
    return 0


def _cmd_sweep_capmargin(args) -> int:
    cells = len(args.caps) * len(args.margins)
    per_cell = max(1, args.total_sims // cells)
    rows = analysis.sweep_cap_margin(
        args.caps, args.margins, args.agents, per_cell, args.seed,
        n_bins=args.bins, speed_factor=args.speed_factor, n_pdls=args.n_pdls,
    )
    header = ["cap", "margin", "status", "origin_avoidance", "angular_spread",
              "raw_cv", "n_sims"]
    csvio.write_csv(args.out, header, ([r[k] for k in header] for r in rows))
    _manifest_for(args.out, "sweep-capmargin", args)
    print(f"wrote {args.out}: {len(rows)} cells, {per_cell} sims per cell")
    return 0


def _cmd_train(args) -> int:
    scenario = load_scenario(args.scenario) if args.scenario else default_scenario()
    config = learning.TrainConfig(
        mode=args.mode,
        n_agents=args.agents,
        episodes=args.episodes,
        speed_factor=args.speed_factor,
        n_pdls=args.n_pdls,
        cap=args.cap,
        margin=args.margin,
        alpha=args.alpha,
        gamma=args.gamma,
        epsilon_start=args.epsilon_start,
        epsilon_end=args.epsilon_end,
        epsilon_decay_fraction=args.epsilon_decay,
        angle_bins=args.angle_bins,
        k_t=args.k_t,
        k_r=args.k_r,
        weights=_weights(args),
        seed=args.seed,
    )
    log = learning.train(config, scenario)
    learning.save_log_csv(log, args.out)
    _manifest_for(args.out, "train", args)
    n = len(log.records)
    rate = analysis.success_rate(log.records, max(0, n - 100), n)
    print(f"wrote {args.out}: {n} episodes, final-100 success rate {rate:.3f}")
    return 0


def _cmd_compare(args) -> int:
    log_spi = learning.load_log_csv(args.spi)
    log_random = learning.load_log_csv(args.random)
    stats = analysis.compare_modes(log_spi, log_random, window=args.window)
    csvio.write_csv(args.out, analysis.SUMMARY_HEADER, analysis.summary_rows(stats))
    _manifest_for(args.out, "compare", args)
    print(f"wrote {args.out}")
    return 0


# ---------------------------------------------------------------- plots


def _read_rows(path):
    header, rows = csvio.read_csv(path)
    if not rows:
        raise FormatError(str(path), 1, "no data rows")
    return header, rows


def _plot_training(paths, out_dir: Path, window: int) -> list[Path]:
    sr_series = []
    rw_series = []
    for path in paths:
        log = learning.load_log_csv(path)
        records = log.records
        n = len(records)
        xs, sr, rw = [], [], []
        for lo in range(0, n, window):
            hi = min(lo + window, n)
            xs.append(lo)
            sr.append(analysis.success_rate(records, lo, hi))
            rw.append(analysis.mean_reward(records, lo, hi))
        label = log.config.mode
        sr_series.append((label, xs, sr))
        rw_series.append((label, xs, rw))
    out1 = out_dir / "success_rate.svg"
    out2 = out_dir / "reward_mean.svg"
    svgplot.write_svg(
        svgplot.render_line_chart(
            sr_series, "Success rate over training", "episode", "success rate"
        ),
        out1,
    )
    svgplot.write_svg(
        svgplot.render_line_chart(
            rw_series, "Mean episode reward over training", "episode", "reward"
        ),
        out2,
    )
    return [out1, out2]


def _plot_sweep(path, out_dir: Path) -> list[Path]:
    header, rows = _read_rows(path)
    outs = []
    if "n_pdls" in header:
        i_count = header.index("n_pdls")
        xs = [float(r[i_count]) for r in rows]
        for metric in ("angular_spread", "origin_avoidance"):
            ys = [float(r[header.index(metric)]) for r in rows]
            out = out_dir / f"sweep_{metric}.svg"
            svgplot.write_svg(
                svgplot.render_line_chart(
                    [(metric, xs, ys)], f"{metric} vs pool size", "n_pdls", metric
                ),
                out,
            )
            outs.append(out)
    elif "margin" in header:
        i_cap = header.index("cap")
        i_margin = header.index("margin")
        ok_rows = [r for r in rows if r[header.index("status")] == "ok"]
        if not ok_rows:
            raise ValueError("sweep has no feasible cells to plot")
        caps = sorted({r[i_cap] for r in ok_rows}, key=float)
        for metric in ("origin_avoidance", "angular_spread"):
            i_metric = header.index(metric)
            series = []
            for cap in caps:
                cells = [r for r in ok_rows if r[i_cap] == cap]
                cells.sort(key=lambda r: float(r[i_margin]))
                series.append(
                    (f"cap={cap}",
                     [float(r[i_margin]) for r in cells],
                     [float(r[i_metric]) for r in cells])
                )
            out = out_dir / f"capmargin_{metric}.svg"
            svgplot.write_svg(
                svgplot.render_line_chart(
                    series, f"{metric} vs margin", "margin", metric
                ),
                out,
            )
            outs.append(out)
    else:
        raise ValueError(f"unrecognized sweep header: {header}")
    return outs


def _plot_bmd(path, out_dir: Path, bins: int) -> list[Path]:
    points = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(str(path), line_no, "expected two values per line")
            points.append((float(parts[0]), float(parts[1])))
    if not points:
        raise ValueError("no displacement samples to plot")
    out1 = out_dir / "bmd_scatter.svg"
    svgplot.write_svg(
        svgplot.render_scatter(
            points, "One-step box displacements", "dx (px)", "dy (px)"
        ),
        out1,
    )
    import math

    counts = [0] * bins
    width = 360.0 / bins
    for dx, dy in points:
        if dx == 0.0 and dy == 0.0:
            continue
        ang = math.degrees(math.atan2(dy, dx)) % 360.0
        b = min(int(ang // width), bins - 1)
        counts[b] += 1
    out2 = out_dir / "bmd_directions.svg"
    svgplot.write_svg(
        svgplot.render_histogram(
            [("directions", counts)], 0.0, width,
            "Push direction histogram", "bearing (deg)", "count",
        ),
        out2,
    )
    return [out1, out2]


def _plot_compare(path, out_dir: Path) -> list[Path]:
    header, rows = _read_rows(path)
    if header != analysis.SUMMARY_HEADER:
        raise ValueError(f"not a compare summary CSV: {header}")
    modes = []
    for row in rows:
        if row[0] not in modes:
            modes.append(row[0])
    outs = []
    for kind, title in (
        ("success_rate", "Success rate over training"),
        ("reward_mean", "Mean episode reward"),
    ):
        series = []
        for mode in modes:
            pts = [(int(r[2]), float(r[4])) for r in rows if r[0] == mode and r[1] == kind]
            if pts:
                series.append((mode, [p[0] for p in pts], [p[1] for p in pts]))
        out = out_dir / f"{kind}.svg"
        svgplot.write_svg(
            svgplot.render_line_chart(series, title, "episode", kind), out
        )
        outs.append(out)
    for kind in (
        "success_steps_first_half", "success_steps_second_half",
        "failure_steps_first_half", "failure_steps_second_half",
    ):
        series = []
        bin_width = None
        for mode in modes:
            cells = [r for r in rows if r[0] == mode and r[1] == kind]
            if not cells:
                continue
            cells.sort(key=lambda r: int(r[2]))
            if bin_width is None:
                bin_width = int(cells[0][3]) - int(cells[0][2])
            series.append((mode, [int(float(r[4])) for r in cells]))
        if not series:
            continue
        out = out_dir / f"{kind}.svg"
        svgplot.write_svg(
            svgplot.render_histogram(
                series, 0.0, float(bin_width),
                kind.replace("_", " "), "steps", "episodes",
            ),
            out,
        )
        outs.append(out)
    return outs


def _cmd_plot(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.kind == "training":
        outs = _plot_training(args.inputs, out_dir, args.window)
    elif args.kind == "sweep":
        outs = _plot_sweep(args.inputs[0], out_dir)
    elif args.kind == "bmd":
        outs = _plot_bmd(args.inputs[0], out_dir, args.bins or 15)
    elif args.kind == "compare":
        outs = _plot_compare(args.inputs[0], out_dir)
    else:  # pragma: no cover - argparse choices guard this
        raise ValueError(f"unknown plot kind {args.kind!r}")
    csvio.write_manifest(
        out_dir / "manifest.json", "plot",
        {k: str(v) for k, v in sorted(vars(args).items()) if k != "func"},
        getattr(args, "seed", None),
    )
    for out in outs:
        print(f"wrote {out}")
    return 0


# ---------------------------------------------------------------- wiring


def _add_common(p, *, seed=True):
    p.add_argument("--config", help="key=value file providing defaults")
    if seed:
        p.add_argument("--seed", type=int, default=0)


def build_parser() -> _Parser:
    parser = _Parser(prog="boxpush", description=__doc__)
    parser.verb_parsers = {}
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def add_verb(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        parser.verb_parsers[name] = p
        return p

    p = add_verb("build-map", help="generate a PDL map file")
    _add_common(p)
    p.add_argument("--n-pdls", type=int, default=4000)
    p.add_argument("--cap", type=float, default=0.1)
    p.add_argument("--margin", type=float, default=0.3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_build_map)

    p = add_verb("validate-map", help="check every PDL in a map file")
    _add_common(p, seed=False)
    p.add_argument("--map", required=True)
    p.set_defaults(func=_cmd_validate_map)

    p = add_verb("map-info", help="print map parameters and row stats")
    _add_common(p, seed=False)
    p.add_argument("--map", required=True)
    p.set_defaults(func=_cmd_map_info)

    p = add_verb("fitness", help="run the two-part fitness test")
    _add_common(p)
    p.add_argument("--map")
    p.add_argument("--random", action="store_true", help="uniform-random policy")
    p.add_argument("--agents", type=int, default=15)
    p.add_argument("--sims", type=int, default=100000)
    p.add_argument("--bins", type=int)
    p.add_argument("--speed-factor", type=parse_ratio, default=1.0)
    p.add_argument("--out")
    p.add_argument("--samples-out", help="dump displacement samples, one 'x y' per line")
    p.set_defaults(func=_cmd_fitness)

    p = add_verb("sweep-pdl", help="fitness vs pool size")
    _add_common(p)
    p.add_argument("--counts", type=_int_list, default=[4, 52, 100, 252, 500, 1000, 4000])
    p.add_argument("--cap", type=float, default=0.1)
    p.add_argument("--margin", type=float, default=0.3)
    p.add_argument("--agents", type=int, default=15)
    p.add_argument("--total-sims", type=int, default=100000)
    p.add_argument("--bins", type=int)
    p.add_argument("--speed-factor", type=parse_ratio, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sweep_pdl)

    p = add_verb("sweep-capmargin", help="fitness over a cap x margin grid")
    _add_common(p)
    p.add_argument("--caps", type=_float_list, default=[0.05, 0.1, 0.3])
    p.add_argument("--margins", type=_float_list, default=[0.0, 0.1, 0.2, 0.3, 0.4, 0.5])
    p.add_argument("--agents", type=int, default=15)
    p.add_argument("--total-sims", type=int, default=100000)
    p.add_argument("--n-pdls", type=int, default=4000)
    p.add_argument("--bins", type=int)
    p.add_argument("--speed-factor", type=parse_ratio, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sweep_capmargin)

    p = add_verb("train", help="train one mode on a scenario")
    _add_common(p)
    p.add_argument("--mode", choices=learning.MODES, required=True)
    p.add_argument("--speed-factor", type=parse_ratio, default=1.0)
    p.add_argument("--episodes", type=int, default=1000)
    p.add_argument("--agents", type=int, default=15)
    p.add_argument("--scenario", help="scenario file (default: built-in arena)")
    p.add_argument("--n-pdls", type=int, default=4000)
    p.add_argument("--cap", type=float, default=0.1)
    p.add_argument("--margin", type=float, default=0.3)
    p.add_argument("--alpha", type=float, default=0.03)
    p.add_argument("--gamma", type=float, default=0.9)
    p.add_argument("--epsilon-start", type=float, default=1.0)
    p.add_argument("--epsilon-end", type=float, default=0.01)
    p.add_argument("--epsilon-decay", type=float, default=0.8)
    p.add_argument("--angle-bins", type=int, default=8)
    p.add_argument("--k-t", type=float, default=1.0)
    p.add_argument("--k-r", type=float, default=0.005)
    p.add_argument("--w1", type=float, default=2.0)
    p.add_argument("--w2", type=float, default=1.0)
    p.add_argument("--w3", type=float, default=1.0)
    p.add_argument("--w4", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train)

    p = add_verb("compare", help="summarize a spi log against a random log")
    _add_common(p, seed=False)
    p.add_argument("--spi", required=True, help="training log CSV (spi mode)")
    p.add_argument("--random", required=True, help="training log CSV (random mode)")
    p.add_argument("--window", type=int, default=50)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_compare)

    p = add_verb("plot", help="render SVG plots from CSV outputs")
    _add_common(p, seed=False)
    p.add_argument("--kind", choices=["training", "sweep", "bmd", "compare"],
                   required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--window", type=int, default=50)
    p.add_argument("--bins", type=int)
    p.add_argument("inputs", nargs="+")
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, list(sys.argv[1:] if argv is None else argv))
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    except (ValueError, OSError, KeyError) as exc:
        code = "format" if isinstance(exc, FormatError) else "invalid"
        print(json.dumps({"error": code, "detail": str(exc)}), file=sys.stderr)
        return 2
    except Exception as exc:  # keep the contract: one line, nonzero exit
        print(json.dumps({"error": "internal", "detail": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
