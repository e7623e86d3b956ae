"""Command-line front end.

Usage::

    varres sweep [--config FILE] [--output FILE] [--seed N] [--trials N] [--workers N]
    varres eta-table
    varres channel-stats [--config FILE] [--seed N] [--draws N]

Config files are flat ``key = value`` text; list values are comma separated,
``#`` starts a comment. An empty file reproduces the GBA sweep for 64 receive
antennas and a 5-bit reference.

Exit status: 0 on success, 1 for configuration errors, 2 for runtime errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .channel import ClusterModelParams
from .montecarlo import SweepConfig, SweepSummary, run_sweep, summarize_eigen_stats
from .quantize import eta

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2

CSV_COLUMNS = (
    "snr_db", "algorithm", "b_ref", "b_low", "b_high", "n_rx", "mean_xi", "mean_se_ref",
    "mean_se_var", "match_rate", "mean_n_high", "mean_n_on", "trials",
)
_INT_COLUMNS = {"b_ref", "b_low", "b_high", "n_rx", "trials"}


class ConfigError(ValueError):
    pass


# key -> default as written in a config file
DEFAULTS = {
    "n_tx": "4",
    "n_rx": "64",
    "bandwidth": "1e9",
    "snr_db": "-20,-15,-10,-5,0,5,10,15,20,25,30",
    "trials": "1000",
    "seed": "20170901",
    "b_ref": "5",
    "level_pairs": "1:8,2:8,4:8,2:6,4:6",
    "algorithms": "GBA",
    "num_clusters": "2",
    "paths_per_cluster": "10",
    "angle_spread": str(ClusterModelParams().intra_cluster_angle_spread),
    "pathloss": "1",
    "fading_variance": "1",
    "draws": "10000",
    "workers": "1",
    "output": "",
    "format": "csv",
}


@dataclass(frozen=True)
class ExperimentFile:
    sweep: SweepConfig
    draws: int
    workers: int
    output: Optional[str]
    format: str


def parse_config_text(text: str, source: str = "<config>") -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower().replace("-", "_")
        if key not in DEFAULTS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = value
    return values


def _split(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def _parse_pair(token: str) -> tuple[int, int]:
    parts = token.replace("/", ":").split(":")
    if len(parts) != 2:
        raise ConfigError(f"level pair {token!r} must look like 'b_low:b_high'")
    return int(parts[0]), int(parts[1])


def build_experiment(values: dict, seed: Optional[int] = None, trials: Optional[int] = None) -> ExperimentFile:
    merged = {**DEFAULTS, **values}
    try:
        channel = ClusterModelParams(
            num_clusters=int(merged["num_clusters"]),
            paths_per_cluster=int(merged["paths_per_cluster"]),
            intra_cluster_angle_spread=float(merged["angle_spread"]),
            pathloss=float(merged["pathloss"]),
            fading_variance=float(merged["fading_variance"]),
        )
        sweep = SweepConfig(
            n_tx=int(merged["n_tx"]),
            n_rx=int(merged["n_rx"]),
            bandwidth=float(merged["bandwidth"]),
            snr_grid_db=tuple(float(v) for v in _split(merged["snr_db"])),
            trials=int(merged["trials"]) if trials is None else trials,
            master_seed=int(merged["seed"]) if seed is None else seed,
            b_ref=int(merged["b_ref"]),
            level_pairs=tuple(_parse_pair(t) for t in _split(merged["level_pairs"])),
            algorithms=tuple(_split(merged["algorithms"])),
            channel=channel,
        )
        draws, workers = int(merged["draws"]), int(merged["workers"])
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    fmt = merged["format"].lower()
    if fmt not in ("csv", "table"):
        raise ConfigError(f"format must be 'csv' or 'table', got {fmt!r}")
    if workers < 1:
        raise ConfigError("workers must be >= 1")
    return ExperimentFile(sweep=sweep, draws=draws, workers=workers, output=merged["output"] or None, format=fmt)


def load_experiment(path: Optional[str], seed: Optional[int] = None, trials: Optional[int] = None) -> ExperimentFile:
    if path is None:
        return build_experiment({}, seed, trials)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    return build_experiment(parse_config_text(text, str(path)), seed, trials)


def _fmt(column: str, value) -> str:
    if column in _INT_COLUMNS:
        return str(int(value))
    if isinstance(value, str):
        return value
    return f"{value:.6f}"


def summary_to_csv(summary: SweepSummary) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in summary.rows():
        writer.writerow([_fmt(col, getattr(row, col)) for col in CSV_COLUMNS])
    return buf.getvalue()


def summary_to_table(summary: SweepSummary) -> str:
    cols = ("snr_db", "algorithm", "b_low", "b_high", "mean_xi", "mean_se_ref", "mean_se_var",
            "match_rate", "mean_n_high", "mean_n_on")
    cfg = summary.config
    lines = [f"n_tx={cfg.n_tx} n_rx={cfg.n_rx} b_ref={cfg.b_ref} trials={cfg.trials} seed={cfg.master_seed}"]
    body = [[_fmt(c, getattr(r, c)) for c in cols] for r in summary.rows()]
    widths = [max(len(c), *(len(r[i]) for r in body)) for i, c in enumerate(cols)]
    lines.append("  ".join(c.rjust(w) for c, w in zip(cols, widths)))
    lines.extend("  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in body)
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> list[dict]:
    """Read a sweep CSV back into typed dicts."""
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append({
            k: (v if k == "algorithm" else int(v) if k in _INT_COLUMNS else float(v))
            for k, v in rec.items()
        })
    return rows


def _write(text: str, output: Optional[str]) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def cmd_sweep(config_path=None, output_path=None, seed=None, trials=None, workers=None) -> int:
    try:
        exp = load_experiment(config_path, seed, trials)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        summary = run_sweep(exp.sweep, workers=workers or exp.workers)
        text = summary_to_csv(summary) if exp.format == "csv" else summary_to_table(summary)
        _write(text, output_path or exp.output)
    except Exception as exc:  # noqa: BLE001 - reported through the exit status
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def eta_table(max_bits: int = 10) -> str:
    lines = ["b  eta"]
    lines += [f"{b:<2d} {eta(b):.5g}" for b in range(1, max_bits + 1)]
    return "\n".join(lines) + "\n"


def cmd_eta_table() -> int:
    sys.stdout.write(eta_table())
    return EXIT_OK


def cmd_channel_stats(config_path=None, seed=None, draws=None) -> int:
    try:
        exp = load_experiment(config_path, seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    n = exp.draws if draws is None else draws
    if n < 1:
        print("config error: no draws requested", file=sys.stderr)
        return EXIT_CONFIG
    try:
        stats = summarize_eigen_stats(exp.sweep, n)
    except Exception as exc:  # noqa: BLE001
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    cfg = exp.sweep
    print(f"channel {cfg.n_rx}x{cfg.n_tx}, {cfg.channel.num_clusters} clusters x "
          f"{cfg.channel.paths_per_cluster} paths, spread {cfg.channel.intra_cluster_angle_spread} rad, "
          f"{stats.draws} draws")
    print(f"P(dominant fraction > 0.50) = {stats.p_above_half:.4f} +/- {stats.se_above_half:.4f}")
    print(f"P(dominant fraction > 0.75) = {stats.p_above_three_quarters:.4f} +/- {stats.se_above_three_quarters:.4f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varres", description="Variable-resolution ADC receiver simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a Monte Carlo sweep and write CSV")
    p.add_argument("--config", help="key = value experiment file")
    p.add_argument("--output", help="output path (default: stdout)")
    p.add_argument("--seed", type=int, help="override the master seed")
    p.add_argument("--trials", type=int, help="override the number of channel draws")
    p.add_argument("--workers", type=int, help="worker processes")

    sub.add_parser("eta-table", help="print the distortion factor for 1..10 bits")

    p = sub.add_parser("channel-stats", help="dominant-eigenmode energy statistics")
    p.add_argument("--config", help="key = value experiment file (channel keys are used)")
    p.add_argument("--seed", type=int, help="override the master seed")
    p.add_argument("--draws", type=int, help="number of channel draws (default 10000)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "sweep":
        return cmd_sweep(args.config, args.output, args.seed, args.trials, args.workers)
    if args.command == "eta-table":
        return cmd_eta_table()
    return cmd_channel_stats(args.config, args.seed, args.draws)


if __name__ == "__main__":
    sys.exit(main())
