"""Command-line front end.

    iowt-offload run        one configuration, all runs -> summary.csv [+ trace.csv]
    iowt-offload sweep      beta_e sweep over every configured app -> sweep.csv
    iowt-offload reproduce  figure presets (fig3 ... fig11) -> <fig>.csv
    iowt-offload calibrate  solve the effective link rate from time ratios

Exit status: 0 success, 2 usage or configuration error, 3 runtime or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Sequence

from . import defaults
from .agent import StateKey, dump_qtable_csv
from .config import apply_overrides, build_config, flat_defaults, load_config
from .link import InfeasibleRatio, solve_rate
from .metrics import emit_csv, emit_json, emit_trace_csv, quartiles
from .model import ConfigError
from .sim import SimConfig, StreamSpec, run_config, strategy_rows, sweep_beta

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 2, 3

SWEEP_BETAS = (0.0, 0.25, 0.5, 0.75, 1.0)

# short flags mapped onto config keys
ALIASES = {
    "strategy": "agent.strategy",
    "app": "stream.app",
    "beta_e": "weights.beta_e",
    "alpha": "agent.alpha",
    "gamma": "agent.gamma",
    "rate_bps": "link.base_rate_bps",
}

FIGURES = {
    "fig3": "average task time per app: local vs qlearning vs offload",
    "fig4": "average task energy per app: local vs qlearning vs offload",
    "fig5": "energy breakdown per app: local vs offload",
    "fig6": "beta_e sweep: average task time",
    "fig7": "beta_e sweep: average task energy",
    "fig8": "beta_e sweep: average cost",
    "fig9": "beta_e sweep: percentage of tasks offloaded",
    "fig10": "time and energy distributions under qlearning",
    "fig11": "offloaded-task count per run under qlearning",
}


class UsageError(Exception):
    pass


def _json_or_str(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _parser_for(default):
    if isinstance(default, bool):
        return lambda s: s.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        return int
    if isinstance(default, float):
        return float
    if isinstance(default, str):
        return str
    return _json_or_str


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="JSON config file (all keys optional)")
    p.add_argument("--out", metavar="DIR", default="results", help="output directory (default: results)")
    g = p.add_argument_group("config overrides")
    for key, default in flat_defaults().items():
        metavar = key.rsplit(".", 1)[-1].upper()
        help_text = f"config key {key} (default: {json.dumps(default)})"
        if key == "seed":
            help_text += "; the IOWT_SEED env var also overrides it, this flag wins"
        g.add_argument(f"--{key}", dest=key, type=_parser_for(default), metavar=metavar, help=help_text)
    g.add_argument("--strategy", dest="strategy", help="alias of --agent.strategy: local, offload, oracle, qlearning")
    g.add_argument("--app", dest="app", help="alias of --stream.app; also selects a per_app stream")
    g.add_argument("--beta-e", dest="beta_e", type=float, metavar="F", help="alias of --weights.beta_e")
    g.add_argument("--alpha", dest="alpha", type=float, metavar="F", help="alias of --agent.alpha")
    g.add_argument("--gamma", dest="gamma", type=float, metavar="F", help="alias of --agent.gamma")
    g.add_argument("--rate-bps", dest="rate_bps", type=float, metavar="F", help="alias of --link.base_rate_bps")


def _config_from_args(args) -> SimConfig:
    overrides = {}
    for key in flat_defaults():
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    for alias, key in ALIASES.items():
        value = getattr(args, alias, None)
        if value is not None:
            overrides[key] = value
    if args.app is not None:
        overrides["stream.kind"] = "per_app"
    raw = apply_overrides(load_config(args.config), overrides)
    return build_config(raw)


def cmd_run(args) -> int:
    cfg = _config_from_args(args)
    out = Path(args.out)
    row, episodes = run_config(cfg)
    emit_csv([row], out / "summary.csv")
    emit_json([row], out / "summary.json")
    if args.trace:
        emit_trace_csv(((ep.summary.run_index, ep.trace) for ep in episodes), out / "trace.csv")
        names = {StateKey.of(a): a.name for a in cfg.apps}
        for ep in episodes:
            if ep.qtable is not None:
                dump_qtable_csv(ep.qtable, names, out / f"qtable_run{ep.summary.run_index:02d}.csv")
    s = row.summary
    print(
        f"{row.strategy} {row.app} beta_e={row.beta_e:g}: mean time {s.time_s.mean:.6g} s, "
        f"mean energy {s.energy_j.mean:.6g} J, offloaded {s.offload_percent:.2f}% -> {out / 'summary.csv'}"
    )
    return EXIT_OK


def parse_betas(text: str) -> list[float]:
    try:
        betas = [float(b) for b in text.split(",") if b.strip()]
    except ValueError:
        raise ConfigError(f"betas must be comma-separated numbers, got {text!r}") from None
    if not betas:
        raise ConfigError("at least one beta_e value is required")
    for b in betas:
        if not 0.0 <= b <= 1.0:
            raise ConfigError(f"beta_e values must lie in [0, 1], got {b:g}")
    return betas


def cmd_sweep(args) -> int:
    cfg = _config_from_args(args)
    betas = parse_betas(args.betas)
    rows = sweep_beta(cfg, betas)
    out = Path(args.out)
    emit_csv(rows, out / "sweep.csv")
    emit_json(rows, out / "sweep.json")
    print(f"{len(rows)} rows ({len(cfg.apps)} apps x {len(betas)} betas) -> {out / 'sweep.csv'}")
    return EXIT_OK


def _write_table(path: Path, columns: Sequence[str], rows: Sequence[Sequence]) -> None:
    def fmt(v):
        return f"{v:.9g}" if isinstance(v, float) else str(v)

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(columns)
            w.writerows([fmt(v) for v in r] for r in rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def energy_breakdown_rows(cfg: SimConfig) -> list[list]:
    rows = []
    for app_index, app in enumerate(cfg.apps):
        for strategy in ("local", "offload"):
            sub = cfg.replace(stream=StreamSpec("per_app", app_index), strategy=strategy)
            _, episodes = run_config(sub)
            pooled = [o.energy for ep in episodes for o in ep.trace]
            n = len(pooled)
            rows.append([
                app.name,
                strategy,
                sum(e.tx_wearable_j for e in pooled) / n,
                sum(e.rx_smartphone_j for e in pooled) / n,
                sum(e.exec_j for e in pooled) / n,
                sum(e.idle_wearable_j for e in pooled) / n,
                sum(e.total_j for e in pooled) / n,
            ])
    return rows


def reproduce(figure: str, cfg: SimConfig, out: Path) -> Path:
    """Run one figure preset and write the CSV behind it; returns the path written."""
    if figure not in FIGURES:
        raise UsageError(f"unknown figure {figure!r}; valid ids: {', '.join(FIGURES)}")
    path = out / f"{figure}.csv"
    if figure in ("fig3", "fig4"):
        emit_csv(strategy_rows(cfg, ("local", "qlearning", "offload")), path)
    elif figure == "fig5":
        _write_table(
            path,
            ("app", "strategy", "tx_j", "rx_j", "exec_j", "idle_j", "total_j"),
            energy_breakdown_rows(cfg),
        )
    elif figure in ("fig6", "fig7", "fig8", "fig9"):
        emit_csv(sweep_beta(cfg.replace(strategy="qlearning"), SWEEP_BETAS), path)
    elif figure == "fig10":
        rows = []
        for app_index, app in enumerate(cfg.apps):
            sub = cfg.replace(stream=StreamSpec("per_app", app_index), strategy="qlearning")
            s = run_config(sub)[0].summary
            for metric, d in (("time_s", s.time_s), ("energy_j", s.energy_j)):
                rows.append([app.name, metric, d.mean, d.min, d.q1, d.median, d.q3, d.max])
        _write_table(path, ("app", "metric", "mean", "min", "q1", "median", "q3", "max"), rows)
    else:
        rows = []
        for app_index, app in enumerate(cfg.apps):
            sub = cfg.replace(stream=StreamSpec("per_app", app_index), strategy="qlearning")
            s = run_config(sub)[0].summary
            counts = s.offloaded_per_run
            q1, med, q3 = quartiles(counts)
            for run, count in enumerate(counts):
                rows.append([app.name, run, count, s.tasks_per_run, q1, med, q3])
        _write_table(
            path,
            ("app", "run", "offloaded_tasks", "tasks_per_run", "q1_offloaded", "median_offloaded", "q3_offloaded"),
            rows,
        )
    return path


def cmd_reproduce(args) -> int:
    if args.figure not in FIGURES:
        raise UsageError(f"unknown figure {args.figure!r}; valid ids: {', '.join(FIGURES)}")
    cfg = _config_from_args(args)
    path = reproduce(args.figure, cfg, Path(args.out))
    print(f"{args.figure} ({FIGURES[args.figure]}) -> {path}")
    return EXIT_OK


def cmd_calibrate(args) -> int:
    light = solve_rate(defaults.IOT_SENSORS, args.light)
    heavy = solve_rate(defaults.FACE_RECOGNITION, args.heavy)
    gap = abs(light - heavy) / max(light, heavy)
    print(f"{defaults.IOT_SENSORS.name} ratio {args.light:g}: {light:.6g} bps")
    print(f"{defaults.FACE_RECOGNITION.name} ratio {args.heavy:g}: {heavy:.6g} bps")
    if args.parity is not None:
        parity = solve_rate(defaults.FOUR_QUEENS, args.parity)
        print(f"{defaults.FOUR_QUEENS.name} ratio {args.parity:g}: {parity:.6g} bps")
    print(f"relative gap: {100 * gap:.3f}%")
    if gap > 0.02:
        print(f"warning: anchor rates disagree by {100 * gap:.2f}% (> 2%)", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iowt-offload",
        description="Q-learning offloading between a wearable and a smartphone.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one configuration for all runs")
    _add_config_flags(p)
    p.add_argument("--trace", action="store_true", help="also write per-task trace.csv and Q-table dumps")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="sweep beta_e over every configured app")
    _add_config_flags(p)
    p.add_argument("--betas", default=",".join(f"{b:g}" for b in SWEEP_BETAS), help="comma-separated beta_e values")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("reproduce", help="emit the CSV backing one figure preset")
    p.add_argument("figure", help="one of: " + ", ".join(FIGURES))
    _add_config_flags(p)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("calibrate", help="solve the effective link rate from offload/local time ratios")
    p.add_argument("--light", type=float, default=2.10, help="offload/local time ratio for iot_sensors")
    p.add_argument("--heavy", type=float, default=0.62, help="offload/local time ratio for face_recognition")
    p.add_argument("--parity", type=float, default=None, help="optional ratio for 4_queens")
    p.set_defaults(func=cmd_calibrate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, UsageError, InfeasibleRatio) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
