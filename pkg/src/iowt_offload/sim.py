"""Episode driver: task stream -> decision -> cost model -> Q-update, plus multi-run sweeps.

Each run owns a numpy Generator tree seeded from ``SeedSequence([base_seed,
run_index])``. The task stream and the agent/link draws come from separate
children, so every strategy sees the same task sequence for a given run.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import defaults
from .agent import (
    STRATEGIES,
    Action,
    CostContext,
    QTable,
    StateKey,
    make_strategy,
    update,
)
from .link import LinkModel, sample_rate
from .metrics import AggregateSummary, RunSummary, SummaryRow, aggregate, summarize
from .model import (
    ApplicationClass,
    ConfigError,
    CostWeights,
    DeviceProfile,
    EnergyBreakdown,
    Normalizers,
    TimeBreakdown,
    cost,
    local_totals,
    normalizers_from_heaviest,
    offload_totals,
)

__all__ = [
    "STREAM_KINDS",
    "StreamSpec",
    "SimConfig",
    "TaskOutcome",
    "Episode",
    "task_stream",
    "run_episode",
    "run_many",
    "run_config",
    "sweep_beta",
    "strategy_rows",
    "aggregate_of",
    "replay_cost",
]

STREAM_KINDS = ("per_app", "round_robin", "weighted_random")


@dataclass(frozen=True)
class StreamSpec:
    kind: str = "per_app"
    app_index: int = 0
    weights: tuple[float, ...] | None = None

    def validate(self, n_apps: int) -> None:
        if self.kind not in STREAM_KINDS:
            raise ConfigError(f"stream kind must be one of {STREAM_KINDS}, got {self.kind!r}")
        if self.kind == "per_app" and not (0 <= self.app_index < n_apps):
            raise ConfigError(f"app index {self.app_index} out of range for {n_apps} apps")
        if self.kind == "weighted_random":
            if self.weights is None or len(self.weights) != n_apps:
                raise ConfigError("weighted_random needs one weight per application class")
            if any(w < 0 for w in self.weights) or abs(sum(self.weights) - 1.0) > 1e-9:
                raise ConfigError(f"stream weights must be >= 0 and sum to 1, got {self.weights}")


@dataclass(frozen=True)
class SimConfig:
    apps: tuple[ApplicationClass, ...] = defaults.APPS
    wearable: DeviceProfile = defaults.WEARABLE
    smartphone: DeviceProfile = defaults.SMARTPHONE
    link: LinkModel = field(default_factory=LinkModel)
    weights: CostWeights = field(default_factory=CostWeights)
    tasks_per_run: int = defaults.TASKS_PER_RUN
    runs: int = defaults.RUNS
    base_seed: int = defaults.SEED
    stream: StreamSpec = field(default_factory=StreamSpec)
    alpha: float = defaults.ALPHA
    gamma: float = defaults.GAMMA
    strategy: str = "qlearning"
    jobs: int = 1

    def validate(self) -> None:
        if not self.apps:
            raise ConfigError("at least one application class is required")
        names = [a.name for a in self.apps]
        if len(set(names)) != len(names):
            raise ConfigError(f"application names must be unique, got {names}")
        if self.tasks_per_run < 1:
            raise ConfigError(f"tasks_per_run must be >= 1, got {self.tasks_per_run}")
        if self.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {self.runs}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        if not (0 <= self.base_seed < 2**64):
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.base_seed}")
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        QTable(alpha=self.alpha, gamma=self.gamma)
        self.stream.validate(len(self.apps))
        normalizers_from_heaviest(self.apps, self.wearable)

    def replace(self, **changes) -> "SimConfig":
        return dataclasses.replace(self, **changes)

    @property
    def stream_label(self) -> str:
        if self.stream.kind == "per_app":
            return self.apps[self.stream.app_index].name
        return self.stream.kind


@dataclass(frozen=True)
class TaskOutcome:
    task_index: int
    app: str
    state: StateKey
    action: Action
    time: TimeBreakdown
    energy: EnergyBreakdown
    cost: float
    explored: bool
    rate_bps: float | None = None


class Episode(NamedTuple):
    summary: RunSummary
    trace: list[TaskOutcome]
    qtable: QTable | None


def _run_seeds(base_seed: int, run_index: int) -> tuple[np.random.Generator, np.random.Generator]:
    stream_ss, agent_ss = np.random.SeedSequence([base_seed, run_index]).spawn(2)
    return np.random.default_rng(stream_ss), np.random.default_rng(agent_ss)


def task_stream(cfg: SimConfig, rng: np.random.Generator) -> list[int]:
    """Application index for each task of one run."""
    n, spec = cfg.tasks_per_run, cfg.stream
    if spec.kind == "per_app":
        return [spec.app_index] * n
    if spec.kind == "round_robin":
        return [i % len(cfg.apps) for i in range(n)]
    return [int(i) for i in rng.choice(len(cfg.apps), size=n, p=np.asarray(spec.weights))]


def run_episode(cfg: SimConfig, run_index: int) -> Episode:
    cfg.validate()
    stream_rng, rng = _run_seeds(cfg.base_seed, run_index)
    normalizers = normalizers_from_heaviest(cfg.apps, cfg.wearable)
    states = [StateKey.of(a) for a in cfg.apps]
    ctx = CostContext(
        apps=dict(zip(states, cfg.apps)),
        wearable=cfg.wearable,
        smartphone=cfg.smartphone,
        rate_bps=cfg.link.base_rate_bps,
        weights=cfg.weights,
        normalizers=normalizers,
    )
    strategy = make_strategy(cfg.strategy, cfg.alpha, cfg.gamma)
    order = task_stream(cfg, stream_rng)

    trace = []
    for i, app_idx in enumerate(order):
        app, s = cfg.apps[app_idx], states[app_idx]
        # the final task bootstraps from itself
        s_next = states[order[i + 1]] if i + 1 < len(order) else s
        action, explored = strategy.decide(s, rng, ctx)
        rate = None
        if action == Action.LOCAL:
            t, e = local_totals(app, cfg.wearable)
        else:
            rate = sample_rate(cfg.link, rng)
            t, e = offload_totals(app, rate, cfg.wearable, cfg.smartphone)
        c = cost(action, t, e, cfg.weights, normalizers)
        if strategy.learns:
            update(strategy.table, s, action, c, s_next)
        trace.append(TaskOutcome(i, app.name, s, action, t, e, c, explored, rate))

    summary = summarize(trace, run_index=run_index, seed=cfg.base_seed)
    return Episode(summary, trace, getattr(strategy, "table", None))


def _run_one(args: tuple[SimConfig, int]) -> Episode:
    return run_episode(*args)


def run_many(cfg: SimConfig) -> list[Episode]:
    """``cfg.runs`` independent episodes, ordered by run index whatever ``cfg.jobs`` is."""
    cfg.validate()
    work = [(cfg, i) for i in range(cfg.runs)]
    if cfg.jobs == 1 or cfg.runs == 1:
        return [_run_one(w) for w in work]
    with ProcessPoolExecutor(max_workers=min(cfg.jobs, cfg.runs)) as pool:
        return list(pool.map(_run_one, work))


def run_config(cfg: SimConfig) -> tuple[SummaryRow, list[Episode]]:
    episodes = run_many(cfg)
    agg = aggregate((ep.summary, ep.trace) for ep in episodes)
    row = SummaryRow(cfg.strategy, cfg.stream_label, cfg.weights.beta_e, cfg.weights.beta_t, agg)
    return row, episodes


def sweep_beta(cfg: SimConfig, beta_e_values: Sequence[float]) -> list[SummaryRow]:
    """One row per (app, beta_e), app-major and beta ascending, each app on its own stream."""
    weights = [CostWeights.energy_weight(float(b)) for b in beta_e_values]
    weights.sort(key=lambda w: w.beta_e)
    rows = []
    for app_index in range(len(cfg.apps)):
        for w in weights:
            sub = cfg.replace(stream=StreamSpec("per_app", app_index), weights=w)
            rows.append(run_config(sub)[0])
    return rows


def replay_cost(outcome: TaskOutcome, weights: CostWeights, normalizers: Normalizers) -> float:
    return cost(outcome.action, outcome.time, outcome.energy, weights, normalizers)


def strategy_rows(cfg: SimConfig, strategies: Sequence[str]) -> list[SummaryRow]:
    """Every app on its own stream under each strategy: app-major, strategies in given order."""
    rows = []
    for app_index in range(len(cfg.apps)):
        for name in strategies:
            sub = cfg.replace(stream=StreamSpec("per_app", app_index), strategy=name)
            rows.append(run_config(sub)[0])
    return rows


def aggregate_of(rows: Sequence[SummaryRow], strategy: str, app: str, beta_e: float) -> AggregateSummary:
    for r in rows:
        if r.strategy == strategy and r.app == app and r.beta_e == beta_e:
            return r.summary
    raise KeyError((strategy, app, beta_e))
