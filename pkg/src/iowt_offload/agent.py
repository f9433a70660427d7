"""Offloading decision strategies: tabular Q-learning and the fixed baselines.

Q-values estimate long-term *cost*, so greedy selection is an argmin. Ties
always resolve to local execution.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, NamedTuple

import numpy as np

from .model import (
    ApplicationClass,
    ConfigError,
    CostWeights,
    DeviceProfile,
    ExecutionSite,
    Normalizers,
    cost,
    local_totals,
    offload_totals,
)

__all__ = [
    "Action",
    "StateKey",
    "QTable",
    "CostContext",
    "AlwaysLocal",
    "AlwaysOffload",
    "Oracle",
    "QLearning",
    "STRATEGIES",
    "make_strategy",
    "epsilon",
    "select_action",
    "update",
    "decide",
    "greedy_policy",
    "dump_qtable_csv",
]

Action = ExecutionSite


class StateKey(NamedTuple):
    input_bits: int
    cycles_per_bit_milli: int

    @classmethod
    def of(cls, app: ApplicationClass) -> "StateKey":
        return cls(round(app.input_bits), round(app.cycles_per_bit * 1000))


def _argmin(q_local: float, q_offload: float) -> Action:
    return Action.OFFLOAD if q_offload < q_local else Action.LOCAL


@dataclass
class QTable:
    alpha: float = 0.5
    gamma: float = 0.9
    entries: dict = field(default_factory=dict)
    visits: dict = field(default_factory=dict)
    k: int = 0

    def __post_init__(self):
        for name, value in (("alpha", self.alpha), ("gamma", self.gamma)):
            if not (0.0 <= value <= 1.0):
                raise ConfigError(f"{name} must lie in [0, 1], got {value!r}")

    def values(self, s: StateKey) -> tuple[float, float]:
        return self.entries.get(s, (0.0, 0.0))

    def __getitem__(self, key: tuple[StateKey, Action]) -> float:
        s, a = key
        return self.values(s)[a]


def epsilon(k: int) -> float:
    if k < 0:
        raise ValueError(f"iteration count must be >= 0, got {k}")
    return 1000.0 / (2000.0 + 50.0 * k)


def select_action(q: QTable, s: StateKey, rng: np.random.Generator) -> tuple[Action, bool]:
    """Epsilon-greedy choice. Returns the action and whether the random branch was taken."""
    r = rng.random()
    if r < 1.0 - epsilon(q.k):
        return _argmin(*q.values(s)), False
    return Action(int(rng.integers(2))), True


def update(q: QTable, s: StateKey, a: Action, cost: float, s_next: StateKey) -> None:
    if not math.isfinite(cost):
        raise ValueError(f"cost must be finite, got {cost!r}")
    target = cost + q.gamma * min(q.values(s_next))
    values = list(q.values(s))
    values[a] = (1.0 - q.alpha) * values[a] + q.alpha * target
    q.entries[s] = (values[0], values[1])
    counts = list(q.visits.get(s, (0, 0)))
    counts[a] += 1
    q.visits[s] = (counts[0], counts[1])
    q.k += 1


def greedy_policy(q: QTable) -> dict[StateKey, Action]:
    return {s: _argmin(*v) for s, v in q.entries.items()}


@dataclass(frozen=True)
class CostContext:
    """What the oracle needs to score both actions without sampling the link."""

    apps: Mapping[StateKey, ApplicationClass]
    wearable: DeviceProfile
    smartphone: DeviceProfile
    rate_bps: float
    weights: CostWeights
    normalizers: Normalizers

    def one_step_costs(self, s: StateKey) -> tuple[float, float]:
        app = self.apps[s]
        t, e = local_totals(app, self.wearable)
        c_local = cost(Action.LOCAL, t, e, self.weights, self.normalizers)
        t, e = offload_totals(app, self.rate_bps, self.wearable, self.smartphone)
        c_off = cost(Action.OFFLOAD, t, e, self.weights, self.normalizers)
        return c_local, c_off


class AlwaysLocal:
    name = "local"
    learns = False

    def decide(self, s, rng, ctx):
        return Action.LOCAL, False


class AlwaysOffload:
    name = "offload"
    learns = False

    def decide(self, s, rng, ctx):
        return Action.OFFLOAD, False


class Oracle:
    """Per-state argmin of the deterministic one-step cost at the link's base rate."""

    name = "oracle"
    learns = False

    def decide(self, s, rng, ctx):
        return _argmin(*ctx.one_step_costs(s)), False


class QLearning:
    name = "qlearning"
    learns = True

    def __init__(self, table: QTable | None = None):
        self.table = table if table is not None else QTable()

    def decide(self, s, rng, ctx):
        return select_action(self.table, s, rng)


STRATEGIES = ("local", "offload", "oracle", "qlearning")


def make_strategy(name: str, alpha: float = 0.5, gamma: float = 0.9):
    if name == "local":
        return AlwaysLocal()
    if name == "offload":
        return AlwaysOffload()
    if name == "oracle":
        return Oracle()
    if name == "qlearning":
        return QLearning(QTable(alpha=alpha, gamma=gamma))
    raise ConfigError(f"unknown strategy {name!r}; expected one of {STRATEGIES}")


def decide(strategy, s: StateKey, rng: np.random.Generator, ctx: CostContext | None = None) -> Action:
    return strategy.decide(s, rng, ctx)[0]


def dump_qtable_csv(q: QTable, names: Mapping[StateKey, str], path: str | Path) -> None:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["state_name", "q_local", "q_offload", "visits_local", "visits_offload"])
            for s in sorted(q.entries):
                q_local, q_off = q.entries[s]
                v_local, v_off = q.visits.get(s, (0, 0))
                name = names.get(s, f"{s.input_bits}:{s.cycles_per_bit_milli}")
                writer.writerow([name, f"{q_local:.9g}", f"{q_off:.9g}", v_local, v_off])
    except OSError as exc:
        raise OSError(f"cannot write Q-table to {path}: {exc.strerror or exc}") from exc
