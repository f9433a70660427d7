"""Strict JSON configuration.

Every key is optional and falls back to the built-in defaults; unknown keys
are an error. Schema (dotted names are also the CLI override flags)::

    seed, runs, tasks, jobs
    apps                  list of {name, input_bits, cycles_per_bit}
    wearable.*            cpu_hz, switched_capacitance, tx_power_w, rx_power_w, idle_power_w
    smartphone.*          same fields as wearable
    link.*                kind, base_rate_bps, rel_sigma, floor_rate_bps
    weights.beta_e        beta_t is 1 - beta_e
    agent.*               alpha, gamma, strategy
    stream.*              kind, app (name), weights ({app name: weight})
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any

from . import defaults
from .link import LinkModel
from .model import ApplicationClass, ConfigError, CostWeights, DeviceProfile
from .sim import SimConfig, StreamSpec

__all__ = ["DEFAULTS", "SEED_ENV", "flat_defaults", "load_config", "apply_overrides", "build_config"]

SEED_ENV = "IOWT_SEED"


def _device(d: DeviceProfile) -> dict:
    return {
        "cpu_hz": d.cpu_hz,
        "switched_capacitance": d.switched_capacitance,
        "tx_power_w": d.tx_power_w,
        "rx_power_w": d.rx_power_w,
        "idle_power_w": d.idle_power_w,
    }


DEFAULTS: dict[str, Any] = {
    "seed": defaults.SEED,
    "runs": defaults.RUNS,
    "tasks": defaults.TASKS_PER_RUN,
    "jobs": 1,
    "apps": [
        {"name": a.name, "input_bits": a.input_bits, "cycles_per_bit": a.cycles_per_bit}
        for a in defaults.APPS
    ],
    "wearable": _device(defaults.WEARABLE),
    "smartphone": _device(defaults.SMARTPHONE),
    "link": {
        "kind": "deterministic",
        "base_rate_bps": defaults.RATE_BPS,
        "rel_sigma": 0.0,
        "floor_rate_bps": None,
    },
    "weights": {"beta_e": defaults.BETA_E},
    "agent": {"alpha": defaults.ALPHA, "gamma": defaults.GAMMA, "strategy": "qlearning"},
    "stream": {"kind": "per_app", "app": defaults.APPS[0].name, "weights": None},
}

_APP_KEYS = {"name", "input_bits", "cycles_per_bit"}


def flat_defaults() -> dict[str, Any]:
    """Dotted key -> default value for every leaf of the schema."""
    out = {}
    for key, value in DEFAULTS.items():
        if isinstance(value, dict):
            for sub, v in value.items():
                out[f"{key}.{sub}"] = v
        else:
            out[key] = value
    return out


def _merge(base: dict, doc: dict, where: str = "") -> dict:
    merged = dict(base)
    for key, value in doc.items():
        name = f"{where}{key}"
        if key not in base:
            raise ConfigError(f"unknown config key {name!r}")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"config key {name!r} must be an object")
            merged[key] = _merge(base[key], value, f"{name}.")
        else:
            merged[key] = value
    return merged


def load_config(path: str | Path | None = None) -> dict[str, Any]:
    doc: dict = {}
    if path is not None:
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
    raw = _merge(DEFAULTS, doc)
    env_seed = os.environ.get(SEED_ENV)
    if env_seed:
        try:
            raw["seed"] = int(env_seed)
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer, got {env_seed!r}") from None
    return raw


def apply_overrides(raw: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    """Set dotted keys (``link.kind``) or top-level ones (``seed``) on a loaded config."""
    raw = json.loads(json.dumps(raw))
    for dotted, value in overrides.items():
        head, _, tail = dotted.partition(".")
        if head not in raw or (tail and (not isinstance(raw[head], dict) or tail not in raw[head])):
            raise ConfigError(f"unknown config key {dotted!r}")
        if tail:
            raw[head][tail] = value
        else:
            raw[head] = value
    return raw


def _number(raw: dict, key: str, kind=float):
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"config key {key!r} must be a number, got {value!r}")
    if kind is int:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"config key {key!r} must be an integer, got {value!r}")
        return int(value)
    return float(value)


def _section(raw: dict, name: str) -> dict:
    return {f"{name}.{k}": v for k, v in raw[name].items()}


def build_config(raw: dict[str, Any]) -> SimConfig:
    apps = []
    for i, entry in enumerate(raw["apps"]):
        if not isinstance(entry, dict) or set(entry) != _APP_KEYS:
            raise ConfigError(f"apps[{i}] must have exactly the keys {sorted(_APP_KEYS)}")
        apps.append(
            ApplicationClass(
                str(entry["name"]),
                _number(entry, "input_bits"),
                _number(entry, "cycles_per_bit"),
            )
        )
    if not apps:
        raise ConfigError("apps must list at least one application class")
    names = [a.name for a in apps]

    def device(name):
        sec = _section(raw, name)
        return DeviceProfile(**{k.split(".", 1)[1]: _number(sec, k) for k in sec})

    link_sec = _section(raw, "link")
    floor = link_sec["link.floor_rate_bps"]
    link = LinkModel(
        kind=str(link_sec["link.kind"]),
        base_rate_bps=_number(link_sec, "link.base_rate_bps"),
        rel_sigma=_number(link_sec, "link.rel_sigma"),
        floor_rate_bps=None if floor is None else _number(link_sec, "link.floor_rate_bps"),
    )

    stream = raw["stream"]
    kind = stream["kind"]
    app_index = 0
    if kind == "per_app":
        if stream["app"] not in names:
            raise ConfigError(f"stream.app {stream['app']!r} is not one of {names}")
        app_index = names.index(stream["app"])
    weights = None
    if stream["weights"] is not None:
        if not isinstance(stream["weights"], dict) or set(stream["weights"]) != set(names):
            raise ConfigError(f"stream.weights must map every app name {names} to a weight")
        weights = tuple(float(stream["weights"][n]) for n in names)

    agent = _section(raw, "agent")
    cfg = SimConfig(
        apps=tuple(apps),
        wearable=device("wearable"),
        smartphone=device("smartphone"),
        link=link,
        weights=CostWeights.energy_weight(_number(_section(raw, "weights"), "weights.beta_e")),
        tasks_per_run=_number(raw, "tasks", int),
        runs=_number(raw, "runs", int),
        base_seed=_number(raw, "seed", int),
        stream=StreamSpec(str(kind), app_index, weights),
        alpha=_number(agent, "agent.alpha"),
        gamma=_number(agent, "agent.gamma"),
        strategy=str(agent["agent.strategy"]),
        jobs=_number(raw, "jobs", int),
    )
    cfg.validate()
    return cfg
