"""Parametric wearable-to-smartphone link: an effective throughput per offloaded task."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import defaults
from .model import (
    ApplicationClass,
    ConfigError,
    DeviceProfile,
    local_exec_time,
    remote_exec_time,
)

__all__ = [
    "LINK_KINDS",
    "InfeasibleRatio",
    "LinkModel",
    "sample_rate",
    "solve_rate",
    "calibrated_default",
]

LINK_KINDS = ("deterministic", "stochastic")
FLOOR_FRACTION = 0.1


class InfeasibleRatio(ValueError):
    pass


@dataclass(frozen=True)
class LinkModel:
    """Effective data rate seen by the wearable.

    ``stochastic`` multiplies the base rate by log-normal noise, one draw per
    offloaded task, clamped below at ``floor_rate_bps`` (default 10% of base).
    """

    kind: str = "deterministic"
    base_rate_bps: float = defaults.RATE_BPS
    rel_sigma: float = 0.0
    floor_rate_bps: float | None = field(default=None)

    def __post_init__(self):
        if self.kind not in LINK_KINDS:
            raise ConfigError(f"link kind must be one of {LINK_KINDS}, got {self.kind!r}")
        if not (math.isfinite(self.base_rate_bps) and self.base_rate_bps > 0):
            raise ConfigError(f"base_rate_bps must be > 0, got {self.base_rate_bps!r}")
        if not (math.isfinite(self.rel_sigma) and self.rel_sigma >= 0):
            raise ConfigError(f"rel_sigma must be >= 0, got {self.rel_sigma!r}")
        if self.floor_rate_bps is None:
            object.__setattr__(self, "floor_rate_bps", FLOOR_FRACTION * self.base_rate_bps)
        if not (0 < self.floor_rate_bps <= self.base_rate_bps):
            raise ConfigError(
                f"floor_rate_bps must lie in (0, base_rate_bps], got {self.floor_rate_bps!r}"
            )


def sample_rate(link: LinkModel, rng: np.random.Generator) -> float:
    # the deterministic path must not consume draws, so the stream stays aligned
    if link.kind == "deterministic" or link.rel_sigma == 0.0:
        return link.base_rate_bps
    rate = link.base_rate_bps * math.exp(rng.normal(0.0, link.rel_sigma))
    return max(rate, link.floor_rate_bps)


def solve_rate(
    app: ApplicationClass,
    target_ratio: float,
    wearable: DeviceProfile = defaults.WEARABLE,
    smartphone: DeviceProfile = defaults.SMARTPHONE,
) -> float:
    """Rate R such that offloaded time / local time equals ``target_ratio`` for ``app``.

    Solves D/R + T_remote = ratio * T_local. The ratio has to exceed
    T_remote/T_local, otherwise the transmit time would be negative.
    """
    if not (math.isfinite(target_ratio) and target_ratio > 0):
        raise InfeasibleRatio(f"target ratio must be > 0, got {target_ratio!r}")
    t_local = local_exec_time(app, wearable)
    t_remote = remote_exec_time(app, smartphone)
    transmit = target_ratio * t_local - t_remote
    if transmit <= 0:
        bound = t_remote / t_local
        raise InfeasibleRatio(
            f"ratio {target_ratio:g} is infeasible for {app.name}: it must exceed "
            f"remote/local execution time = {bound:.6g}"
        )
    return app.input_bits / transmit


def calibrated_default() -> LinkModel:
    """Deterministic link solved from the IoT-sensors anchor (offloading takes 2.10x local)."""
    return LinkModel("deterministic", solve_rate(defaults.IOT_SENSORS, 2.10))
