"""Closed-form time, energy and cost model for wearable-to-smartphone offloading.

Everything here is pure float arithmetic over frozen value types. Sizes are in
bits (1 MB = 8e6 bits), times in seconds, energies in joules.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

__all__ = [
    "BITS_PER_MB",
    "ConfigError",
    "ExecutionSite",
    "ApplicationClass",
    "DeviceProfile",
    "TimeBreakdown",
    "EnergyBreakdown",
    "CostWeights",
    "Normalizers",
    "local_exec_time",
    "local_exec_energy",
    "offload_transmit_time",
    "remote_exec_time",
    "local_totals",
    "offload_totals",
    "cost",
    "normalizers_from_heaviest",
]

BITS_PER_MB = 8e6


class ConfigError(ValueError):
    """Raised when a parameter or configuration violates its invariants."""


class ExecutionSite(enum.IntEnum):
    LOCAL = 0
    OFFLOAD = 1


def _check_finite(name: str, value: float, *, positive: bool = False) -> None:
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite, got {value!r}")
    if positive and value <= 0:
        raise ConfigError(f"{name} must be > 0, got {value!r}")
    if value < 0:
        raise ConfigError(f"{name} must be >= 0, got {value!r}")


@dataclass(frozen=True)
class ApplicationClass:
    """A task template: every task of the class has the same input size and intensity."""

    name: str
    input_bits: float
    cycles_per_bit: float

    def __post_init__(self):
        # zero is tolerated as a degenerate task; negatives are not
        _check_finite("input_bits", self.input_bits)
        _check_finite("cycles_per_bit", self.cycles_per_bit)

    @property
    def cycles(self) -> float:
        return self.input_bits * self.cycles_per_bit


@dataclass(frozen=True)
class DeviceProfile:
    cpu_hz: float
    switched_capacitance: float = 1e-28
    tx_power_w: float = 0.0
    rx_power_w: float = 0.0
    idle_power_w: float = 0.0

    def __post_init__(self):
        _check_finite("cpu_hz", self.cpu_hz, positive=True)
        _check_finite("switched_capacitance", self.switched_capacitance, positive=True)
        _check_finite("tx_power_w", self.tx_power_w)
        _check_finite("rx_power_w", self.rx_power_w)
        _check_finite("idle_power_w", self.idle_power_w)


@dataclass(frozen=True)
class TimeBreakdown:
    transmit_s: float
    exec_s: float

    @property
    def total_s(self) -> float:
        return self.transmit_s + self.exec_s


@dataclass(frozen=True)
class EnergyBreakdown:
    tx_wearable_j: float = 0.0
    rx_smartphone_j: float = 0.0
    exec_j: float = 0.0
    idle_wearable_j: float = 0.0

    @property
    def total_j(self) -> float:
        return self.tx_wearable_j + self.rx_smartphone_j + self.exec_j + self.idle_wearable_j


@dataclass(frozen=True)
class CostWeights:
    beta_e: float = 0.5
    beta_t: float = 0.5

    def __post_init__(self):
        for name, value in (("beta_e", self.beta_e), ("beta_t", self.beta_t)):
            if not (0.0 <= value <= 1.0):
                raise ConfigError(f"{name} must lie in [0, 1], got {value!r}")
        if abs(self.beta_e + self.beta_t - 1.0) > 1e-12:
            raise ConfigError(
                f"beta_e + beta_t must equal 1, got {self.beta_e} + {self.beta_t}"
            )

    @classmethod
    def energy_weight(cls, beta_e: float) -> "CostWeights":
        if not (0.0 <= beta_e <= 1.0):
            raise ConfigError(f"beta_e must lie in [0, 1], got {beta_e!r}")
        return cls(beta_e=beta_e, beta_t=1.0 - beta_e)


@dataclass(frozen=True)
class Normalizers:
    e_max_j: float
    t_max_s: float

    def __post_init__(self):
        _check_finite("e_max_j", self.e_max_j, positive=True)
        _check_finite("t_max_s", self.t_max_s, positive=True)


def local_exec_time(app: ApplicationClass, wearable: DeviceProfile) -> float:
    return app.cycles / wearable.cpu_hz


def local_exec_energy(app: ApplicationClass, wearable: DeviceProfile) -> float:
    return wearable.switched_capacitance * wearable.cpu_hz**2 * app.cycles


def offload_transmit_time(app: ApplicationClass, rate_bps: float) -> float:
    if not rate_bps > 0:
        raise ConfigError(f"rate_bps must be > 0, got {rate_bps!r}")
    return app.input_bits / rate_bps


def remote_exec_time(app: ApplicationClass, smartphone: DeviceProfile) -> float:
    return app.cycles / smartphone.cpu_hz


def local_totals(
    app: ApplicationClass, wearable: DeviceProfile
) -> tuple[TimeBreakdown, EnergyBreakdown]:
    time = TimeBreakdown(transmit_s=0.0, exec_s=local_exec_time(app, wearable))
    energy = EnergyBreakdown(exec_j=local_exec_energy(app, wearable))
    return time, energy


def offload_totals(
    app: ApplicationClass,
    rate_bps: float,
    wearable: DeviceProfile,
    smartphone: DeviceProfile,
) -> tuple[TimeBreakdown, EnergyBreakdown]:
    """Time and energy of shipping the input to the smartphone and running it there.

    The wearable pays radio power while transmitting and idle power while the
    smartphone computes; the smartphone pays reception and dynamic CPU energy.
    Returning the (small) result is free.
    """
    transmit_s = offload_transmit_time(app, rate_bps)
    exec_s = remote_exec_time(app, smartphone)
    energy = EnergyBreakdown(
        tx_wearable_j=wearable.tx_power_w * transmit_s,
        rx_smartphone_j=smartphone.rx_power_w * transmit_s,
        exec_j=smartphone.switched_capacitance * smartphone.cpu_hz**2 * app.cycles,
        idle_wearable_j=wearable.idle_power_w * exec_s,
    )
    return TimeBreakdown(transmit_s=transmit_s, exec_s=exec_s), energy


def cost(
    action: ExecutionSite,
    time: TimeBreakdown,
    energy: EnergyBreakdown,
    w: CostWeights,
    n: Normalizers,
) -> float:
    """Weighted sum of normalized energy and time. Not clamped: offloaded heavy tasks exceed 1.

    ``action`` only labels which totals were passed in; both actions share the
    same formula once their breakdowns are known.
    """
    ExecutionSite(action)
    return w.beta_e * (energy.total_j / n.e_max_j) + w.beta_t * (time.total_s / n.t_max_s)


def normalizers_from_heaviest(
    apps: Iterable[ApplicationClass], wearable: DeviceProfile
) -> Normalizers:
    apps = list(apps)
    if not apps:
        raise ConfigError("at least one application class is required")
    return Normalizers(
        e_max_j=max(local_exec_energy(a, wearable) for a in apps),
        t_max_s=max(local_exec_time(a, wearable) for a in apps),
    )
