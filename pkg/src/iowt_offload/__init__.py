"""Q-learning computation offloading between a wearable and its paired smartphone."""

from .agent import Action, QTable, StateKey, epsilon, greedy_policy, select_action, update
from .link import LinkModel, calibrated_default, sample_rate, solve_rate
from .model import (
    ApplicationClass,
    ConfigError,
    CostWeights,
    DeviceProfile,
    EnergyBreakdown,
    Normalizers,
    TimeBreakdown,
    cost,
    local_exec_energy,
    local_exec_time,
    normalizers_from_heaviest,
    offload_totals,
    offload_transmit_time,
    remote_exec_time,
)
from .sim import SimConfig, StreamSpec, run_episode, run_many, sweep_beta

__version__ = "0.1.0"
