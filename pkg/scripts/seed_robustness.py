#!/usr/bin/env python3
"""How stable are the headline Q-learning numbers across base seeds?

For each seed, runs the default 10 x 300 configuration per app at
beta_e = 0.5 and reports pooled mean time / energy and the fraction of runs
whose greedy action matches the oracle.
"""

import argparse

import numpy as np

from iowt_offload import defaults
from iowt_offload.agent import Action, CostContext, Oracle, StateKey, greedy_policy
from iowt_offload.model import CostWeights, normalizers_from_heaviest
from iowt_offload.sim import SimConfig, StreamSpec, run_config


def oracle_action(cfg, app):
    ctx = CostContext(
        apps={StateKey.of(a): a for a in cfg.apps},
        wearable=cfg.wearable,
        smartphone=cfg.smartphone,
        rate_bps=cfg.link.base_rate_bps,
        weights=cfg.weights,
        normalizers=normalizers_from_heaviest(cfg.apps, cfg.wearable),
    )
    return Oracle().decide(StateKey.of(app), None, ctx)[0]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=20)
    parser.add_argument("--beta-e", type=float, default=0.5)
    args = parser.parse_args()

    print("app,seed_count,time_ms_mean,time_ms_sd,energy_mj_mean,energy_mj_sd,oracle_agreement")
    for i, app in enumerate(defaults.APPS):
        times, energies, agree = [], [], []
        for seed in range(args.seeds):
            cfg = SimConfig(
                base_seed=seed,
                stream=StreamSpec("per_app", i),
                weights=CostWeights.energy_weight(args.beta_e),
            )
            row, episodes = run_config(cfg)
            target = oracle_action(cfg, app)
            times.append(row.summary.time_s.mean * 1e3)
            energies.append(row.summary.energy_j.mean * 1e3)
            state = StateKey.of(app)
            agree += [greedy_policy(ep.qtable).get(state, Action.LOCAL) == target for ep in episodes]
        print(
            f"{app.name},{args.seeds},{np.mean(times):.3f},{np.std(times):.3f},"
            f"{np.mean(energies):.3f},{np.std(energies):.3f},{np.mean(agree):.3f}"
        )


if __name__ == "__main__":
    main()
