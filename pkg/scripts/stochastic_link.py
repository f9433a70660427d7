#!/usr/bin/env python3
"""Offload share and cost under a log-normal link, for growing rate noise."""

import argparse

from iowt_offload import defaults
from iowt_offload.link import LinkModel
from iowt_offload.model import CostWeights
from iowt_offload.sim import SimConfig, StreamSpec, run_config


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sigmas", default="0,0.1,0.25,0.5,1.0")
    parser.add_argument("--beta-e", type=float, default=0.0)
    args = parser.parse_args()

    print("app,rel_sigma,strategy,mean_time_s,mean_energy_j,offload_percent,mean_cost")
    for sigma in (float(s) for s in args.sigmas.split(",")):
        link = LinkModel("stochastic", defaults.RATE_BPS, rel_sigma=sigma)
        for i, app in enumerate(defaults.APPS):
            for strategy in ("qlearning", "oracle"):
                cfg = SimConfig(
                    link=link,
                    stream=StreamSpec("per_app", i),
                    weights=CostWeights.energy_weight(args.beta_e),
                    strategy=strategy,
                )
                s = run_config(cfg)[0].summary
                print(
                    f"{app.name},{sigma:g},{strategy},{s.time_s.mean:.6g},"
                    f"{s.energy_j.mean:.6g},{s.offload_percent:.2f},{s.cost.mean:.6g}"
                )


if __name__ == "__main__":
    main()
