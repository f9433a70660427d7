#!/usr/bin/env python3
"""Write every figure preset CSV into one directory (default: results/figures)."""

import argparse
import time
from pathlib import Path

from iowt_offload.cli import FIGURES, reproduce
from iowt_offload.config import build_config, load_config


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/figures")
    parser.add_argument("--config", default=None)
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    cfg = build_config(load_config(args.config)).replace(jobs=args.jobs)
    for fig, what in FIGURES.items():
        start = time.perf_counter()
        path = reproduce(fig, cfg, Path(args.out))
        print(f"{fig:6s} {time.perf_counter() - start:6.2f}s  {what} -> {path}")


if __name__ == "__main__":
    main()
