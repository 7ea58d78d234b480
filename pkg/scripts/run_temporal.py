#!/usr/bin/env python3
"""Sum rate per fading block at 8x8 with Jakes-model temporal correlation.

Every scheme re-quantizes from scratch at each block, so the curves stay flat
up to Monte-Carlo noise.  Writes results/fig4_temporal.csv.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from upafeedback import ExperimentConfig, emit_csv, run_temporal_experiment


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=300)
    parser.add_argument("--blocks", type=int, default=6)
    parser.add_argument("--seed", type=int, default=20250809)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", default="results/fig4_temporal.csv")
    args = parser.parse_args()

    cfg = ExperimentConfig(
        geometries=((8, 8),),
        trials=args.trials,
        fading_blocks=args.blocks,
        master_seed=args.seed,
        output=args.out,
    )
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    rows = run_temporal_experiment(cfg, threads=args.threads)
    emit_csv(rows, args.out)
    print(f"{len(rows)} rows -> {args.out} in {time.perf_counter() - start:.1f}s")
    for row in rows:
        print(
            f"  m={row.fading_block} {row.scheme:22s} "
            f"{row.mean_sum_rate_bps_hz:7.3f} +/- {row.ci95_half_width:.3f} bps/Hz"
        )


if __name__ == "__main__":
    main()
