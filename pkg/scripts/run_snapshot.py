#!/usr/bin/env python3
"""Reproduce the block-0 sum-rate comparison (three schemes, three arrays).

Writes results/fig3_snapshot.csv; tune --trials for quicker looks.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from upafeedback import ExperimentConfig, emit_csv, run_snapshot_experiment


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=20250809)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", default="results/fig3_snapshot.csv")
    args = parser.parse_args()

    cfg = ExperimentConfig(trials=args.trials, master_seed=args.seed, output=args.out)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    rows = run_snapshot_experiment(cfg, threads=args.threads)
    emit_csv(rows, args.out)
    print(f"{len(rows)} rows -> {args.out} in {time.perf_counter() - start:.1f}s")
    for row in rows:
        print(
            f"  {row.geometry:4s} {row.scheme:22s} "
            f"{row.mean_sum_rate_bps_hz:7.3f} +/- {row.ci95_half_width:.3f} bps/Hz "
            f"({row.feedback_bits} bits, {row.discarded_trials} discarded)"
        )


if __name__ == "__main__":
    main()
