"""Command-line front end: ``simulate --config <path> [options]``.

Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, ExperimentConfig, load_config
from .harness import emit_csv, run_snapshot_experiment, run_temporal_experiment

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Run the limited-feedback UPA sum-rate Monte-Carlo experiments.",
    )
    parser.add_argument("--config", help="flat key-value config file (defaults apply without it)")
    parser.add_argument("--seed", type=int, help="override the master seed")
    parser.add_argument("--out", help="override the output CSV path")
    parser.add_argument(
        "--experiment",
        choices=("snapshot", "temporal"),
        default="snapshot",
        help="snapshot: block-0 sum rates; temporal: per-fading-block sum rates",
    )
    parser.add_argument(
        "--threads", type=int, default=1,
        help="worker processes (affects speed only, never results)",
    )
    parser.add_argument("--verbose", action="store_true", help="log progress")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = load_config(args.config) if args.config else ExperimentConfig()
        if args.seed is not None:
            cfg = cfg.override(master_seed=args.seed)
        if args.out is not None:
            cfg = cfg.override(output=args.out)
        if args.threads < 1:
            raise ConfigError(f"--threads must be >= 1, got {args.threads}")
        cfg.validate()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        if args.experiment == "snapshot":
            rows = run_snapshot_experiment(cfg, threads=args.threads)
        else:
            rows = run_temporal_experiment(cfg, threads=args.threads)
        emit_csv(rows, cfg.output)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    if args.verbose:
        print(f"wrote {len(rows)} rows to {cfg.output}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
