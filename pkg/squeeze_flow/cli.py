#!/usr/bin/env python3
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from .config.params_loader import load_params_file
from .config.sim_config import DEFAULT_PARAMS, ParameterError, SimParams
from .core.driver import run
from .core.patterns import DropPattern, PatternError, make_pattern_random
from .core.schedule import SnapshotSchedule
from .dataset.generator import category_breakdown, generate_category
from .dataset.partition import (DatasetError, compile_root, example, partition_from_snapshots,
                                write_partition)
from .dataset.preprocessing import (build_splits, compute_norm_stats, coverage_filter, load_split_recipe,
                                    pixel_occurrence)
from .evaluation.crude_model import crude_predict
from .evaluation.metrics import MetricsError, best_threshold, evaluate, threshold_sweep, write_reports_csv
from .utils.environment import EnvironmentConfigError, load_runtime_env
from .utils.image_writer import ImageWriter

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

logger = logging.getLogger(__name__)


class UsageError(Exception):
    """Custom exception for invalid command-line input detected before any work starts"""
    pass


USAGE_ERRORS = (UsageError, ParameterError, PatternError, EnvironmentConfigError, FileNotFoundError)


def configure_logging(log_file: Optional[Path] = None, verbose: bool = False):
    """Stream handler always, file handler when requested"""
    handlers = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file, mode='a', encoding='utf-8'))
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def existing_dir(value: str) -> Path:
    path = Path(value)
    if not path.is_dir():
        raise argparse.ArgumentTypeError(f"Directory not found: {value}")
    return path


def existing_file(value: str) -> Path:
    path = Path(value)
    if not path.is_file():
        raise argparse.ArgumentTypeError(f"File not found: {value}")
    return path


def fraction(value: str) -> float:
    try:
        x = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Not a number: {value}")
    if not 0.0 <= x <= 1.0:
        raise argparse.ArgumentTypeError(f"Must lie in [0, 1]: {value}")
    return x


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per tool"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--log-file', type=Path, help='Append log records to this file')
    common.add_argument('--verbose', '-v', action='store_true', help='Log per-step solver diagnostics')
    common.add_argument('--env-file', type=existing_file, help='Path to .env file (SQFLOW_THREADS)')

    parser = argparse.ArgumentParser(
        prog='sqflow',
        description='Squeeze-flow imprint simulator and dataset toolchain'
    )
    commands = parser.add_subparsers(dest='command', required=True)

    simulate = commands.add_parser('simulate', parents=[common], help='Simulate one droplet pattern')
    source = simulate.add_mutually_exclusive_group(required=True)
    source.add_argument('--pattern', type=existing_file, help='Pattern file: 20 lines of 20 characters in {0,1}')
    source.add_argument('--category', type=int, help='Number of On pixels of a random pattern')
    simulate.add_argument('--seed', type=int, help='Seed of the random pattern (with --category)')
    simulate.add_argument('--params', type=existing_file, help='key=value parameter file')
    simulate.add_argument('--out', type=Path, required=True, help='Output partition directory')
    simulate.add_argument('--render', action='store_true', help='Write one PGM per snapshot under <out>/render')

    generate = commands.add_parser('generate', parents=[common], help='Generate a category of simulations')
    generate.add_argument('--category', type=int, required=True, help='On pixels per pattern')
    generate.add_argument('--sims', type=int, required=True, help='Number of simulations')
    generate.add_argument('--seed', type=int, default=0, help='Batch seed (default: 0)')
    generate.add_argument('--out', type=Path, required=True, help='Dataset root')
    generate.add_argument('--jobs', type=int, default=1, help='Worker processes (default: 1)')
    generate.add_argument('--params', type=existing_file, help='key=value parameter file')

    filter_ = commands.add_parser('filter', parents=[common], help='Apply the local coverage filter')
    filter_.add_argument('--in', dest='input', type=existing_dir, required=True, help='Dataset root')
    filter_.add_argument('--out', type=Path, required=True, help='Output partition directory')
    filter_.add_argument('--window', type=int, default=72, help='Interrogation window side (default: 72)')
    filter_.add_argument('--max-coverage', type=fraction, default=0.90,
                         help='Largest allowed local coverage (default: 0.9)')

    stats = commands.add_parser('stats', parents=[common], help='Log-space normalization statistics')
    stats.add_argument('--train', type=existing_dir, required=True, help='Training dataset root')

    baseline = commands.add_parser('baseline', parents=[common], help='Score the crude max-pooling model')
    baseline.add_argument('--dataset', type=existing_dir, required=True, help='Dataset root')
    baseline.add_argument('--threshold', type=fraction, default=0.5, help='Classification threshold (default: 0.5)')
    baseline.add_argument('--sweep', action='store_true', help='Also sweep thresholds 0.00..1.00 in steps of 0.05')
    baseline.add_argument('--csv', type=Path, help='Write metric rows to this CSV file')

    render = commands.add_parser('render', parents=[common], help='Render one dataset example as PGM')
    render.add_argument('--dataset', type=existing_dir, required=True, help='Dataset root')
    render.add_argument('--row', type=int, required=True, help='0-based example row')
    render.add_argument('--out', type=Path, required=True, help='Output image path')
    render.add_argument('--overlay', action='store_true', help='Also write the droplet pattern as <out>_dp.pgm')

    split = commands.add_parser('split', parents=[common], help='Assemble training/validation/test splits')
    split.add_argument('--recipe', type=existing_file, help='YAML split recipe (default: packaged recipe)')
    split.add_argument('--root', type=existing_dir, required=True, help='Generated dataset root')
    split.add_argument('--out', type=Path, required=True, help='Output directory, one partition per split')

    breakdown = commands.add_parser('breakdown', parents=[common], help='Per-category dataset breakdown')
    breakdown.add_argument('--root', type=existing_dir, required=True, help='Generated dataset root')
    breakdown.add_argument('--occurrence', type=Path, help='Write per-nozzle On counts as a CSV file')

    return parser


def _load_params(path: Optional[Path]) -> SimParams:
    return load_params_file(path) if path else DEFAULT_PARAMS


def cmd_simulate(args) -> int:
    params = _load_params(args.params)
    if args.pattern:
        if args.seed is not None:
            raise UsageError("--seed only applies to --category")
        dp = DropPattern.from_text(args.pattern.read_text(encoding='ascii'), params.nozzle_n)
    else:
        if args.seed is None:
            raise UsageError("--category requires --seed")
        dp = make_pattern_random(args.category, args.seed, params.nozzle_n)

    snapshots, status = run(dp, params, SnapshotSchedule())
    write_partition(partition_from_snapshots(snapshots), args.out)
    if args.render:
        writer = ImageWriter(args.out / 'render')
        for k, snapshot in enumerate(snapshots):
            writer.write_example(snapshot.imprint, f"snapshot_{k:03d}.pgm", snapshot.dp)
    print(f"examples={len(snapshots)} reason={status.reason} "
          f"t={status.final_t:.6e} h={status.final_h:.6e}")
    return 0


def cmd_generate(args) -> int:
    if args.sims < 1:
        raise UsageError(f"--sims must be positive, got {args.sims}")
    params = _load_params(args.params)
    make_pattern_random(args.category, args.seed, params.nozzle_n)
    jobs = load_runtime_env(args.env_file).cap_jobs(args.jobs)

    summary = generate_category(args.category, args.sims, args.seed, params, args.out, jobs=jobs)
    print(summary)
    if summary.failed:
        for sim_id, message in sorted(summary.failed.items()):
            print(f"failed sim {sim_id}: {message}")
        return 1
    return 0


def cmd_filter(args) -> int:
    if args.window < 1:
        raise UsageError(f"--window must be positive, got {args.window}")
    partition = compile_root(args.input)
    kept = coverage_filter(partition, args.window, args.max_coverage)
    write_partition(kept, args.out)
    print(f"kept={len(kept)} of={len(partition)}")
    return 0


def cmd_stats(args) -> int:
    stats = compute_norm_stats(compile_root(args.train))
    for key, value in stats.as_dict().items():
        print(f"{key}={value:.9e}")
    return 0


def cmd_baseline(args) -> int:
    partition = compile_root(args.dataset)
    if len(partition) == 0:
        raise DatasetError(f"No examples under {args.dataset}")
    preds, truths = [], []
    for row in range(len(partition)):
        _, _, dp, imprint = example(partition, row)
        preds.append(crude_predict(imprint))
        truths.append(dp)

    report = evaluate(preds, truths, args.threshold)
    print(report.to_text(), end='')
    reports = [report]
    if args.sweep:
        reports = threshold_sweep(preds, truths, np.round(np.linspace(0.0, 1.0, 21), 2).tolist())
        for r in reports:
            print(f"threshold={r.threshold:.2f} precision={r.precision:.4f} "
                  f"recall={r.recall:.4f} f1={r.f1:.4f}")
        print(f"best_threshold={best_threshold(reports).threshold:.2f}")
    if args.csv:
        write_reports_csv(reports, args.csv)
    return 0


def cmd_render(args) -> int:
    partition = compile_root(args.dataset)
    if not 0 <= args.row < len(partition):
        raise UsageError(f"Row {args.row} out of range for {len(partition)} examples")
    t, h, dp, imprint = example(partition, args.row)
    image, overlay = ImageWriter().write_example(imprint, args.out, dp if args.overlay else None)
    print(f"t={t:.8e} h={h:.8e} image={image}" + (f" overlay={overlay}" if overlay else ''))
    return 0


def cmd_split(args) -> int:
    recipe = load_split_recipe(args.recipe)
    splits = build_splits(recipe, args.root)
    for name, partition in splits.items():
        write_partition(partition, args.out / name)
        print(f"split={name} examples={len(partition)}")
    return 0


def cmd_breakdown(args) -> int:
    rows = category_breakdown(args.root)
    if not rows:
        raise DatasetError(f"No simulations under {args.root}")
    print("category,#Simulations,#Examples,mean|DP|")
    for row in rows:
        print(f"{row.category},{row.n_simulations},{row.n_examples},{row.mean_dp:.2f}")
    if args.occurrence:
        counts = pixel_occurrence(compile_root(args.root))
        args.occurrence.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(args.occurrence, counts, fmt='%d', delimiter=',')
        logger.info(f"Wrote nozzle occurrence counts to {args.occurrence}")
    return 0


COMMANDS = {
    'simulate': cmd_simulate,
    'generate': cmd_generate,
    'filter': cmd_filter,
    'stats': cmd_stats,
    'baseline': cmd_baseline,
    'render': cmd_render,
    'split': cmd_split,
    'breakdown': cmd_breakdown,
}


def run_cli(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments and run one command

    Returns:
        0 on success, 2 on usage errors, 1 on runtime failures
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    configure_logging(args.log_file, args.verbose)
    try:
        return COMMANDS[args.command](args)
    except USAGE_ERRORS as e:
        logger.error(f"Usage error: {str(e)}")
        return 2
    except (DatasetError, MetricsError) as e:
        logger.error(f"Dataset error: {str(e)}")
        return 1
    except Exception as e:
        logger.error(f"Application error: {str(e)}")
        return 1


def main():
    """Main entry point for the CLI"""
    exit_code = run_cli()
    sys.exit(exit_code)


if __name__ == "__main__":
    main()
