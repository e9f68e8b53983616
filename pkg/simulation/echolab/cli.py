"""
Command-line entry point.

    python -m echolab run <config> [--workers N] [--output DIR] [--full]
    python -m echolab estimate <config> [--full] [--no-benchmark]

Exit codes: 0 success, 2 invalid config or input, 3 step budget exceeded,
1 any other failure.
"""
import argparse
import logging
import os
import sys
from pathlib import Path

from echolab import __version__, create_context
from echolab.errors import EchoLabError, StepBudgetError, log_error
from echolab.jobs.cost import estimate_cost
from echolab.jobs.experiments import RunOptions, run_experiment
from echolab.jobs.schema import FIG1_FULL_N, ExperimentKind, load_config

logger = logging.getLogger('echolab.cli')

EXIT_OK = 0
EXIT_FAILURE = 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog='echolab',
        description='Boltzmann echo experiments for coupled kicked rotators'
    )
    parser.add_argument('--version', action='version', version=f"echolab {__version__}")
    parser.add_argument('--env', default=os.environ.get('ECHO_ENV', 'default'),
                        help='Settings profile: development, production, testing or default')
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help='Run an experiment config')
    run.add_argument('config', help='Path to a key = value experiment config')
    run.add_argument('--workers', type=int, default=None, help='Worker processes for realizations')
    run.add_argument('--output', default=None, help='Output directory (overrides the config)')
    run.add_argument('--full', action='store_true', help=f'fig1_repro at N={FIG1_FULL_N}')

    estimate = commands.add_parser('estimate', help='Predict steps, memory and wall time')
    estimate.add_argument('config', help='Path to a key = value experiment config')
    estimate.add_argument('--full', action='store_true', help=f'fig1_repro at N={FIG1_FULL_N}')
    estimate.add_argument('--no-benchmark', action='store_true', help='Skip the timing run')
    return parser


def _apply_full(config, full):
    if full and config.kind is ExperimentKind.FIG1_REPRO:
        return config.with_values(N=FIG1_FULL_N)
    return config


def _output_dir(args, config, settings):
    if args.output:
        return Path(args.output)
    if config.output:
        return Path(config.output)
    return Path(settings.OUTPUT_DIR) / Path(args.config).stem


def run_command(args, context):
    config = _apply_full(load_config(args.config), args.full)
    settings = context.settings

    cost = estimate_cost(config)
    if cost.total_steps > settings.STEP_BUDGET:
        raise StepBudgetError(cost.total_steps, settings.STEP_BUDGET, cost.to_dict())

    from logging_config import get_error_stats

    options = RunOptions(
        workers=args.workers if args.workers is not None else context.workers,
        fft_workers=settings.FFT_WORKERS,
        step_budget=settings.STEP_BUDGET,
        precision=settings.CSV_PRECISION,
        error_stats=get_error_stats,
    )
    result = run_experiment(config, _output_dir(args, config, settings), options)
    print(f"{config.kind.value}: completed in {result['duration']:.2f}s -> {result['output_dir']}")
    return EXIT_OK


def estimate_command(args, context):
    config = _apply_full(load_config(args.config), args.full)
    cost = estimate_cost(config, benchmark=not args.no_benchmark, fft_workers=context.settings.FFT_WORKERS)
    for line in cost.lines():
        print(line)
    if cost.total_steps > context.settings.STEP_BUDGET:
        print(f"exceeds step budget {context.settings.STEP_BUDGET}")
    return EXIT_OK


COMMANDS = {
    'run': run_command,
    'estimate': estimate_command,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    context = create_context(args.env)

    try:
        return COMMANDS[args.command](args, context)
    except StepBudgetError as e:
        log_error(e, {'command': args.command, 'config': args.config})
        print(f"error: {e.message}", file=sys.stderr)
        for key in ('total_steps', 'steps_per_realization', 'realizations', 'curves', 'peak_memory_bytes'):
            if key in e.details:
                print(f"  {key}: {e.details[key]}", file=sys.stderr)
        return e.exit_code
    except EchoLabError as e:
        log_error(e, {'command': args.command, 'config': args.config})
        print(f"error: {e.message}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        log_error(e, {'command': args.command, 'config': args.config})
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
