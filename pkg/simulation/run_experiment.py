#!/usr/bin/env python3
"""
Run echo experiments from the simulation directory.

Usage:
    python run_experiment.py run configs/echo_curve.cfg
    python run_experiment.py run configs/fig1_repro.cfg --full --workers 4
    python run_experiment.py estimate configs/eps_sweep.cfg
"""
import signal
import sys

from echolab.cli import main


def signal_handler(signum, frame):
    """Stop on SIGTERM like on Ctrl-C; partial member directories are left as written."""
    raise KeyboardInterrupt


if __name__ == '__main__':
    signal.signal(signal.SIGTERM, signal_handler)
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        sys.exit(130)
