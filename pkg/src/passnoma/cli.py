"""
Command-line entry point.

    passnoma sweep --metric blockage_n:nisic --metric rate_f:nlos --out sweep.csv
    passnoma preset fig2 --trials 200000 --out fig2.csv
    passnoma compare fig2.csv

Exit status: 0 success, 1 invalid input, 2 analytic/MC comparison failed,
3 I/O failure.
"""

import argparse
import logging
import os
import sys

from . import __version__
from .analytic import DEFAULT_QUAD_ORDER
from .errors import ConfigError
from .model import NetworkConfig, load_config
from .runner import (DEFAULT_OMEGA_I_LIST, ENGINES, PRESET_IDS, AXES, SweepSpec, compare_report,
                     figure_preset, parse_metric, read_dataset, run_preset, run_sweep)
from .simulator import DEFAULT_TRIALS, OmaScheme

logger = logging.getLogger("passnoma")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_COMPARE_FAILED = 2
EXIT_IO = 3


def _float_list(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated numbers, got %r" % text) from None
    if not values or any(v <= 0 for v in values):
        raise argparse.ArgumentTypeError("values must be positive")
    return values


def _add_run_options(p):
    p.add_argument("--config", help="key=value config file (defaults to the built-in scenario)")
    p.add_argument("--seed", type=int, default=0, help="master RNG seed (default: 0)")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help="Monte Carlo trials per point")
    p.add_argument("--out", default="-", help="output CSV path, '-' for stdout (default)")
    p.add_argument("--engine", choices=ENGINES, default=None,
                   help="which evaluator(s) to run (default: both where available)")
    p.add_argument("--oma-scheme", default=OmaScheme.TDMA_HALF.value,
                   choices=[m.value for m in OmaScheme], help="OMA benchmark variant")
    p.add_argument("--quad-order", type=int, default=DEFAULT_QUAD_ORDER,
                   help="Gauss-Chebyshev order M (default: %d)" % DEFAULT_QUAD_ORDER)
    p.add_argument("--workers", type=int, default=min(4, os.cpu_count() or 1),
                   help="worker threads; results do not depend on this")
    p.add_argument("--start", type=float, help="first grid point in dB")
    p.add_argument("--stop", type=float, help="last grid point in dB")
    p.add_argument("--step", type=float, help="grid step in dB")


def build_parser():
    parser = argparse.ArgumentParser(prog="passnoma", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="evaluate chosen metrics over a SNR grid")
    sw.add_argument("--metric", action="append", required=True,
                    help="metric[:mode][:condition], e.g. blockage_n:nisic; repeatable")
    sw.add_argument("--axis", choices=AXES, default="rho",
                    help="'rho' sweeps per-antenna SNR, 'total-snr' sweeps P_b/sigma^2")
    _add_run_options(sw)

    pr = sub.add_parser("preset", help="run the curve families of a standard figure")
    pr.add_argument("figure", choices=PRESET_IDS)
    pr.add_argument("--omega-i-list", type=_float_list, default=list(DEFAULT_OMEGA_I_LIST),
                    help="residual-interference powers for the NISIC families (default: 0.001,0.01,0.1)")
    _add_run_options(pr)

    cp = sub.add_parser("compare", help="check analytic against Monte Carlo rows in a dataset")
    cp.add_argument("dataset")
    cp.add_argument("--abs-floor", type=float, default=1e-4)
    cp.add_argument("--rate-rel-tol", type=float, default=0.02)
    return parser


def _load_cfg(path):
    if path is None:
        return NetworkConfig()
    return load_config(path)


def _cmd_sweep(args):
    cfg = _load_cfg(args.config)
    engine = args.engine or "both"
    metrics = tuple(parse_metric(m, engine) for m in args.metric)
    spec = SweepSpec(
        rho_db_start=0.0 if args.start is None else args.start,
        rho_db_stop=60.0 if args.stop is None else args.stop,
        rho_db_step=2.0 if args.step is None else args.step,
        metrics=metrics, mc_trials=args.trials, seed=args.seed, output_path=args.out,
        quad_order=args.quad_order, oma_scheme=args.oma_scheme, axis=args.axis)
    _, rows = run_sweep(spec, cfg, workers=args.workers)
    logger.info("wrote %d rows to %s", len(rows), args.out)
    return EXIT_OK


def _cmd_preset(args):
    cfg = _load_cfg(args.config)
    preset = figure_preset(args.figure, args.omega_i_list)
    grid = (preset.start if args.start is None else args.start,
            preset.stop if args.stop is None else args.stop,
            preset.step if args.step is None else args.step)
    _, rows = run_preset(preset, cfg, seed=args.seed, trials=args.trials, engine=args.engine,
                         quad_order=args.quad_order, oma_scheme=args.oma_scheme,
                         output_path=args.out, workers=args.workers, grid=grid)
    logger.info("wrote %d rows to %s", len(rows), args.out)
    return EXIT_OK


def _cmd_compare(args):
    _, rows = read_dataset(args.dataset)
    report = compare_report(rows, abs_floor=args.abs_floor, rate_rel_tol=args.rate_rel_tol)
    print(report.format())
    return EXIT_OK if report.passed else EXIT_COMPARE_FAILED


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse reports usage errors as 2, which is reserved for a failed comparison
        if exc.code in (0, None):
            raise
        return EXIT_INVALID
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    handler = {"sweep": _cmd_sweep, "preset": _cmd_preset, "compare": _cmd_compare}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        for v in exc.violations:
            print("config error: %s" % v, file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print("I/O error: %s" % exc, file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print("invalid input: %s" % exc, file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
