"""Command-line interface: ``clustest {test,simulate,kmeans,replicate}``.

Exit codes: 0 on success, 1 when the data or the statistics fail (``error[<code>]: ...`` on stderr),
2 on usage errors and invalid experiment files.
"""
from __future__ import annotations

import argparse
import logging
import os
import re
import sys
from pathlib import Path
from typing import NoReturn, Optional, Sequence

from diskcache import Cache

from .enum import SplitMode, TestMethod
from .errors import ClusterTestError, InvalidConfig
from .inference import run_method
from .kmeans import KMeansOptions, fit_clusters
from .panel import load_panel, split_panel
from .report import fit_frame, format_fit_report, format_test_report, format_vehicle_report, result_frame
from .simlab import load_experiment, p_value_frame, run_experiment, write_frame, write_power_svg
from .vehicles import DEFAULT_RESTARTS, replicate_vehicles

logger = logging.getLogger(__name__)

SEED_ENV = 'CLUSTER_SIG_SEED'
EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):

    def error(self, message: str) -> NoReturn:
        print(f"error[usage]: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _group_count(text: str) -> int:
    try:
        g = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid group count: {text}")
    if g < 2:
        raise argparse.ArgumentTypeError(f"the alternative needs at least 2 groups, got {g}")
    return g


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer: {text}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer: {text}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _pi_bar(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid proportion: {text}")
    if not 0.0 <= value < 0.5:
        raise argparse.ArgumentTypeError(f"pi-bar must lie in [0, 0.5), got {value}")
    return value


def resolve_seed(flag: Optional[int]) -> Optional[int]:
    """Seed from ``--seed``, else from ``$CLUSTER_SIG_SEED``, else ``None``."""
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV, '').strip()
    if not env:
        return None
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}")


def _slug(name: str) -> str:
    return re.sub(r'[^A-Za-z0-9]+', '_', name).strip('_').lower() or 'curve'


def cmd_test(args: argparse.Namespace) -> int:
    method = TestMethod.from_string(args.method)
    if args.bonferroni is not None:
        if method != TestMethod.F_TEST:
            raise UsageError("--bonferroni combines f-tests and cannot be used with --method " + args.method)
        method = TestMethod.BONFERRONI
    if args.m_lags is not None and method != TestMethod.HAC:
        raise UsageError("--m-lags applies to --method hac only")
    if args.pi_bar is not None and method != TestMethod.SMALL_CLUSTER:
        raise UsageError("--pi-bar applies to --method small-cluster only")
    seed = resolve_seed(args.seed) or 0
    opts = KMeansOptions(restarts=args.restarts, seed=seed, progress=args.progress)

    panel = load_panel(args.panel_csv)
    logger.info(f"panel N={panel.n_units} T={panel.n_periods} d={panel.dim}, method {method.label}")
    result = run_method(method, panel, SplitMode.from_string(args.split), args.g, opts,
                        pi_bar=args.pi_bar, m_lags=args.m_lags or 0, g_max=args.bonferroni or 5)
    print(format_test_report(result))
    if args.out:
        write_frame(result_frame(result), args.out)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    experiment = load_experiment(args.config)
    experiment = experiment.with_overrides(
        replications=args.replications, master_seed=resolve_seed(args.seed), restarts=args.restarts)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.cache:
        with Cache(args.cache) as cache:
            result = run_experiment(experiment, jobs=args.jobs, progress=args.progress, cache=cache)
    else:
        result = run_experiment(experiment, jobs=args.jobs, progress=args.progress)

    # wall times differ between runs and stay out of the written tables
    write_frame(result.cells.drop(columns=['seconds']), out / 'cells.csv')
    for name, frame in result.curves.items():
        write_frame(frame, out / f"curve_{_slug(name)}.csv")
    p_values = p_value_frame(result.results)
    if len(p_values):
        write_frame(p_values, out / 'p_values.csv')
    if args.svg and result.curves:
        svg = out / f"{_slug(experiment.name or 'experiment')}.svg"
        xlabel = experiment.sweeps[0].parameter.value
        write_power_svg(result.curves, svg, title=experiment.name, xlabel=xlabel)
    flagged = int(result.cells['flagged'].sum()) if len(result.cells) else 0
    print(f"{len(result.cells)} cells written to {out}" + (f", {flagged} flagged" if flagged else ''))
    return EXIT_OK


def cmd_kmeans(args: argparse.Namespace) -> int:
    seed = resolve_seed(args.seed) or 0
    opts = KMeansOptions(restarts=args.restarts, seed=seed, progress=args.progress)
    panel = load_panel(args.panel_csv)
    if args.sample == 'all':
        view = panel.view()
    else:
        view_r, view_p = split_panel(panel, SplitMode.from_string(args.split))
        view = view_r if args.sample == 'r' else view_p
    fit = fit_clusters(view, args.g, opts)
    print(format_fit_report(fit, panel.unit_labels))
    if args.out:
        write_frame(fit_frame(fit, panel.unit_labels), args.out)
    return EXIT_OK


def cmd_replicate_vehicles(args: argparse.Namespace) -> int:
    seed = resolve_seed(args.seed) or 0
    opts = KMeansOptions(restarts=args.restarts, seed=seed, progress=args.progress)
    replication = replicate_vehicles(args.raw_csv, args.g, opts)
    print(format_vehicle_report(replication))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog='clustest',
        description='Split-sample tests for multiple clusters in panel data',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Test one cluster against two on a long-format panel (unit,period,y1,...)
  clustest test panel.csv --method f --g 2

  # Bonferroni combination over 2..5 groups, results as CSV
  clustest test panel.csv --bonferroni 5 --out result.csv

  # Fit k-means on the first half of the periods
  clustest kmeans panel.csv --g 3 --sample r

  # Run a bundled experiment on four processes
  clustest simulate table1_smoke --out results/ --jobs 4

  # Manufacturer study on the raw car attribute file
  clustest replicate cars.csv --restarts 1000
        """,
    )
    parser.add_argument('--verbose', '-v', action='store_true', help='Enable verbose logging')
    subparsers = parser.add_subparsers(dest='command', required=True)

    def add_common(p: argparse.ArgumentParser, restarts: int) -> None:
        p.add_argument('--restarts', type=_positive_int, default=restarts, help='k-means restarts')
        p.add_argument('--seed', type=int, default=None, help=f'Seed (default: ${SEED_ENV}, else 0)')
        p.add_argument('--progress', action='store_true', help='Show progress bars')

    test = subparsers.add_parser('test', help='Test for multiple clusters in a panel')
    test.add_argument('panel_csv', type=str, help='Long-format panel CSV')
    test.add_argument('--method', type=str, default='f',
                      choices=['f', 't', 'param-ar1', 'small-cluster', 'finite-t', 'hac', 'no-split'],
                      help='Test statistic')
    test.add_argument('--g', type=_group_count, default=2, help='Number of groups under the alternative')
    test.add_argument('--split', type=str, default='halves', choices=['halves', 'interleaved'],
                      help='How the periods are split into R and P')
    test.add_argument('--pi-bar', type=_pi_bar, default=None, help='Small-cluster threshold')
    test.add_argument('--m-lags', type=_non_negative_int, default=None, help='Dependence lags of the HAC test')
    test.add_argument('--bonferroni', type=_group_count, default=None, metavar='G_MAX',
                      help='Combine f-tests over 2..G_MAX groups')
    test.add_argument('--out', type=str, default=None, help='Write the result as CSV')
    add_common(test, 100)
    test.set_defaults(func=cmd_test)

    simulate = subparsers.add_parser('simulate', help='Run a Monte Carlo experiment')
    simulate.add_argument('config', type=str, help='Experiment JSON file or bundled preset name')
    simulate.add_argument('--out', type=str, required=True, help='Output directory')
    simulate.add_argument('--jobs', type=_positive_int, default=1, help='Worker processes')
    simulate.add_argument('--replications', type=_positive_int, default=None, help='Override replications')
    simulate.add_argument('--restarts', type=_positive_int, default=None, help='Override k-means restarts')
    simulate.add_argument('--seed', type=int, default=None, help=f'Override the master seed (or ${SEED_ENV})')
    simulate.add_argument('--cache', type=str, default=None, help='Cache directory for finished cells')
    simulate.add_argument('--svg', action='store_true', help='Also draw the power curves as SVG')
    simulate.add_argument('--progress', action='store_true', help='Show progress bars')
    simulate.set_defaults(func=cmd_simulate)

    kmeans = subparsers.add_parser('kmeans', help='Fit k-means to the unit means of a panel')
    kmeans.add_argument('panel_csv', type=str, help='Long-format panel CSV')
    kmeans.add_argument('--g', type=_positive_int, default=2, help='Number of groups')
    kmeans.add_argument('--sample', type=str, default='all', choices=['all', 'r', 'p'],
                        help='Periods to fit on')
    kmeans.add_argument('--split', type=str, default='halves', choices=['halves', 'interleaved'],
                        help='Split used by --sample r/p')
    kmeans.add_argument('--out', type=str, default=None, help='Write the assignments as CSV')
    add_common(kmeans, 100)
    kmeans.set_defaults(func=cmd_kmeans)

    replicate = subparsers.add_parser('replicate', help='Cluster vehicle manufacturers on car attributes')
    replicate.add_argument('raw_csv', type=str, help='Raw per-model car attribute CSV')
    replicate.add_argument('--g', type=_group_count, default=2, help='Number of groups under the alternative')
    add_common(replicate, DEFAULT_RESTARTS)
    replicate.set_defaults(func=cmd_replicate_vehicles)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error[usage]: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidConfig as e:
        print(f"error[{e.code}]: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ClusterTestError as e:
        print(f"error[{e.code}]: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as e:
        print(f"error[io]: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == '__main__':
    sys.exit(main())
