#!/usr/bin/env python3
"""
Command-line driver for the cyclic-representation workbench

    python app.py run --suite yb --N 3 --n 3 --L 2
    python app.py run --suite spectra --family t2 --L 2 --t 0.3+0.1i --out-csv spectra.csv
    python app.py list --json
"""
import argparse
import json
import logging
import sys
from typing import Dict, List, Optional, Sequence

from algebra.errors import WorkbenchError
from config.settings import settings
from services.registry import catalogue, run_suites
from utils.parsing import ConfigError, RunConfig, load_run_config, normalize_family, parse_complex

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2


def configure_logging():
    level = logging.DEBUG if settings.DEBUG else getattr(logging, settings.LOG_LEVEL, logging.INFO)
    logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s',
                        stream=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='workbench', description=settings.APP_NAME)
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help='run verification suites')
    run.add_argument('--config', help='JSON run configuration')
    run.add_argument('--suite', action='append', dest='suites', metavar='ID',
                     help='suite id, repeatable; default is every suite')
    run.add_argument('--seed', type=int)
    run.add_argument('--tol', action='append', default=[], metavar='[NAME=]VALUE',
                     help="threshold override; a bare value sets 'identity'")
    run.add_argument('--eigen', action='store_true', help='add eigenvalue comparisons')
    run.add_argument('--out-json', help='write the report here instead of stdout')
    run.add_argument('--out-csv', help='write the spectra table here')
    run.add_argument('--list', action='store_true', help='print the catalogue and exit')
    run.add_argument('--N', type=int, dest='N')
    run.add_argument('--n', type=int, dest='n')
    run.add_argument('--q-sign', type=int, choices=(1, -1))
    run.add_argument('--L', type=int, dest='L')
    run.add_argument('--r', type=int)
    run.add_argument('--r-prime', type=int)
    run.add_argument('--family', help='tau, xxz, t2 or tdag')
    run.add_argument('--t', help="spectral parameter t as 're+imi'")
    run.add_argument('--s', help="spectral parameter s as 're+imi'")

    listing = commands.add_parser('list', help='print the suite catalogue')
    listing.add_argument('--json', action='store_true', help='emit JSON')
    return parser


def _tolerances(base: Dict[str, float], overrides: Sequence[str]) -> Dict[str, float]:
    tolerances = dict(base)
    for item in overrides:
        name, _, value = item.rpartition('=')
        try:
            tolerances[name or 'identity'] = float(value)
        except ValueError:
            raise ConfigError(f"cannot read tolerance '{item}'") from None
    for name, value in tolerances.items():
        if not value > 0:
            raise ConfigError(f"tolerance '{name}' must be positive")
    return tolerances


def _setups(args):
    if args.N is None:
        if args.n is not None or args.q_sign is not None:
            raise ConfigError("--n and --q-sign need --N")
        return None
    n = args.n if args.n is not None else (args.N if args.N % 2 else 2 * args.N)
    if args.q_sign is not None:
        return ((args.N, n, args.q_sign),)
    if n == 2 * args.N and args.N % 2 == 0:
        return ((args.N, n, 1), (args.N, n, -1))
    return ((args.N, n, 1),)


def resolve_config(args) -> RunConfig:
    """Config file (or defaults) with command-line overrides on top"""
    config = load_run_config(args.config)
    if args.L is not None and args.L < 1:
        raise ConfigError(f"L must be positive, got {args.L}")
    config = config.with_overrides(
        setups=_setups(args),
        suites=tuple(args.suites) if args.suites is not None else None,
        seed=args.seed,
        tolerances=_tolerances(config.tolerances, args.tol),
        eigen=True if args.eigen else None,
        out_json=args.out_json,
        out_csv=args.out_csv,
        L=args.L,
        r=args.r,
        r_prime=args.r_prime,
        family=normalize_family(args.family) if args.family else None,
        t=parse_complex(args.t) if args.t else None,
        s=parse_complex(args.s) if args.s else None,
    )
    config.root_setups()
    return config


def print_catalogue(as_json: bool):
    entries = catalogue()
    if as_json:
        print(json.dumps(entries, indent=2, ensure_ascii=False))
        return
    for entry in entries:
        print(f"{entry['id']:<18} {entry['anchor']}")
        print(f"{'':<18} {entry['description']}")


def command_run(args) -> int:
    if args.list:
        print_catalogue(as_json=False)
        return 0
    try:
        config = resolve_config(args)
        report = run_suites(config)
    except WorkbenchError as e:
        logger.error("configuration error: %s", e)
        return EXIT_CONFIG

    if config.out_json:
        report.write_json(config.out_json)
    else:
        print(report.to_json())
    if config.out_csv:
        report.write_spectra(config.out_csv)

    summary = report.summary()
    print(f"{summary['passed']}/{summary['total']} passed, {summary['failed']} failed, "
          f"{summary['error']} errors, {summary['skipped']} skipped", file=sys.stderr)
    return report.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging()
    try:
        settings.validate()
    except ValueError as e:
        logger.error("%s", e)
        logger.error("check your .env file and the WORKBENCH_* variables")
        return EXIT_CONFIG

    if args.command == 'list':
        print_catalogue(args.json)
        return 0
    return command_run(args)


if __name__ == '__main__':
    sys.exit(main())
