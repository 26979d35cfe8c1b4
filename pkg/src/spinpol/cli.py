"""Command-line entry point: ``spinpol --scenario fig1a --out fig1a.csv``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .analytic import calibrate_convention
from .errors import ConfigError, NumericalError
from .output import FORMATS, emit
from .propagator import TimeGrid
from .scenarios import BUILTIN_SCENARIOS, load_scenario, parse_override, run_scenario

log = logging.getLogger("spinpol")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2
CALIBRATION_OMEGA1 = (0.0, 0.25, 0.5, 1.0, 2.0)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="spinpol",
        description="Polarization and entanglement dynamics of driven dipolar spin chains.",
    )
    p.add_argument("--scenario", help="builtin scenario name or path to a key = value config file")
    p.add_argument("--out", default="-", help="output file (default: standard output)")
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one configuration key; repeatable",
    )
    p.add_argument(
        "--calibrate",
        action="store_true",
        help="fit the two-spin convention against the closed-form polarizations and print the report",
    )
    p.add_argument("--list-scenarios", action="store_true", help="list builtin scenarios and exit")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _calibrate(out: str) -> None:
    report = calibrate_convention(TimeGrid.linspace(0.0, 25.0, 501), CALIBRATION_OMEGA1)
    sys.stdout.write(report.to_text())
    if out != "-":
        Path(out).write_text(report.to_json() + "\n", encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.list_scenarios:
            for name, values in BUILTIN_SCENARIOS.items():
                print(f"{name}: n={values['chain.n']} model={values['chain.model']} "
                      f"initial={values['initial']}")
            return EXIT_OK
        if args.calibrate:
            _calibrate(args.out)
            return EXIT_OK
        if not args.scenario:
            raise ConfigError("scenario: pass --scenario, --calibrate or --list-scenarios")
        overrides = dict(parse_override(o) for o in args.override)
        config = load_scenario(args.scenario, overrides)
        log.info("running %s (n=%d, %d points)", config.name, config.chain.n, len(config.grid))
        records = run_scenario(config)
        emit(records, args.format, args.out, config.layout)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except BrokenPipeError:
        sys.stdout = None
        return EXIT_OK
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
