"""Command-line entry point.

Exit codes: 0 all verdicts pass, 2 a verdict failed, 3 configuration error,
4 a size cap was exceeded. No environment variables are read; a run is
determined by its config file and flags.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import EXPERIMENTS, ConfigError, build_config, read_config_file
from .errors import SizeCapError, ValidationError
from .experiments import recheck, run
from .reports import merge_reports, write_report

EXIT_OK, EXIT_VERDICT, EXIT_CONFIG, EXIT_CAP = 0, 2, 3, 4

log = logging.getLogger("selfembezzle")


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value file; flags override it")
    p.add_argument("--seed", type=int)
    p.add_argument("--grid-step", help="grid spacing, e.g. 1/12")
    p.add_argument("--max-support", type=int)
    p.add_argument("--window", type=int, help="half-width W of the site window")
    p.add_argument("--samples", type=int)
    p.add_argument("--max-exponent", type=int, help="E1 sweeps n = 2^0 .. 2^max-exponent")
    p.add_argument("--max-weight", type=int, help="E4 full-enumeration weight")
    p.add_argument("--cap", type=int, help="largest product vector materialized (default 2^24)")
    p.add_argument("--extra-generators", help="E4: file with one generator per line")
    p.add_argument("--out", help="output path stem (extension added per format)")
    p.add_argument("--format", help="comma-separated subset of json,csv,svg")
    p.add_argument("--timing", action="store_true", help="include wall-clock duration in JSON")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true")
    parser = argparse.ArgumentParser(prog="selfembezzle", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        _add_run_flags(sub.add_parser(name, parents=[common], help=f"run experiment {name}"))
    generic = sub.add_parser("run", parents=[common], help="run the experiment named by --experiment or the config file")
    generic.add_argument("--experiment", choices=EXPERIMENTS)
    _add_run_flags(generic)
    rep = sub.add_parser("report", parents=[common], help="merge JSON reports into one summary")
    rep.add_argument("reports", nargs="+")
    rep.add_argument("--out", help="write the merged summary here instead of stdout")
    return parser


def _run(args) -> int:
    file_values = read_config_file(args.config) if args.config else {}
    experiment = args.command
    if experiment == "run":
        experiment = args.experiment or file_values.get("experiment")
        if not experiment:
            raise ConfigError("no experiment given (use --experiment or an 'experiment' key)")
    overrides = {
        "seed": args.seed,
        "grid_step": args.grid_step,
        "max_support": args.max_support,
        "window": args.window,
        "samples": args.samples,
        "max_exponent": args.max_exponent,
        "max_weight": args.max_weight,
        "cap": args.cap,
        "extra_generators": args.extra_generators,
        "out": args.out,
        "format": args.format,
    }
    config = build_config(experiment, file_values, overrides)
    report = run(config)
    for path in write_report(report, config.out, config.format, include_timing=args.timing):
        log.info("wrote %s", path)
    for name, ok in report.verdicts.items():
        print(f"{'PASS' if ok else 'FAIL'}  {experiment}  {name}")
    log.info("%s finished in %.2f s", experiment, report.duration)
    return EXIT_OK if report.passed else EXIT_VERDICT


def _report(args) -> int:
    loaded = [json.loads(Path(p).read_text()) for p in args.reports]
    merged = merge_reports(loaded, recheck)
    text = json.dumps(merged, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if merged["all_passed"] else EXIT_VERDICT


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "report":
            return _report(args)
        return _run(args)
    except SizeCapError as exc:
        log.error("resource cap exceeded: %s", exc)
        return EXIT_CAP
    except (ConfigError, ValidationError, OSError, KeyError, json.JSONDecodeError) as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
