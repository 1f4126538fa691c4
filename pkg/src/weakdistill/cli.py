"""Command-line entry points for running experiments and exporting artifacts.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .harness import (
    ConfigError,
    ExperimentConfig,
    bound_curves,
    export_scenario,
    run_experiment,
    write_bounds,
    write_experiment,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _add_override_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", required=True, help="YAML experiment config")
    parser.add_argument("--trials", type=int, default=None, help="override trial count")
    parser.add_argument("--delta", type=float, default=None, help="override failure probability")
    parser.add_argument("--seed", type=int, default=None, help="override scenario seed")
    parser.add_argument("--output", default=None, help="override output path prefix")
    parser.add_argument("--threads", type=int, default=None, help="cap trial parallelism")


def _load_config(args) -> ExperimentConfig:
    overrides = dict(
        trials=args.trials,
        delta=args.delta,
        output=args.output,
        threads=args.threads,
    )
    cfg = ExperimentConfig.from_file(args.config, **overrides)
    if args.seed is not None:
        cfg = ExperimentConfig.from_dict(
            {"scenario": {"name": cfg.scenario_name, "params": cfg.scenario_params, "seed": args.seed}},
            methods=cfg.methods,
            sample_grid=cfg.sample_grid,
            trials=cfg.trials,
            delta=cfg.delta,
            output=cfg.output,
            threads=cfg.threads,
        )
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakdistill",
        description="Weak distillation experiments: TVD sweeps and sample-cost bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the TVD sweep for a config")
    _add_override_flags(run_p)

    bounds_p = sub.add_parser("bounds", help="evaluate bound curves for a config")
    _add_override_flags(bounds_p)

    scenario_p = sub.add_parser("scenario", help="scenario utilities")
    scenario_sub = scenario_p.add_subparsers(dest="scenario_command", required=True)
    export_p = scenario_sub.add_parser("export", help="export a replayable scenario")
    export_p.add_argument("--name", required=True, help="scenario name")
    export_p.add_argument("--seed", type=int, required=True, help="scenario seed")
    export_p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                          help="scenario parameter override (repeatable)")
    export_p.add_argument("--out", default=None, help="output JSON path (default stdout)")
    return parser


def _parse_params(pairs: list[str]) -> dict:
    params = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"bad --param {pair!r}, expected KEY=VALUE")
        key, value = pair.split("=", 1)
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            params[key] = value
    return params


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            cfg = _load_config(args)
            curve = run_experiment(cfg)
            prefix = cfg.output or cfg.scenario_name
            raw_path, agg_path = write_experiment(cfg, curve, prefix)
            print(f"wrote {raw_path} and {agg_path}")
        elif args.command == "bounds":
            cfg = _load_config(args)
            rows = bound_curves(cfg)
            prefix = cfg.output or cfg.scenario_name
            csv_path, json_path = write_bounds(cfg, rows, prefix)
            print(f"wrote {csv_path} and {json_path}")
        elif args.command == "scenario":
            record = export_scenario(args.name, _parse_params(args.param), args.seed)
            text = json.dumps(record, indent=2) + "\n"
            if args.out:
                Path(args.out).write_text(text)
                print(f"wrote {args.out}")
            else:
                sys.stdout.write(text)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, ArithmeticError, AssertionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
