"""Command-line entry point: run, sweep, bench and validate."""

import argparse
import csv
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from pydantic import ValidationError

from .analytic import STRENGTH_GRID, cells_per_second_to_mph
from .bench import DEFAULT_BUDGET, DEFAULT_SIZES, run_bench
from .engines import create_engine
from .exceptions import InvalidConfiguration
from .models import (
    EngineKind,
    EventRecord,
    KernelConfig,
    RunManifest,
    SimConfig,
    SimSummary,
    SlowdownConfig,
)
from .sweep import density_grid, sweep
from .utils import get_logger, setup_logging
from .validate import SUITES, ValidationPlan, run_validation

logger = get_logger("cli")

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_CONFIG_ERROR = 2

SUMMARY_COLUMNS = [
    "n_cells",
    "n_cars",
    "jump",
    "kernel",
    "lambda_or_L",
    "g",
    "engine",
    "seed",
    "t_final",
    "burn_in",
    "F_bar_per_s",
    "F_bar_per_h",
    "v_bar_cells_per_s",
    "null_fraction",
    "frozen",
    "wall_time_s",
]
EVENT_COLUMNS = ["time_before", "dt", "car", "old_cell", "new_cell", "executed"]
DIAGRAM_COLUMNS = [
    "rho_bar",
    "n_cars",
    "seed",
    "replicate",
    "lambda",
    "F_bar_per_s",
    "F_bar_per_h",
    "v_bar_cells_per_s",
    "null_fraction",
    "engine",
    "frozen",
    "wall_time_s",
]
AGGREGATE_COLUMNS = [
    "rho_bar",
    "lambda",
    "n_seeds",
    "F_bar_mean_per_s",
    "F_bar_stderr_per_s",
    "F_bar_mean_per_h",
    "v_bar_mean_cells_per_s",
    "v_bar_stderr_cells_per_s",
]
BENCH_COLUMNS = [
    "engine",
    "n_cells",
    "n_cars",
    "events_executed",
    "steps",
    "wall_time_s",
    "us_per_event",
]
SLOPE_COLUMNS = ["engine", "slope", "intercept"]

# Config-file keys and flag destinations, mapped onto SimConfig fields.
CONFIG_KEYS = {
    "cells": "n_cells",
    "density": "density",
    "cars": "n_cars",
    "jump": "jump",
    "kernel": "kernel",
    "g": "slowdown",
    "engine": "engine",
    "omega0": "omega0",
    "t_final": "t_final",
    "burn_in": "burn_in",
    "seed": "seed",
    "refresh_every": "refresh_every",
    "dt_rate_convention": "dt_rate_convention",
    "detector": "detector_cell",
}
FIELD_TO_KEY = {field: key for key, field in CONFIG_KEYS.items()}
COUNT_KEYS = ("density", "cars")
ENGINE_ALIASES = {"list": EngineKind.LIST_BASED.value}


class ConfigError(InvalidConfiguration):
    """Configuration problem reported with exit code 2."""

    def __init__(self, key: str, message: str):
        super().__init__(f"invalid configuration key '{key}': {message}", key=key)


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> None:
    """Write rows with a header, '\\n' line endings and a fixed column order."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({column: _fmt(row.get(column)) for column in columns})


def write_manifest(out_dir: Path, manifest: RunManifest) -> Path:
    """Write the manifest that produced the files in out_dir."""
    path = out_dir / "manifest.json"
    path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def read_config_file(path: Path) -> Dict[str, str]:
    """Parse key=value lines; '#' starts a comment, blank lines are skipped.

    Raises:
        ConfigError: For a malformed line or an unknown key
    """
    values: Dict[str, str] = {}
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or not key:
            raise ConfigError("config", f"{path}:{lineno}: expected key=value")
        if key not in CONFIG_KEYS:
            raise ConfigError(key, f"{path}:{lineno}: unknown key")
        values[key] = value.strip()
    return values


def _convert(key: str, value: Any) -> Any:
    try:
        if key == "kernel":
            return KernelConfig.parse(str(value))
        if key == "g":
            return SlowdownConfig.parse(str(value))
        if key == "engine":
            return ENGINE_ALIASES.get(str(value), str(value))
    except ValueError as exc:
        raise ConfigError(key, str(exc)) from exc
    return value


def build_config(args: argparse.Namespace) -> SimConfig:
    """Merge the optional config file with flags (flags win) into a SimConfig.

    Raises:
        ConfigError: Naming the offending key
    """
    merged: Dict[str, Any] = {}
    if getattr(args, "config", None):
        merged.update(read_config_file(Path(args.config)))
    # density and cars describe one quantity; a flag for either replaces both file keys
    if any(getattr(args, key, None) is not None for key in COUNT_KEYS):
        for key in COUNT_KEYS:
            merged.pop(key, None)
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    if "kernel" not in merged:
        raise ConfigError("kernel", "a kernel is required, e.g. --kernel exponential:100")

    data = {CONFIG_KEYS[key]: _convert(key, value) for key, value in merged.items()}
    try:
        return SimConfig.model_validate(data)
    except ValidationError as exc:
        error = exc.errors()[0]
        loc = error.get("loc") or ()
        key = FIELD_TO_KEY.get(str(loc[0]), str(loc[0])) if loc else _guess_key(error["msg"])
        raise ConfigError(key, error["msg"]) from exc


def _guess_key(message: str) -> str:
    # model-level errors have no location; name the field mentioned first
    found = [(message.find(field), key) for field, key in FIELD_TO_KEY.items() if field in message]
    return min(found)[1] if found else "config"


def summary_row(summary: SimSummary, timings: bool) -> Dict[str, Any]:
    config = summary.config
    return {
        "n_cells": config.n_cells,
        "n_cars": config.cars,
        "jump": config.jump,
        "kernel": config.kernel.label(),
        "lambda_or_L": config.kernel.parameter(),
        "g": config.slowdown.label(),
        "engine": config.engine,
        "seed": config.seed,
        "t_final": config.t_final,
        "burn_in": config.burn_in,
        "F_bar_per_s": summary.flow,
        "F_bar_per_h": summary.flow_per_hour,
        "v_bar_cells_per_s": summary.velocity,
        "null_fraction": summary.null_fraction,
        "frozen": summary.frozen,
        "wall_time_s": summary.wall_time if timings else None,
    }


def event_row(event: EventRecord) -> Dict[str, Any]:
    return event.model_dump()


def cmd_run(args: argparse.Namespace) -> int:
    config = build_config(args)
    if config.t_final <= config.burn_in:
        raise ConfigError("t_final", "t_final must exceed burn_in")

    out_dir = Path(args.out)
    engine = create_engine(config)
    events: Optional[List[EventRecord]] = [] if args.events else None
    summary = engine.run(events)

    outputs = [out_dir / "summary.csv"]
    write_csv(outputs[0], SUMMARY_COLUMNS, [summary_row(summary, args.timings)])
    if events is not None:
        outputs.append(out_dir / "events.csv")
        write_csv(outputs[1], EVENT_COLUMNS, (event_row(e) for e in events))
    write_manifest(
        out_dir,
        RunManifest(
            subcommand="run",
            config=config,
            parameters={"events": bool(args.events), "timings": bool(args.timings)},
            outputs=[p.name for p in outputs],
        ),
    )
    mph = cells_per_second_to_mph(summary.velocity)
    print(
        f"F = {summary.flow:.6g} cars/s ({summary.flow_per_hour:.1f} cars/h), "
        f"v = {summary.velocity:.6g} cells/s ({mph:.2f} mph), "
        f"null fraction {summary.null_fraction:.3f}{', frozen' if summary.frozen else ''}"
    )
    return EXIT_OK


def _float_list(key: str, text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(key, f"expected comma-separated numbers, got '{text}'") from exc


def _int_list(key: str, text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(key, f"expected comma-separated integers, got '{text}'") from exc


def _densities(args: argparse.Namespace) -> List[float]:
    if args.densities:
        return _float_list("densities", args.densities)
    return density_grid(args.rho_start, args.rho_stop, args.rho_step)


def _strengths(args: argparse.Namespace) -> Optional[List[float]]:
    if not args.strengths:
        return None
    if args.strengths == "preset":
        return list(STRENGTH_GRID)
    return _float_list("strengths", args.strengths)


def cmd_sweep(args: argparse.Namespace) -> int:
    densities = _densities(args)
    strengths = _strengths(args)
    if args.kernel is None and strengths is not None:
        args.kernel = f"exponential:{strengths[0]:g}"
    if args.density is None and args.cars is None:
        args.density = densities[0]
    base = build_config(args)
    if base.t_final <= base.burn_in:
        raise ConfigError("t_final", "t_final must exceed burn_in")

    try:
        result = sweep(base, densities, args.seeds, threads=args.threads, strengths=strengths)
    except ValidationError as exc:
        raise ConfigError("densities", exc.errors()[0]["msg"]) from exc

    out_dir = Path(args.out)
    rows = [
        {
            "rho_bar": row.rho_bar,
            "n_cars": row.n_cars,
            "seed": row.seed,
            "replicate": row.replicate,
            "lambda": row.strength,
            "F_bar_per_s": row.flow,
            "F_bar_per_h": row.flow_per_hour,
            "v_bar_cells_per_s": row.velocity,
            "null_fraction": row.null_fraction,
            "engine": row.engine,
            "frozen": row.frozen,
            "wall_time_s": row.wall_time if args.timings else None,
        }
        for row in result.rows
    ]
    aggregates = [
        {
            "rho_bar": agg.rho_bar,
            "lambda": agg.strength,
            "n_seeds": agg.n_seeds,
            "F_bar_mean_per_s": agg.flow_mean,
            "F_bar_stderr_per_s": agg.flow_stderr,
            "F_bar_mean_per_h": agg.flow_per_hour_mean,
            "v_bar_mean_cells_per_s": agg.velocity_mean,
            "v_bar_stderr_cells_per_s": agg.velocity_stderr,
        }
        for agg in result.aggregates
    ]
    write_csv(out_dir / "diagram.csv", DIAGRAM_COLUMNS, rows)
    write_csv(out_dir / "aggregate.csv", AGGREGATE_COLUMNS, aggregates)
    write_manifest(
        out_dir,
        RunManifest(
            subcommand="sweep",
            config=base,
            parameters={
                "densities": densities,
                "seeds_per_density": args.seeds,
                "strengths": strengths,
                "threads": args.threads,
                "timings": bool(args.timings),
            },
            outputs=["diagram.csv", "aggregate.csv"],
        ),
    )
    print(f"{len(rows)} runs, {len(aggregates)} aggregate rows written to {out_dir}")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = _int_list("sizes", args.sizes)
    engines = []
    for name in args.engines.split(","):
        name = ENGINE_ALIASES.get(name.strip(), name.strip())
        try:
            engines.append(EngineKind(name))
        except ValueError as exc:
            raise ConfigError("engines", f"unknown engine '{name}'") from exc

    report = run_bench(
        sizes=sizes,
        engines=engines,
        event_budget=args.events,
        density=args.density,
        seed=args.seed,
        threads=args.threads,
    )
    out_dir = Path(args.out)
    write_csv(
        out_dir / "bench.csv",
        BENCH_COLUMNS,
        (
            {
                **row.model_dump(),
                "wall_time_s": row.wall_time,
                "us_per_event": 1e6 * row.wall_time / row.events_executed,
            }
            for row in report.rows
        ),
    )
    write_csv(out_dir / "slopes.csv", SLOPE_COLUMNS, (fit.model_dump() for fit in report.fits))
    gap = report.slope_gap()
    write_manifest(
        out_dir,
        RunManifest(
            subcommand="bench",
            parameters={
                "sizes": sizes,
                "engines": [e.value for e in engines],
                "event_budget": args.events,
                "density": args.density,
                "seed": args.seed,
                "threads": args.threads,
                "slope_gap": gap,
            },
            outputs=["bench.csv", "slopes.csv"],
        ),
    )
    for fit in report.fits:
        print(f"{fit.engine}: slope {fit.slope:.3f}")
    if gap is not None:
        print(f"slope(standard) - slope(accelerated) = {gap:.3f}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    plan = ValidationPlan.quick() if args.quick else ValidationPlan.full()
    plan = plan.model_copy(update={"seed": args.seed})
    suites = args.suite or list(SUITES)
    for name in suites:
        if name not in SUITES:
            raise ConfigError("suite", f"unknown suite '{name}'")

    report = run_validation(plan, suites)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / "validation.json"
    report_path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    write_manifest(
        out_dir,
        RunManifest(
            subcommand="validate",
            parameters={"plan": plan.model_dump(), "suites": suites},
            outputs=["validation.json"],
        ),
    )
    failed = [c for c in report.checks if not c.passed]
    print(f"{len(report.checks) - len(failed)}/{len(report.checks)} checks passed")
    for check in failed:
        print(
            f"FAIL {check.suite}/{check.name}: {check.measured:.6g} "
            f"(threshold {check.comparison} {check.threshold:.6g})"
        )
    return EXIT_OK if report.passed else EXIT_VALIDATION_FAILED


def _add_common(parser: argparse.ArgumentParser, default_out: str) -> None:
    parser.add_argument(
        "--out", default=default_out, help=f"Output directory (default: {default_out})"
    )
    parser.add_argument("--seed", type=int, default=None, help="64-bit base seed")
    parser.add_argument("--log-level", default="WARNING", help="Logging level (default: WARNING)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level")


def _add_simulation(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value file; flags override its values")
    parser.add_argument("--cells", type=int, help="Number of cells N")
    cars = parser.add_mutually_exclusive_group()
    cars.add_argument("--density", type=float, help="Average density rho-bar")
    cars.add_argument("--cars", type=int, help="Number of cars Nc")
    parser.add_argument("--jump", type=int, help="Cells per move J (default 1)")
    parser.add_argument("--kernel", help="constant:L | linear:L | exponential:LAMBDA")
    parser.add_argument("--g", help="arrhenius:C | linear | quadratic (default linear)")
    parser.add_argument("--engine", help="standard | accelerated | list (default accelerated)")
    parser.add_argument("--omega0", type=float, help="Base hop frequency, 1/s (default 4)")
    parser.add_argument("--t-final", dest="t_final", type=float, help="Horizon, s (default 3600)")
    parser.add_argument("--burn-in", dest="burn_in", type=float, help="Discarded span, s")
    parser.add_argument(
        "--refresh-every", dest="refresh_every", type=int, help="Events between weight refreshes"
    )
    parser.add_argument(
        "--dt-rate-convention",
        dest="dt_rate_convention",
        choices=["pre", "post"],
        help="Total rate used for the waiting time (default post)",
    )
    parser.add_argument("--detector", type=int, help="Detector cell (default 0)")
    parser.add_argument(
        "--timings", action="store_true", help="Fill wall-time columns (breaks byte-stability)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kmc-traffic",
        description="Kinetic Monte Carlo simulation of look-ahead cellular-automaton traffic.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="Single simulation run")
    _add_common(run, "out")
    _add_simulation(run)
    run.add_argument("--events", action="store_true", help="Also write events.csv")
    run.set_defaults(handler=cmd_run)

    sweep_parser = subparsers.add_parser("sweep", help="Fundamental diagram over a density grid")
    _add_common(sweep_parser, "out")
    _add_simulation(sweep_parser)
    sweep_parser.add_argument("--densities", help="Comma-separated densities (overrides the grid)")
    sweep_parser.add_argument("--rho-start", dest="rho_start", type=float, default=0.05)
    sweep_parser.add_argument("--rho-stop", dest="rho_stop", type=float, default=0.95)
    sweep_parser.add_argument("--rho-step", dest="rho_step", type=float, default=0.05)
    sweep_parser.add_argument("--seeds", type=int, default=1, help="Replicates per density")
    sweep_parser.add_argument(
        "--strengths", help="Comma-separated exponential strengths, or 'preset'"
    )
    sweep_parser.add_argument("--threads", type=int, default=1, help="Worker processes")
    sweep_parser.set_defaults(handler=cmd_sweep)

    bench = subparsers.add_parser("bench", help="Per-event cost against lattice size")
    _add_common(bench, "bench")
    bench.add_argument(
        "--sizes", default=",".join(str(n) for n in DEFAULT_SIZES), help="Comma-separated N"
    )
    bench.add_argument("--engines", default="standard,accelerated", help="Comma-separated engines")
    bench.add_argument("--events", type=int, default=DEFAULT_BUDGET, help="Executed events per run")
    bench.add_argument("--density", type=float, default=0.3, help="Average density")
    bench.add_argument("--threads", type=int, default=1, help="Parallel timing runs")
    bench.set_defaults(handler=cmd_bench)

    validate = subparsers.add_parser("validate", help="Run the oracle suites")
    _add_common(validate, "validation")
    validate.add_argument("--quick", action="store_true", help="Reduced sizes for a smoke check")
    validate.add_argument(
        "--suite",
        action="append",
        default=None,
        help=f"Suite to run, repeatable: {', '.join(SUITES)}",
    )
    validate.set_defaults(handler=cmd_validate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.DEBUG if args.verbose else getattr(logging, str(args.log_level).upper(), None)
    if not isinstance(level, int):
        parser.error(f"unknown log level '{args.log_level}'")
    setup_logging(level)
    if args.seed is None and args.command == "bench":
        args.seed = 0
    elif args.seed is None and args.command == "validate":
        args.seed = ValidationPlan().seed

    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except InvalidConfiguration as exc:
        key = exc.key or "config"
        print(f"error: invalid configuration key '{key}': {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
