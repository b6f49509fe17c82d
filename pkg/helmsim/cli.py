# helmsim/cli.py
"""
Command-line entry point: helmsim simulate | compare | validate.

Exit codes: 0 success, 1 internal error, 2 input or validation error.
"""

import argparse
import glob
import logging
import sys
from pathlib import Path

from . import __version__
from .config import load_config
from .dynamics import ShipState, load_controls, read_trajectory, simulate, write_trajectory
from .environment import EnvironmentSeries, load_weather
from .errors import HelmsimError
from .file import dumps_json, write_json, write_rows_csv
from .harness import ReplayOptions, ValidationReport, compare_trajectories, run_segments, wind_check_rows
from .logging import setup_logging
from .maneuvers import KNOT, load_presets, preset_scenario, turning_metrics
from .settings import load_settings
from .time import exec_timestamp
from .voyage import load_voyage, segment_voyage

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2


def build_parser():
    parser = argparse.ArgumentParser(prog="helmsim", description="3-DoF ship maneuvering simulator and validation harness")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--settings", help="Harness settings INI (default ~/.config/helmsim.ini)")
    parser.add_argument("--log-file", help="Write log records to this file")
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")
    parser.add_argument("--quiet", action="store_true", help="Hide progress bars")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Integrate a maneuver and write the trajectory CSV")
    sim.add_argument("--config", required=True, help="Vessel configuration JSON")
    source = sim.add_mutually_exclusive_group(required=True)
    source.add_argument("--controls", help="Control schedule CSV (t_s, rudder_deg, rpm)")
    source.add_argument("--preset", help="Maneuver preset name, e.g. turn-starboard-35")
    sim.add_argument("--presets", help="Preset YAML (default config/presets.yml)")
    sim.add_argument("--env", help="Weather CSV; times are taken relative to its first row")
    sim.add_argument("--initial-speed-kn", type=float, default=None, help="Initial surge speed, knots")
    sim.add_argument("--dt", type=float, default=None, help="Step size, s (default: the preset's dt, else settings)")
    sim.add_argument("--steps", type=int, default=None, help="Number of steps (default 120)")
    sim.add_argument("--metrics", help="Also write turning-circle metrics JSON here")
    sim.add_argument("--out", required=True, help="Trajectory CSV to write")

    cmp_ = sub.add_parser("compare", help="Score a predicted trajectory against the truth")
    cmp_.add_argument("truth", help="Truth trajectory CSV")
    cmp_.add_argument("prediction", help="Predicted trajectory CSV")
    cmp_.add_argument("--r-max", type=float, default=None, help="Maximum yaw rate, rad/s (default 0.0314)")
    cmp_.add_argument("--out", help="Report JSON (default stdout)")
    cmp_.add_argument("--plot-dir", help="Directory for the plot-data CSVs")

    val = sub.add_parser("validate", help="Replay recorded voyages and score every segment")
    val.add_argument("voyages", nargs="+", help="Voyage CSV files or glob patterns")
    val.add_argument("--weather", required=True, help="Hindcast weather CSV")
    val.add_argument("--config", required=True, help="Vessel configuration JSON")
    val.add_argument("--dt", type=float, default=None, help="Knot spacing, s (default 1)")
    val.add_argument("--steps", type=int, default=None, help="Steps per segment (default 120)")
    val.add_argument("--stride", type=int, default=None, help="Knots between segment starts (default steps)")
    val.add_argument("--r-max", type=float, default=None, help="Maximum yaw rate, rad/s (default 0.0314)")
    val.add_argument("--threads", type=int, default=None, help="Worker processes (default settings or CPU count)")
    val.add_argument("--out", "--out-dir", dest="out", required=True, help="Output directory")
    val.add_argument("--no-plots", action="store_true", help="Skip per-segment plot data")
    return parser


def cmd_simulate(args, settings):
    cfg = load_config(args.config)
    if args.preset:
        presets = load_presets(args.presets)
        if args.preset not in presets:
            raise HelmsimError(f"unknown preset '{args.preset}', available: {', '.join(sorted(presets))}")
        initial, controls, env, steps, dt = preset_scenario(presets[args.preset])
        if args.initial_speed_kn is not None:
            initial = ShipState(u=args.initial_speed_kn * KNOT)
        if args.steps is not None:
            steps = args.steps
        if args.dt is not None:
            dt = args.dt
    else:
        controls = load_controls(args.controls)
        initial = ShipState(u=(args.initial_speed_kn or 0.0) * KNOT)
        steps = args.steps if args.steps is not None else settings.simulation.steps
        dt = args.dt if args.dt is not None else settings.simulation.dt
        env = EnvironmentSeries.constant()
    if args.env:
        weather = load_weather(args.env)
        env = weather.shifted(weather.times[0])

    trajectory = simulate(cfg, initial, controls, env, dt=dt, n_steps=steps)
    write_trajectory(trajectory, args.out)
    logger.info(f"Wrote {len(trajectory)} knots to {args.out}")

    if args.preset or args.metrics:
        try:
            metrics = turning_metrics(trajectory)
        except HelmsimError as f_err:
            if args.metrics:
                raise
            logger.info(f"No turning metrics: {f_err}")
        else:
            logger.info(f"Turning circle: advance {metrics.advance:.1f} m, transfer {metrics.transfer:.1f} m, "
                        f"steady diameter {metrics.steady_diameter:.1f} m "
                        f"({metrics.steady_diameter / cfg.hull.l_pp:.2f} L)")
            if args.metrics:
                write_json(metrics.to_dict(), args.metrics)
    return EXIT_OK


def cmd_compare(args, settings):
    truth = read_trajectory(args.truth)
    prediction = read_trajectory(args.prediction)
    r_max = args.r_max if args.r_max is not None else settings.measures.r_max
    report, bundle = compare_trajectories(truth, prediction, r_max, settings.measures.thresholds,
                                          settings.measures.denom_eps)
    if args.out:
        write_json(report.to_dict(), args.out)
    else:
        sys.stdout.write(dumps_json(report.to_dict()))
    if args.plot_dir:
        bundle.write(args.plot_dir, label=Path(args.prediction).stem)
    logger.info(f"cVDM {report.cvdm:.3f}% -> {report.category}")
    return EXIT_OK


def expand_voyages(patterns):
    """Files matching the given paths or glob patterns, sorted and de-duplicated."""
    found = set()
    for pattern in patterns:
        matches = glob.glob(pattern)
        found.update(matches if matches else ([pattern] if Path(pattern).is_file() else []))
    return sorted(found)


def cmd_validate(args, settings):
    files = expand_voyages(args.voyages)
    if not files:
        raise HelmsimError(f"no voyage files match {' '.join(args.voyages)}")
    cfg = load_config(args.config)
    weather = load_weather(args.weather)

    dt = args.dt if args.dt is not None else settings.simulation.dt
    steps = args.steps if args.steps is not None else settings.simulation.steps
    stride = args.stride if args.stride is not None else (settings.voyage.stride or steps)
    r_max = args.r_max if args.r_max is not None else settings.measures.r_max
    threads = args.threads if args.threads is not None else settings.harness.threads

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = ValidationReport(settings={
        "dt": dt, "steps": steps, "stride": stride, "r_max": r_max,
        "optimal_below": settings.measures.optimal_below,
        "satisfactory_below": settings.measures.satisfactory_below,
        "gap_eps": settings.voyage.gap_eps,
    })

    segments = []
    for path in files:
        voyage_id = Path(path).stem
        try:
            records = load_voyage(path)
            result = segment_voyage(records, weather, n=steps, dt=dt, stride=stride,
                                    gap_eps=settings.voyage.gap_eps,
                                    max_anchor_distance=settings.voyage.max_anchor_distance_m,
                                    voyage_id=voyage_id)
        except HelmsimError as f_err:
            logger.error(f"{path}: {f_err}")
            report.voyage_errors.append({"voyage_id": voyage_id, "error": str(f_err)})
            continue
        segments.extend(result.segments)
        report.windows += result.windows
        for reason, count in result.dropped.items():
            report.dropped[reason] = report.dropped.get(reason, 0) + count
    if len(report.voyage_errors) == len(files):
        report.write(out_dir / "report.json")
        raise HelmsimError("no voyage file could be read")

    options = ReplayOptions(
        dt=dt, steps=steps, r_max=r_max, denom_eps=settings.measures.denom_eps,
        thresholds=settings.measures.thresholds,
        plot_dir=None if args.no_plots else str(out_dir / "plots"),
    )
    report.segments = run_segments(segments, cfg, options, threads=threads, quiet=args.quiet)
    report.write(out_dir / "report.json")

    wind_rows = [row for segment in segments for row in wind_check_rows(segment)]
    if wind_rows:
        write_rows_csv(wind_rows, out_dir / "wind_check.csv")

    counts = report.counts
    logger.info(f"Validated {counts['total']} segments: {counts['optimal']} optimal, "
                f"{counts['satisfactory']} satisfactory, {counts['sub_optimal']} sub-optimal, "
                f"{counts['failed']} failed")
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "compare": cmd_compare, "validate": cmd_validate}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(log_file=args.log_file, debug=args.debug)
    start = exec_timestamp()
    try:
        settings = load_settings(args.settings)
        code = COMMANDS[args.command](args, settings)
    except (HelmsimError, OSError) as f_err:
        logger.error(f"{args.command} failed: {f_err}")
        print(f"helmsim: error: {f_err}", file=sys.stderr)
        return EXIT_INPUT
    except Exception:
        logger.exception(f"{args.command} failed with an internal error")
        return EXIT_INTERNAL
    logger.debug(f"{args.command} finished in {exec_timestamp() - start:.2f} s")
    return code


if __name__ == "__main__":
    sys.exit(main())
