# helmsim/harness.py
"""
Replay-and-score batch harness: simulate each validation segment from its
recorded initial state and controls, score it against the recorded truth
and aggregate the categories.
"""

import logging
import math
import multiprocessing
import signal
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Dict, Optional

import numpy as np
import pandas as pd
import psutil
from tqdm import tqdm

from .dynamics import simulate
from .environment import sample_at
from .errors import HelmsimError
from .file import write_json, write_rows_csv
from .logging import share_with_workers
from .measures import (
    DENOM_EPS, OPTIMAL, SATISFACTORY, SUB_OPTIMAL, AlignedTrajectoryPair, MeasureThresholds,
    measure_report, normalization_context,
)
from .time import format_timestamp

logger = logging.getLogger(__name__)

CATEGORIES = (OPTIMAL, SATISFACTORY, SUB_OPTIMAL)


@dataclass(frozen=True, eq=False)
class PlotBundle:
    """Truth-vs-prediction series for the track, heading, velocity and yaw-rate panels."""

    panels: Dict[str, pd.DataFrame]

    @classmethod
    def from_pair(cls, pair):
        t, p = pair.truth, pair.prediction
        time = t.t
        return cls({
            "track": pd.DataFrame({"t": time, "x_truth": t.x, "y_truth": t.y,
                                   "x_pred": p.x, "y_pred": p.y}),
            "heading": pd.DataFrame({"t": time, "psi_truth_deg": np.degrees(t.psi),
                                     "psi_pred_deg": np.degrees(p.psi)}),
            "velocities": pd.DataFrame({"t": time, "u_truth": t.u, "u_pred": p.u,
                                        "v_truth": t.v, "v_pred": p.v}),
            "yaw_rate": pd.DataFrame({"t": time, "r_truth_degs": np.degrees(t.r),
                                      "r_pred_degs": np.degrees(p.r)}),
        })

    def write(self, directory, label=""):
        """Write one CSV per panel plus manifest.json into directory."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        manifest = {"label": label, "panels": {}}
        for name, frame in self.panels.items():
            write_rows_csv(frame.to_dict("records"), directory / f"{name}.csv", list(frame.columns))
            manifest["panels"][name] = {"file": f"{name}.csv", "columns": list(frame.columns),
                                        "knots": len(frame)}
        write_json(manifest, directory / "manifest.json")


def compare_trajectories(truth, prediction, r_max, thresholds=None, denom_eps=DENOM_EPS):
    """
    Score a prediction against the truth.

    Returns:
        tuple: (MeasureReport, PlotBundle)

    Raises:
        AlignmentError: If knot counts or timestamps differ
        DegenerateContextError: If the truth does not move
    """
    pair = AlignedTrajectoryPair(truth, prediction)
    ctx = normalization_context(truth, r_max, denom_eps)
    return measure_report(pair, ctx, thresholds, denom_eps), PlotBundle.from_pair(pair)


@dataclass(frozen=True)
class ReplayOptions:
    dt: float = 1.0
    steps: int = 120
    r_max: float = 0.0314
    denom_eps: float = DENOM_EPS
    thresholds: MeasureThresholds = field(default_factory=MeasureThresholds)
    plot_dir: Optional[str] = None


def segment_label(segment):
    return f"{segment.voyage_id}_{segment.index:04d}"


def score_segment(segment, cfg, options):
    """
    Replay one segment and score it; failures become a result entry.

    Returns:
        dict: report row for the segment
    """
    result = {
        "voyage_id": segment.voyage_id,
        "window": segment.index,
        "start": format_timestamp(segment.start_time),
        "mean_abs_rudder_deg": segment.mean_abs_rudder_deg,
        "mean_rpm": segment.mean_rpm,
    }
    try:
        prediction = simulate(cfg, segment.initial, segment.controls, segment.env,
                              dt=options.dt, n_steps=options.steps)
        report, bundle = compare_trajectories(segment.truth, prediction, options.r_max,
                                              options.thresholds, options.denom_eps)
    except HelmsimError as f_err:
        logger.warning(f"{segment_label(segment)} failed: {f_err}")
        result.update(status="failed", error=str(f_err))
        return result
    except Exception as f_err:
        logger.exception(f"{segment_label(segment)} failed unexpectedly")
        result.update(status="failed", error=f"{type(f_err).__name__}: {f_err}")
        return result

    if options.plot_dir:
        bundle.write(Path(options.plot_dir) / segment_label(segment), label=segment_label(segment))
    result.update(status="ok", measures=report.to_dict())
    return result


def worker_count(requested, jobs):
    """Workers to start: requested (0 = CPU count) capped by the number of jobs."""
    f_threads = requested or psutil.cpu_count(logical=True) or 1
    return max(1, min(int(f_threads), jobs))


def _init_worker():
    # workers ignore Ctrl-C; the parent terminates the pool
    signal.signal(signal.SIGINT, signal.SIG_IGN)


def run_segments(segments, cfg, options, threads=0, quiet=False):
    """
    Score segments, in parallel when more than one worker is available.

    Results come back in input order whatever the worker count.
    """
    workers = worker_count(threads, len(segments))
    job = partial(score_segment, cfg=cfg, options=options)
    results = []
    with tqdm(total=len(segments), disable=quiet, desc="segments", unit="seg") as f_pbar:
        if workers == 1:
            for segment in segments:
                results.append(job(segment))
                f_pbar.update(1)
        else:
            logger.info(f"Scoring {len(segments)} segments on {workers} workers")
            share_with_workers()
            with multiprocessing.Pool(workers, initializer=_init_worker) as f_pool:
                for result in f_pool.imap(job, segments, chunksize=1):
                    results.append(result)
                    f_pbar.update(1)
    return results


@dataclass
class ValidationReport:
    segments: list = field(default_factory=list)
    dropped: dict = field(default_factory=lambda: {"gap": 0, "projection": 0})
    windows: int = 0
    voyage_errors: list = field(default_factory=list)
    settings: dict = field(default_factory=dict)

    @property
    def counts(self):
        counts = {c: 0 for c in CATEGORIES}
        counts["failed"] = 0
        for row in self.segments:
            key = row["measures"]["category"] if row["status"] == "ok" else "failed"
            counts[key] += 1
        counts["total"] = len(self.segments)
        return counts

    def to_dict(self):
        rows = sorted(self.segments, key=lambda r: (r["voyage_id"], r["window"]))
        cvdm = [r["measures"]["cvdm_pct"] for r in rows if r["status"] == "ok"]
        return {
            "aggregate": {
                "counts": self.counts,
                "cvdm_mean_pct": float(np.mean(cvdm)) if cvdm else None,
                "cvdm_max_pct": float(np.max(cvdm)) if cvdm else None,
            },
            "dropped": dict(self.dropped),
            "windows": self.windows,
            "segments": rows,
            "settings": self.settings,
            "voyage_errors": self.voyage_errors,
        }

    def write(self, path):
        write_json(self.to_dict(), path)


def wind_check_rows(segment):
    """Hindcast true wind next to the onboard anemometer, one row per knot."""
    if segment.anemometer is None:
        return []
    rows = []
    for k, t in enumerate(segment.truth.t):
        hind_n, hind_e = sample_at(segment.env, float(t)).true_wind
        anem_n, anem_e = segment.anemometer[k]
        rows.append({
            "voyage_id": segment.voyage_id,
            "window": segment.index,
            "t": float(t),
            "hindcast_speed_mps": math.hypot(hind_n, hind_e),
            "hindcast_dir_from_deg": math.degrees(math.atan2(-hind_e, -hind_n)) % 360.0,
            "anemometer_speed_mps": math.hypot(anem_n, anem_e),
            "anemometer_dir_from_deg": math.degrees(math.atan2(-anem_e, -anem_n)) % 360.0,
        })
    return rows
