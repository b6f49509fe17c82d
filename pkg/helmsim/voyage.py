# helmsim/voyage.py
"""
Recorded voyage logs: CSV ingestion, local plane projection, resampling to a
fixed cadence and segmentation into validation windows.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from .dynamics import ControlInput, ControlSeries, ShipState, Trajectory
from .environment import earth_to_body, sample_at
from .errors import ProjectionError, VoyageDataError
from .time import parse_timestamps

logger = logging.getLogger(__name__)

EARTH_RADIUS = 6371000.0
MAX_ANCHOR_DISTANCE = 50000.0
GAP_EPS = 3.0

VOYAGE_COLUMNS = (
    "timestamp_iso8601", "lat_deg", "lon_deg", "heading_deg", "sog_mps",
    "cog_deg", "yaw_rate_degmin", "rudder_deg", "rpm",
)
ANEMOMETER_COLUMNS = ("anemometer_speed_mps", "anemometer_dir_from_deg")

# column -> (low, high, high_inclusive)
_BOUNDS = {
    "lat_deg": (-90.0, 90.0, True),
    "lon_deg": (-180.0, 180.0, False),
    "rudder_deg": (-45.0, 45.0, True),
    "rpm": (0.0, math.inf, False),
    "sog_mps": (0.0, math.inf, False),
    "anemometer_speed_mps": (0.0, math.inf, False),
}


@dataclass(frozen=True)
class VoyageRecord:
    """One log line, kept in the log's own units (deg, deg/min, RPM)."""

    time: float          # epoch seconds, UTC
    lat: float
    lon: float
    heading: float       # deg from north
    sog: float           # m/s
    cog: float           # deg from north
    yaw_rate: float      # deg/min
    rudder: float        # deg, positive = starboard
    rpm: float
    anemometer_speed: Optional[float] = None
    anemometer_dir: Optional[float] = None   # deg, coming from

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise VoyageDataError(f"latitude {self.lat} out of range", column="lat_deg")
        if not -180.0 <= self.lon < 180.0:
            raise VoyageDataError(f"longitude {self.lon} out of range", column="lon_deg")
        if not abs(self.rudder) <= 45.0:
            raise VoyageDataError(f"rudder angle {self.rudder} exceeds 45 deg", column="rudder_deg")
        if not self.rpm >= 0.0:
            raise VoyageDataError(f"propeller rate {self.rpm} must be >= 0", column="rpm")


def _parse_times(column):
    try:
        return parse_timestamps(column)
    except (ValueError, TypeError):
        pass
    # locate the offending row
    for i, value in enumerate(column):
        try:
            parse_timestamps([value])
        except (ValueError, TypeError):
            raise VoyageDataError(f"unparseable timestamp {value!r}", row=i + 2, column="timestamp_iso8601")
    raise VoyageDataError("unparseable timestamps", column="timestamp_iso8601")


def load_voyage(path):
    """
    Parse and validate a voyage CSV.

    Args:
        path (str|Path): Voyage log

    Returns:
        list: VoyageRecord in file order (strictly increasing time)

    Raises:
        VoyageDataError: Naming the first offending row (file line number) and column
    """
    try:
        frame = pd.read_csv(path, skipinitialspace=True)
    except FileNotFoundError:
        raise VoyageDataError(f"voyage file not found: {path}")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as f_err:
        raise VoyageDataError(f"malformed voyage file {path}: {f_err}")
    missing = [c for c in VOYAGE_COLUMNS if c not in frame.columns]
    if missing:
        raise VoyageDataError(f"missing voyage column(s) {missing} in {path}", column=missing[0])
    if frame.empty:
        raise VoyageDataError(f"voyage file {path} has no rows")

    times = _parse_times(frame["timestamp_iso8601"])
    steps = np.diff(times)
    if np.any(steps <= 0.0):
        bad = int(np.argmax(steps <= 0.0)) + 1
        what = "duplicate timestamp" if steps[bad - 1] == 0.0 else "timestamps are not increasing"
        raise VoyageDataError(what, row=bad + 2, column="timestamp_iso8601")

    optional = [c for c in ANEMOMETER_COLUMNS if c in frame.columns]
    numeric = {}
    for column in VOYAGE_COLUMNS[1:] + tuple(optional):
        values = pd.to_numeric(frame[column], errors="coerce").to_numpy(dtype=float)
        bad = ~np.isfinite(values)
        if bad.any():
            raise VoyageDataError("not a finite number", row=int(np.argmax(bad)) + 2, column=column)
        if column in _BOUNDS:
            low, high, inclusive = _BOUNDS[column]
            out = (values < low) | ((values > high) if inclusive else (values >= high))
            if out.any():
                raise VoyageDataError(f"value out of range [{low}, {high}{']' if inclusive else ')'}",
                                      row=int(np.argmax(out)) + 2, column=column)
        numeric[column] = values

    records = []
    for i in range(len(frame)):
        records.append(VoyageRecord(
            time=float(times[i]),
            lat=float(numeric["lat_deg"][i]),
            lon=float(numeric["lon_deg"][i]),
            heading=float(numeric["heading_deg"][i]),
            sog=float(numeric["sog_mps"][i]),
            cog=float(numeric["cog_deg"][i]),
            yaw_rate=float(numeric["yaw_rate_degmin"][i]),
            rudder=float(numeric["rudder_deg"][i]),
            rpm=float(numeric["rpm"][i]),
            anemometer_speed=float(numeric["anemometer_speed_mps"][i]) if len(optional) == 2 else None,
            anemometer_dir=float(numeric["anemometer_dir_from_deg"][i]) if len(optional) == 2 else None,
        ))
    logger.info(f"Loaded {len(records)} voyage records from {path}")
    return records


def project_latlon(lat, lon, anchor, max_distance=MAX_ANCHOR_DISTANCE):
    """
    Equirectangular projection onto the plane tangent at the anchor.

    Args:
        lat (array-like): Latitudes, deg
        lon (array-like): Longitudes, deg
        anchor (tuple): (lat, lon) of the local origin, deg
        max_distance (float): Guard radius, m

    Returns:
        tuple: (x north, y east) numpy arrays in metres

    Raises:
        ProjectionError: If any point lies farther than max_distance from the anchor
    """
    lat = np.asarray(lat, dtype=float)
    lon = np.asarray(lon, dtype=float)
    lat0, lon0 = anchor
    dlon = np.mod(lon - lon0 + 180.0, 360.0) - 180.0
    x = EARTH_RADIUS * np.radians(lat - lat0)
    y = EARTH_RADIUS * math.cos(math.radians(lat0)) * np.radians(dlon)
    distance = np.hypot(x, y)
    if np.any(distance > max_distance):
        worst = float(np.max(distance))
        raise ProjectionError(f"position {worst:.0f} m from anchor exceeds the {max_distance:.0f} m guard")
    return x, y


def project_to_local(records, anchor, max_distance=MAX_ANCHOR_DISTANCE):
    """Planar (x north, y east) positions of voyage records, shape (N, 2)."""
    x, y = project_latlon([r.lat for r in records], [r.lon for r in records], anchor, max_distance)
    return np.column_stack([x, y])


def resample_voyage(records, dt=1.0, gap_eps=GAP_EPS):
    """
    Resample a voyage onto a regular grid starting at the first record.

    Continuous channels are interpolated linearly; heading is unwrapped first
    and speed over ground is interpolated as an earth-frame vector. Rudder and
    propeller rate hold their previous value. Grid points strictly inside a raw
    interval longer than gap_eps are flagged in_gap.

    Args:
        records (list): VoyageRecord, strictly increasing time
        dt (float): Grid spacing, s
        gap_eps (float): Largest raw interval treated as continuous, s

    Returns:
        pandas.DataFrame: columns t, lat, lon, psi, sog_north, sog_east, r, delta,
        n_rps, in_gap (and anemometer_north/east when logged); SI units, radians
    """
    if not records:
        raise VoyageDataError("voyage has no records")
    raw = pd.DataFrame([asdict(r) for r in records])
    t_raw = raw["time"].to_numpy()
    count = int(math.floor((t_raw[-1] - t_raw[0]) / dt + 1e-9)) + 1
    grid = t_raw[0] + np.arange(count) * dt

    heading = np.unwrap(np.radians(raw["heading"].to_numpy()))
    psi = np.mod(np.interp(grid, t_raw, heading) + math.pi, 2.0 * math.pi) - math.pi
    cog = np.radians(raw["cog"].to_numpy())
    sog = raw["sog"].to_numpy()
    lon = np.unwrap(raw["lon"].to_numpy(), period=360.0)

    hold = np.clip(np.searchsorted(t_raw, grid, side="right") - 1, 0, len(t_raw) - 1)
    upper = np.clip(hold + 1, 0, len(t_raw) - 1)
    interval = t_raw[upper] - t_raw[hold]
    in_gap = (interval > gap_eps) & (grid > t_raw[hold])

    out = pd.DataFrame({
        "t": grid,
        "lat": np.interp(grid, t_raw, raw["lat"].to_numpy()),
        "lon": np.mod(np.interp(grid, t_raw, lon) + 180.0, 360.0) - 180.0,
        "psi": psi,
        "sog_north": np.interp(grid, t_raw, sog * np.cos(cog)),
        "sog_east": np.interp(grid, t_raw, sog * np.sin(cog)),
        "r": np.radians(np.interp(grid, t_raw, raw["yaw_rate"].to_numpy())) / 60.0,
        "delta": np.radians(raw["rudder"].to_numpy()[hold]),
        "n_rps": raw["rpm"].to_numpy()[hold] / 60.0,
        "in_gap": in_gap,
    })
    if raw["anemometer_speed"].notna().all():
        wind_from = np.radians(raw["anemometer_dir"].to_numpy())
        wind_speed = raw["anemometer_speed"].to_numpy()
        out["anemometer_north"] = np.interp(grid, t_raw, -wind_speed * np.cos(wind_from))
        out["anemometer_east"] = np.interp(grid, t_raw, -wind_speed * np.sin(wind_from))
    return out


def stw_from_sog(u_prime, v_prime, psi, current):
    """
    Through-water body velocities from ground velocities and the sea current.

    Args:
        u_prime (float): Surge over ground, m/s
        v_prime (float): Sway over ground, m/s
        psi (float): Heading, rad
        current (tuple): Earth-frame (north, east) current, m/s

    Returns:
        tuple: (u, v) m/s
    """
    cu, cv = earth_to_body(current, psi)
    return u_prime - cu, v_prime - cv


@dataclass(frozen=True, eq=False)
class ValidationSegment:
    """One replay window: truth knots, recorded controls and the weather slice."""

    voyage_id: str
    index: int
    start_time: float           # epoch seconds of knot 0
    truth: Trajectory
    controls: ControlSeries
    env: object                 # EnvironmentSeries, times relative to knot 0
    initial: ShipState
    anemometer: Optional[np.ndarray] = None

    @property
    def mean_abs_rudder_deg(self):
        return float(np.degrees(np.mean(np.abs(self.truth.extras["delta"]))))

    @property
    def mean_rpm(self):
        return float(np.mean(self.truth.extras["n_rps"]) * 60.0)


@dataclass
class SegmentationResult:
    segments: list = field(default_factory=list)
    windows: int = 0
    dropped: dict = field(default_factory=lambda: {"gap": 0, "projection": 0})

    @property
    def dropped_total(self):
        return sum(self.dropped.values())


def segment_voyage(records, env, n=120, dt=1.0, stride=None, gap_eps=GAP_EPS,
                   max_anchor_distance=MAX_ANCHOR_DISTANCE, voyage_id="voyage"):
    """
    Cut a voyage into windows of n + 1 knots.

    Consecutive windows start `stride` knots apart (default n, so they share
    their boundary knot and do not overlap in time). Each window is projected
    around its own first fix; its initial through-water velocities come from
    the recorded ground velocities minus the current at that time.

    Args:
        records (list): VoyageRecord
        env (EnvironmentSeries): Weather with absolute epoch times
        n (int): Steps per window
        dt (float): Knot spacing, s
        stride (int): Knots between window starts
        gap_eps (float): Largest tolerated raw logging gap, s
        max_anchor_distance (float): Projection guard, m
        voyage_id (str): Label carried into every segment

    Returns:
        SegmentationResult: kept segments plus drop counts by reason
    """
    stride = n if stride is None else int(stride)
    if stride < 1 or n < 1:
        raise VoyageDataError(f"window length and stride must be >= 1, got n={n}, stride={stride}")
    grid = resample_voyage(records, dt=dt, gap_eps=gap_eps)
    result = SegmentationResult()
    t_rel = np.arange(n + 1) * dt

    for index, start in enumerate(range(0, len(grid) - n, stride)):
        result.windows += 1
        window = grid.iloc[start:start + n + 1]
        if window["in_gap"].any():
            result.dropped["gap"] += 1
            logger.debug(f"{voyage_id} window {index} dropped: logging gap")
            continue
        start_time = float(window["t"].iloc[0])
        try:
            x, y = project_latlon(window["lat"], window["lon"],
                                  (window["lat"].iloc[0], window["lon"].iloc[0]), max_anchor_distance)
        except ProjectionError as f_err:
            result.dropped["projection"] += 1
            logger.warning(f"{voyage_id} window {index} dropped: {f_err}")
            continue

        env_slice = env.window(start_time, start_time + n * dt).shifted(start_time)
        psi = window["psi"].to_numpy()
        columns = {"u": [], "v": [], "u_prime": [], "v_prime": []}
        for k in range(n + 1):
            u_prime, v_prime = earth_to_body(
                (window["sog_north"].iloc[k], window["sog_east"].iloc[k]), psi[k])
            u, v = stw_from_sog(u_prime, v_prime, psi[k], sample_at(env_slice, t_rel[k]).current)
            columns["u"].append(u)
            columns["v"].append(v)
            columns["u_prime"].append(u_prime)
            columns["v_prime"].append(v_prime)

        delta = window["delta"].to_numpy()
        n_rps = window["n_rps"].to_numpy()
        truth = Trajectory.from_columns({
            "t": t_rel, "x": x, "y": y, "psi": psi, "r": window["r"].to_numpy(),
            "delta": delta, "n_rps": n_rps, **columns,
        })
        controls = ControlSeries(tuple(float(t) for t in t_rel),
                                 tuple(ControlInput(float(d), float(r)) for d, r in zip(delta, n_rps)))
        anemometer = None
        if "anemometer_north" in window:
            anemometer = window[["anemometer_north", "anemometer_east"]].to_numpy()
        result.segments.append(ValidationSegment(
            voyage_id=voyage_id, index=index, start_time=start_time, truth=truth,
            controls=controls, env=env_slice, initial=truth.state_at(0), anemometer=anemometer,
        ))

    logger.info(f"{voyage_id}: {len(result.segments)} of {result.windows} windows kept "
                f"({result.dropped['gap']} gap, {result.dropped['projection']} projection drops)")
    return result
