# helmsim/environment.py
"""
Wind, wave and sea-current conditions.

Earth frame: x north, y east, angles clockwise from north. Wind and current
are stored as flow vectors (the direction the air/water moves TO); the
meteorological "coming from" convention is converted once, at ingestion.
Waves keep the direction they come FROM, since that is what the added
resistance gate needs.
"""

import bisect
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd

from .errors import SeriesError, VoyageDataError
from .time import parse_timestamps

logger = logging.getLogger(__name__)

WEATHER_COLUMNS = (
    "timestamp_iso8601", "wind_speed_mps", "wind_dir_from_deg", "hs_m",
    "wave_dir_from_deg", "current_speed_mps", "current_dir_to_deg",
)


TWO_PI = 2.0 * math.pi


def wrap_angle(angle):
    """Wrap to [-pi, pi)."""
    wrapped = (angle + math.pi) % TWO_PI - math.pi
    # float rounding of the modulo can land exactly on +pi
    return -math.pi if wrapped >= math.pi else wrapped


def wrap_positive(angle):
    """Wrap to [0, 2*pi)."""
    wrapped = angle % TWO_PI
    return 0.0 if wrapped >= TWO_PI else wrapped


def angle_difference(a, b):
    """Shortest signed difference a - b, in (-pi, pi]."""
    d = wrap_angle(a - b)
    return math.pi if d == -math.pi else d


def vector_from_direction(speed, direction_to_rad):
    """Earth-frame (north, east) components of a flow heading TO the given direction."""
    return (speed * math.cos(direction_to_rad), speed * math.sin(direction_to_rad))


def vector_from_meteorological(speed, direction_from_rad):
    """Earth-frame flow vector of a wind reported as coming FROM a direction."""
    return (-speed * math.cos(direction_from_rad), -speed * math.sin(direction_from_rad))


def earth_to_body(vector, psi):
    """Rotate an earth-frame (north, east) vector into the body frame at heading psi."""
    c, s = math.cos(psi), math.sin(psi)
    n, e = vector
    return (c * n + s * e, -s * n + c * e)


def body_to_earth(vector, psi):
    c, s = math.cos(psi), math.sin(psi)
    u, v = vector
    return (c * u - s * v, s * u + c * v)


@dataclass(frozen=True)
class EnvironmentSample:
    true_wind: Tuple[float, float] = (0.0, 0.0)
    wave_height: float = 0.0
    wave_direction: float = 0.0
    current: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        values = (*self.true_wind, self.wave_height, self.wave_direction, *self.current)
        if not all(math.isfinite(v) for v in values):
            raise SeriesError(f"environment sample has non-finite components: {values}")
        if self.wave_height < 0.0:
            raise SeriesError(f"significant wave height must be >= 0, got {self.wave_height}")

    def rotated(self, angle):
        """The same conditions with every direction turned clockwise by angle."""
        return EnvironmentSample(
            true_wind=body_to_earth(self.true_wind, angle),
            wave_height=self.wave_height,
            wave_direction=wrap_angle(self.wave_direction + angle),
            current=body_to_earth(self.current, angle),
        )


CALM = EnvironmentSample()


@dataclass(frozen=True)
class EnvironmentSeries:
    """Time-sorted (t, sample) pairs sampled with zero-order hold."""

    times: Tuple[float, ...]
    samples: Tuple[EnvironmentSample, ...]

    def __post_init__(self):
        if len(self.times) != len(self.samples):
            raise SeriesError("environment series has mismatched times/samples")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise SeriesError("environment series timestamps must be strictly increasing")

    @classmethod
    def constant(cls, sample=CALM):
        return cls((0.0,), (sample,))

    def __len__(self):
        return len(self.times)

    def shifted(self, offset):
        """Re-base times so that absolute time `offset` becomes t = 0."""
        return EnvironmentSeries(tuple(t - offset for t in self.times), self.samples)

    def window(self, start, end):
        """
        Samples relevant to [start, end]: the last one at or before start and
        every later one up to end. Times are kept absolute.
        """
        if not self.times:
            raise SeriesError("environment series is empty")
        first = max(bisect.bisect_right(self.times, start) - 1, 0)
        last = bisect.bisect_right(self.times, end)
        last = max(last, first + 1)
        return EnvironmentSeries(self.times[first:last], self.samples[first:last])

    def rotated(self, angle):
        return EnvironmentSeries(self.times, tuple(s.rotated(angle) for s in self.samples))


def sample_at(series, t):
    """
    Zero-order hold lookup.

    Args:
        series (EnvironmentSeries): Non-empty series
        t (float): Query time, s

    Returns:
        EnvironmentSample: latest sample at or before t; the first one before the series start

    Raises:
        SeriesError: If the series is empty
    """
    if not series.times:
        raise SeriesError("environment series is empty")
    idx = bisect.bisect_right(series.times, t) - 1
    return series.samples[max(idx, 0)]


@dataclass(frozen=True)
class ApparentWind:
    speed: float
    angle: float


def apparent_wind(true_wind, state, current=(0.0, 0.0)):
    """
    Wind felt on board: true wind minus ship ground velocity, in the body frame.

    Args:
        true_wind (tuple): Earth-frame (north, east) flow vector, m/s
        state (ShipState): psi and through-water velocities u, v
        current (tuple): Earth-frame sea current; ground velocity = stw + current

    Returns:
        ApparentWind: speed >= 0 and angle in [0, 2*pi), 0 = head wind,
        positive toward starboard
    """
    stw = body_to_earth((state.u, state.v), state.psi)
    ground = (stw[0] + current[0], stw[1] + current[1])
    rel = (true_wind[0] - ground[0], true_wind[1] - ground[1])
    rel_u, rel_v = earth_to_body(rel, state.psi)
    speed = math.hypot(rel_u, rel_v)
    if speed == 0.0:
        return ApparentWind(0.0, 0.0)
    # angle of the direction the wind comes FROM, measured from the bow
    angle = wrap_positive(math.atan2(-rel_v, -rel_u))
    return ApparentWind(speed, angle)


def relative_wave_heading(state, env):
    """Direction the waves come from, relative to the bow, in (-pi, pi]."""
    return angle_difference(env.wave_direction, state.psi)


def load_weather(path):
    """
    Parse a hindcast weather CSV into an EnvironmentSeries with epoch times.

    Args:
        path (str|Path): Weather CSV file

    Returns:
        EnvironmentSeries: flow-vector wind and current, absolute epoch seconds

    Raises:
        VoyageDataError: On missing columns, bad values or non-monotone time
    """
    try:
        frame = pd.read_csv(path, skipinitialspace=True)
    except FileNotFoundError:
        raise VoyageDataError(f"weather file not found: {path}")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as f_err:
        raise VoyageDataError(f"malformed weather file {path}: {f_err}")
    missing = [c for c in WEATHER_COLUMNS if c not in frame.columns]
    if missing:
        raise VoyageDataError(f"missing weather column(s) {missing} in {path}", column=missing[0])
    if frame.empty:
        raise VoyageDataError(f"weather file {path} has no rows")

    try:
        times = parse_timestamps(frame["timestamp_iso8601"])
    except (ValueError, TypeError) as f_err:
        raise VoyageDataError(f"unparseable timestamp: {f_err}", column="timestamp_iso8601")

    numeric = {}
    for column in WEATHER_COLUMNS[1:]:
        values = pd.to_numeric(frame[column], errors="coerce")
        bad = ~np.isfinite(values.to_numpy(dtype=float))
        bad = pd.Series(bad, index=values.index)
        if bad.any():
            raise VoyageDataError("not a finite number", row=int(bad.idxmax()) + 2, column=column)
        numeric[column] = values.to_numpy(dtype=float)

    for column in ("wind_speed_mps", "hs_m", "current_speed_mps"):
        negative = numeric[column] < 0.0
        if negative.any():
            raise VoyageDataError("must be >= 0", row=int(negative.argmax()) + 2, column=column)

    samples = []
    for i in range(len(frame)):
        if i and times[i] <= times[i - 1]:
            raise VoyageDataError("timestamps must be strictly increasing", row=i + 2,
                                  column="timestamp_iso8601")
        samples.append(EnvironmentSample(
            true_wind=vector_from_meteorological(numeric["wind_speed_mps"][i],
                                                 math.radians(numeric["wind_dir_from_deg"][i])),
            wave_height=float(numeric["hs_m"][i]),
            wave_direction=wrap_angle(math.radians(numeric["wave_dir_from_deg"][i])),
            current=vector_from_direction(numeric["current_speed_mps"][i],
                                          math.radians(numeric["current_dir_to_deg"][i])),
        ))
    logger.info(f"Loaded {len(samples)} weather samples from {path}")
    return EnvironmentSeries(tuple(float(t) for t in times), tuple(samples))
