# helmsim/synthetic.py
"""
Voyage and weather logs produced by the simulator itself, used to check the
validation harness end to end.
"""

import logging
import math

import numpy as np

from .dynamics import ControlInput, ControlSeries, simulate
from .environment import (
    WEATHER_COLUMNS, EnvironmentSample, EnvironmentSeries, body_to_earth, sample_at,
    vector_from_direction, vector_from_meteorological, wrap_angle,
)
from .file import format_float, write_rows_csv
from .time import format_timestamp
from .voyage import ANEMOMETER_COLUMNS, EARTH_RADIUS, VOYAGE_COLUMNS, VoyageRecord

logger = logging.getLogger(__name__)


def zigzag_controls(steps, rudder_deg, rpm, period, dt=1.0):
    """
    Rudder alternating between +rudder_deg and -rudder_deg every half period.

    Args:
        steps (int): Run length in steps
        rudder_deg (float): Rudder amplitude, deg
        rpm (float): Constant propeller rate
        period (float): Full zig-zag period, s (switch times are whole seconds)
        dt (float): Step size, s

    Returns:
        ControlSeries: commands with switch times at multiples of period/2
    """
    half = max(int(round(period / 2.0)), 1)
    times = []
    controls = []
    sign = 1.0
    for t in range(0, int(math.ceil(steps * dt)) + 1, half):
        times.append(float(t))
        controls.append(ControlInput(delta=math.radians(sign * rudder_deg), n=rpm / 60.0))
        sign = -sign
    return ControlSeries(tuple(times), tuple(controls))


def steady_environment(wind_speed=0.0, wind_from_deg=0.0, wave_height=0.0, wave_from_deg=0.0,
                       current_speed=0.0, current_to_deg=0.0, duration=3600.0, interval=600.0):
    """Constant conditions reported at a fixed hindcast interval."""
    sample = EnvironmentSample(
        true_wind=vector_from_meteorological(wind_speed, math.radians(wind_from_deg)),
        wave_height=wave_height,
        wave_direction=wrap_angle(math.radians(wave_from_deg)),
        current=vector_from_direction(current_speed, math.radians(current_to_deg)),
    )
    times = tuple(float(t) for t in np.arange(0.0, duration + interval, interval))
    return EnvironmentSeries(times, tuple(sample for _ in times))


def synthesize_voyage(cfg, initial, controls, env, steps, start_epoch, anchor_lat, anchor_lon,
                      heading_bias_deg=0.0, with_anemometer=False):
    """
    Simulate a run and express it as a 1 Hz voyage log.

    Positions are advanced on the sphere one step at a time from the
    simulated x/y increments. A nonzero heading_bias_deg is added to the
    logged heading only, emulating a misaligned compass.

    Args:
        cfg (VesselConfig): Vessel parameters
        initial (ShipState): Start state
        controls (ControlSeries): Commands, switch times on whole seconds
        env (EnvironmentSeries): Conditions, times relative to the start
        steps (int): Duration in seconds
        start_epoch (float): Epoch time of the first record
        anchor_lat (float): Latitude of the first fix, deg
        anchor_lon (float): Longitude of the first fix, deg
        heading_bias_deg (float): Error added to the logged heading
        with_anemometer (bool): Also log the true wind as an onboard anemometer reading

    Returns:
        list: VoyageRecord, steps + 1 of them
    """
    trajectory = simulate(cfg, initial, controls, env, dt=1.0, n_steps=steps)
    extras = trajectory.extras
    lat, lon = anchor_lat, anchor_lon
    records = []
    for k in range(len(trajectory)):
        if k:
            lat_prev = lat
            lat += math.degrees((trajectory.x[k] - trajectory.x[k - 1]) / EARTH_RADIUS)
            lon += math.degrees((trajectory.y[k] - trajectory.y[k - 1])
                                / (EARTH_RADIUS * math.cos(math.radians(lat_prev))))
            lon = (lon + 180.0) % 360.0 - 180.0
        psi = float(trajectory.psi[k])
        ground = body_to_earth((extras["u_prime"][k], extras["v_prime"][k]), psi)
        wind_speed = wind_dir = None
        if with_anemometer:
            wind = sample_at(env, float(trajectory.t[k])).true_wind
            wind_speed = math.hypot(*wind)
            wind_dir = math.degrees(math.atan2(-wind[1], -wind[0])) % 360.0
        records.append(VoyageRecord(
            time=start_epoch + float(trajectory.t[k]),
            lat=lat,
            lon=lon,
            heading=(math.degrees(psi) + heading_bias_deg) % 360.0,
            sog=math.hypot(*ground),
            cog=math.degrees(math.atan2(ground[1], ground[0])) % 360.0,
            yaw_rate=math.degrees(trajectory.r[k]) * 60.0,
            rudder=math.degrees(extras["delta"][k]),
            rpm=extras["n_rps"][k] * 60.0,
            anemometer_speed=wind_speed,
            anemometer_dir=wind_dir,
        ))
    logger.info(f"Synthesized {len(records)} voyage records ({steps} s)")
    return records


def write_voyage(records, path):
    """Write records in the voyage CSV schema (lat/lon with 8 decimals)."""
    with_anemometer = all(r.anemometer_speed is not None for r in records)
    columns = list(VOYAGE_COLUMNS) + (list(ANEMOMETER_COLUMNS) if with_anemometer else [])
    rows = []
    for rec in records:
        row = {
            "timestamp_iso8601": format_timestamp(rec.time),
            "lat_deg": f"{rec.lat:.8f}",
            "lon_deg": f"{rec.lon:.8f}",
            "heading_deg": rec.heading,
            "sog_mps": rec.sog,
            "cog_deg": rec.cog,
            "yaw_rate_degmin": rec.yaw_rate,
            "rudder_deg": rec.rudder,
            "rpm": rec.rpm,
        }
        if with_anemometer:
            row["anemometer_speed_mps"] = rec.anemometer_speed
            row["anemometer_dir_from_deg"] = rec.anemometer_dir
        rows.append(row)
    write_rows_csv(rows, path, columns)


def write_weather(series, start_epoch, path):
    """Write an EnvironmentSeries (relative times) as a weather CSV with absolute timestamps."""
    rows = []
    for t, sample in zip(series.times, series.samples):
        wind_n, wind_e = sample.true_wind
        cur_n, cur_e = sample.current
        rows.append({
            "timestamp_iso8601": format_timestamp(start_epoch + t),
            "wind_speed_mps": math.hypot(wind_n, wind_e),
            "wind_dir_from_deg": math.degrees(math.atan2(-wind_e, -wind_n)) % 360.0,
            "hs_m": sample.wave_height,
            "wave_dir_from_deg": math.degrees(sample.wave_direction) % 360.0,
            "current_speed_mps": math.hypot(cur_n, cur_e),
            "current_dir_to_deg": math.degrees(math.atan2(cur_e, cur_n)) % 360.0,
        })
    write_rows_csv(rows, path, list(WEATHER_COLUMNS))
    logger.debug(f"Wrote {len(rows)} weather samples to {path} ({format_float(series.times[-1])} s span)")
