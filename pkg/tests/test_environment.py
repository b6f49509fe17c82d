import math

import numpy as np
import pytest

from helmsim.dynamics import ShipState
from helmsim.environment import (
    EnvironmentSample, EnvironmentSeries, angle_difference, apparent_wind, body_to_earth, load_weather, sample_at,
    vector_from_meteorological, wrap_angle, wrap_positive,
)
from helmsim.errors import SeriesError, VoyageDataError

WEATHER_HEADER = ("timestamp_iso8601,wind_speed_mps,wind_dir_from_deg,hs_m,wave_dir_from_deg,"
                  "current_speed_mps,current_dir_to_deg\n")


def _series():
    return EnvironmentSeries((0.0, 60.0), (EnvironmentSample(wave_height=1.0), EnvironmentSample(wave_height=2.0)))


def test_single_sample_holds_everywhere():
    series = EnvironmentSeries.constant(EnvironmentSample(wave_height=1.5))
    for t in (-10.0, 0.0, 1e6):
        assert sample_at(series, t).wave_height == 1.5


def test_zero_order_hold():
    series = _series()
    assert sample_at(series, 60.0).wave_height == 2.0
    assert sample_at(series, 59.9).wave_height == 1.0
    assert sample_at(series, -1.0).wave_height == 1.0


def test_empty_and_unsorted_series():
    with pytest.raises(SeriesError):
        sample_at(EnvironmentSeries((), ()), 0.0)
    with pytest.raises(SeriesError):
        EnvironmentSeries((10.0, 5.0), (EnvironmentSample(), EnvironmentSample()))


def test_window_keeps_sample_in_force_at_start():
    series = EnvironmentSeries((0.0, 600.0, 1200.0), tuple(EnvironmentSample(wave_height=h) for h in (1, 2, 3)))
    window = series.window(300.0, 420.0).shifted(300.0)
    assert window.times == (-300.0,)
    assert sample_at(window, 0.0).wave_height == 1.0
    window = series.window(500.0, 700.0).shifted(500.0)
    assert window.times == (-500.0, 100.0)


def test_still_air_head_wind():
    aw = apparent_wind((0.0, 0.0), ShipState(u=5.0))
    assert aw.speed == pytest.approx(5.0)
    assert aw.angle == pytest.approx(0.0, abs=1e-12)


def test_wind_matching_ground_velocity_cancels():
    state = ShipState(psi=0.3, u=4.0, v=0.5)
    ground = (4.0 * math.cos(0.3) - 0.5 * math.sin(0.3), 4.0 * math.sin(0.3) + 0.5 * math.cos(0.3))
    assert apparent_wind(ground, state).speed == pytest.approx(0.0, abs=1e-12)


def test_beam_wind_from_starboard():
    # ship heading north at rest, wind from the east blowing west
    aw = apparent_wind(vector_from_meteorological(10.0, math.pi / 2.0), ShipState())
    assert aw.speed == pytest.approx(10.0)
    assert aw.angle == pytest.approx(math.pi / 2.0)


def test_current_counts_toward_ground_velocity():
    state = ShipState(u=3.0)
    aw = apparent_wind((0.0, 0.0), state, current=(-3.0, 0.0))
    assert aw.speed == pytest.approx(0.0, abs=1e-12)


def test_angle_difference_range():
    assert angle_difference(math.pi, 0.0) == math.pi
    assert angle_difference(0.1, 2.0 * math.pi - 0.1) == pytest.approx(0.2)


def test_apparent_wind_is_equivariant_under_rotation():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        wind = tuple(rng.uniform(-12.0, 12.0, size=2))
        current = tuple(rng.uniform(-1.5, 1.5, size=2))
        state = ShipState(psi=rng.uniform(-math.pi, math.pi), u=rng.uniform(0.0, 7.0), v=rng.uniform(-0.5, 0.5))
        turn = rng.uniform(-math.pi, math.pi)
        base = apparent_wind(wind, state, current)
        turned = apparent_wind(body_to_earth(wind, turn), ShipState(psi=state.psi + turn, u=state.u, v=state.v),
                               body_to_earth(current, turn))
        assert turned.speed == pytest.approx(base.speed, rel=1e-9, abs=1e-12)
        assert abs(angle_difference(turned.angle, base.angle)) <= 1e-9


def test_wind_angle_stays_below_two_pi():
    aw = apparent_wind((0.0, 1e-17), ShipState(u=5.0))
    assert 0.0 <= aw.angle < 2.0 * math.pi
    assert aw.angle == 0.0
    assert wrap_positive(-1e-17) == 0.0
    assert wrap_positive(2.0 * math.pi) == 0.0


def test_wrap_angle_stays_below_pi():
    assert wrap_angle(-math.pi - 1e-17) == -math.pi
    assert wrap_angle(math.pi) == -math.pi
    assert wrap_angle(3.0 * math.pi / 2.0) == pytest.approx(-math.pi / 2.0)


def test_load_weather(tmp_path):
    path = tmp_path / "weather.csv"
    path.write_text(WEATHER_HEADER
                    + "2024-05-01T06:00:00Z,10,0,1.0,180,0.5,90\n"
                    + "2024-05-01T07:00:00Z,8,270,1.5,200,0.4,45\n", encoding="UTF-8")
    series = load_weather(path)
    assert series.times[1] - series.times[0] == 3600.0
    first = series.samples[0]
    # wind from the north flows south
    assert first.true_wind[0] == pytest.approx(-10.0)
    assert first.true_wind[1] == pytest.approx(0.0, abs=1e-12)
    assert first.current[1] == pytest.approx(0.5)
    assert first.wave_direction == pytest.approx(-math.pi)


def test_load_weather_rejects_negative_height(tmp_path):
    path = tmp_path / "weather.csv"
    path.write_text(WEATHER_HEADER + "2024-05-01T06:00:00Z,10,0,-1.0,180,0.5,90\n", encoding="UTF-8")
    with pytest.raises(VoyageDataError) as f_err:
        load_weather(path)
    assert f_err.value.row == 2
    assert f_err.value.column == "hs_m"


def test_load_weather_missing_column(tmp_path):
    path = tmp_path / "weather.csv"
    path.write_text("timestamp_iso8601,wind_speed_mps\n2024-05-01T06:00:00Z,3\n", encoding="UTF-8")
    with pytest.raises(VoyageDataError, match="missing weather column"):
        load_weather(path)
