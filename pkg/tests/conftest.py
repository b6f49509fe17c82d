import math
from pathlib import Path

import pytest

from helmsim.config import config_from_dict, config_to_dict, load_config
from helmsim.dynamics import ShipState
from helmsim.maneuvers import KNOT
from helmsim.synthetic import steady_environment, synthesize_voyage, write_voyage, write_weather, zigzag_controls
from helmsim.voyage import EARTH_RADIUS, VoyageRecord

REPO_ROOT = Path(__file__).resolve().parent.parent
CONFIG_PATH = REPO_ROOT / "config" / "trainer_synthetic.json"
START_EPOCH = 1714543200.0    # 2024-05-01T06:00:00Z
ANCHOR = (34.65, 135.20)


def _zero_wind(doc):
    for key in ("C_X", "C_Y", "C_N"):
        doc["windage"][key] = [[a, 0.0] for a, _ in doc["windage"][key]]


@pytest.fixture(scope="session")
def cfg():
    return load_config(CONFIG_PATH)


@pytest.fixture(scope="session")
def quiet_cfg(cfg):
    """No wind loads and no calm-water resistance."""
    doc = config_to_dict(cfg)
    _zero_wind(doc)
    doc["hull"]["resistance"] = {"r2": 0.0}
    return config_from_dict(doc)


@pytest.fixture(scope="session")
def smooth_cfg(cfg):
    """Rudder curves without knots away from zero and no wind loads."""
    doc = config_to_dict(cfg)
    _zero_wind(doc)
    doc["rudder"]["C_L"] = [[-90.0, -2.0], [0.0, 0.0], [90.0, 2.0]]
    doc["rudder"]["C_D"] = [[-90.0, 1.3], [0.0, 0.02], [90.0, 1.3]]
    return config_from_dict(doc)


@pytest.fixture
def straight_records():
    """Factory for a due-north run at 5 m/s logged at 1 Hz, optionally with missing seconds."""

    def build(count, skip=(), speed=5.0, rpm=100.0):
        records = []
        for k in range(count):
            if k in skip:
                continue
            records.append(VoyageRecord(
                time=START_EPOCH + k,
                lat=ANCHOR[0] + math.degrees(speed * k / EARTH_RADIUS),
                lon=ANCHOR[1],
                heading=0.0, sog=speed, cog=0.0, yaw_rate=0.0, rudder=0.0, rpm=rpm,
            ))
        return records

    return build


@pytest.fixture(scope="session")
def synthetic_env():
    return steady_environment(wind_speed=6.0, wind_from_deg=45.0, wave_height=1.0, wave_from_deg=20.0,
                              current_speed=0.3, current_to_deg=90.0, duration=600.0)


def _write_synthetic(cfg, env, directory, heading_bias_deg=0.0):
    controls = zigzag_controls(600, rudder_deg=5.0, rpm=106.0, period=240.0)
    records = synthesize_voyage(cfg, ShipState(u=6.0 * KNOT), controls, env, 600, START_EPOCH,
                                ANCHOR[0], ANCHOR[1], heading_bias_deg=heading_bias_deg,
                                with_anemometer=True)
    directory.mkdir(parents=True, exist_ok=True)
    voyage = directory / "voyage_synthetic.csv"
    weather = directory / "weather.csv"
    write_voyage(records, voyage)
    write_weather(env, START_EPOCH, weather)
    return voyage, weather


@pytest.fixture(scope="session")
def synthetic_voyage(cfg, synthetic_env, tmp_path_factory):
    """Simulator-generated voyage (600 s, zig-zag) and its weather file."""
    return _write_synthetic(cfg, synthetic_env, tmp_path_factory.mktemp("clean"))


@pytest.fixture(scope="session")
def biased_voyage(cfg, synthetic_env, tmp_path_factory):
    """Same voyage logged through a compass reading 10 deg high."""
    return _write_synthetic(cfg, synthetic_env, tmp_path_factory.mktemp("biased"), heading_bias_deg=10.0)


@pytest.fixture
def no_settings(tmp_path, monkeypatch):
    """Settings path that does not exist, and no thread override."""
    monkeypatch.delenv("HELMSIM_THREADS", raising=False)
    return str(tmp_path / "absent.ini")
