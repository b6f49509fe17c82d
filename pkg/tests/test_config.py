import json
import math

import pytest

from helmsim.config import (
    CoefficientTable, config_from_dict, config_to_dict, inertia_determinant, load_config,
    lookup_coefficient, mirror_wind_table, write_config,
)
from helmsim.errors import ConfigError, TableError

from .conftest import CONFIG_PATH


def _doc():
    with open(CONFIG_PATH, encoding="UTF-8") as f_config:
        return json.load(f_config)


def test_shipped_config_loads(cfg):
    assert cfg.rudder.area == 5.8
    assert cfg.rudder.x_r == -40.0
    assert cfg.rudder.a_h == 0.2
    assert cfg.propeller.diameter == 3.0
    assert cfg.hull.water_density == 1025.0
    assert cfg.r_max == 0.0314
    assert inertia_determinant(cfg) > 0.0


def test_zero_mass_rejected():
    doc = _doc()
    doc["mass"]["m"] = 0
    with pytest.raises(ConfigError) as f_err:
        config_from_dict(doc)
    assert f_err.value.field == "mass.m"


def test_singular_inertia_rejected():
    doc = _doc()
    doc["derivatives"]["Y_vdot"] = doc["mass"]["m"]
    doc["derivatives"]["N_rdot"] = doc["mass"]["I_z"]
    with pytest.raises(ConfigError) as f_err:
        config_from_dict(doc)
    assert "determinant" in str(f_err.value)


def test_missing_section_and_unknown_derivative():
    doc = _doc()
    del doc["propeller"]
    with pytest.raises(ConfigError, match="propeller"):
        config_from_dict(doc)
    doc = _doc()
    doc["derivatives"]["N_vvv"] = 1.0
    with pytest.raises(ConfigError, match="N_vvv"):
        config_from_dict(doc)


def test_missing_file_names_path(tmp_path):
    path = tmp_path / "nowhere.json"
    with pytest.raises(ConfigError, match="nowhere.json"):
        load_config(path)


def test_malformed_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{ not json", encoding="UTF-8")
    with pytest.raises(ConfigError, match="malformed"):
        load_config(path)


def test_write_then_load_is_identical(cfg, tmp_path):
    path = tmp_path / "copy.json"
    write_config(cfg, path)
    assert config_to_dict(load_config(path)) == config_to_dict(cfg)


@pytest.mark.parametrize("angle, expected", [(0.0, 0.0), (math.pi / 4.0, 0.5)])
def test_lookup_is_linear_between_knots(angle, expected):
    table = CoefficientTable.from_pairs([[0.0, 0.0], [90.0, 1.0]])
    assert lookup_coefficient(table, angle) == pytest.approx(expected, abs=1e-12)


def test_periodic_lookup_wraps(cfg):
    assert lookup_coefficient(cfg.windage.c_y, 2.0 * math.pi + 0.1) == pytest.approx(
        lookup_coefficient(cfg.windage.c_y, 0.1), abs=1e-12)


def test_nonperiodic_lookup_clamps():
    table = CoefficientTable.from_pairs([[0.0, 0.0], [45.0, 1.0]])
    assert lookup_coefficient(table, math.radians(80.0)) == 1.0


def test_empty_and_unsorted_tables():
    with pytest.raises(TableError):
        CoefficientTable.from_pairs([])
    with pytest.raises(TableError):
        CoefficientTable.from_pairs([[10.0, 1.0], [5.0, 2.0]])
    with pytest.raises(TableError):
        lookup_coefficient(CoefficientTable.from_pairs([[0.0, 1.0]]), float("nan"))


def test_one_sided_wind_table_is_mirrored(cfg):
    pairs = mirror_wind_table([[0.0, 0.0], [90.0, -0.8], [180.0, 0.0]], odd=True)
    assert pairs[-1] == [270.0, 0.8]
    for deg in (20.0, 75.0, 130.0):
        a = math.radians(deg)
        assert lookup_coefficient(cfg.windage.c_y, -a) == pytest.approx(-lookup_coefficient(cfg.windage.c_y, a))
        assert lookup_coefficient(cfg.windage.c_x, -a) == pytest.approx(lookup_coefficient(cfg.windage.c_x, a))


def test_rudder_lift_is_odd(cfg):
    for deg in (5.0, 17.0, 33.0):
        a = math.radians(deg)
        assert lookup_coefficient(cfg.rudder.lift, -a) == pytest.approx(-lookup_coefficient(cfg.rudder.lift, a))
        assert lookup_coefficient(cfg.rudder.drag, -a) == pytest.approx(lookup_coefficient(cfg.rudder.drag, a))


def test_lift_must_vanish_at_zero():
    doc = _doc()
    doc["rudder"]["C_L"] = [[0, 0.1], [35, 1.2]]
    with pytest.raises(ConfigError) as f_err:
        config_from_dict(doc)
    assert f_err.value.field == "rudder.C_L"


def test_resistance_table_must_be_nondecreasing():
    doc = _doc()
    doc["hull"]["resistance"] = {"table": [[0, 0], [2, 20], [4, 10]]}
    with pytest.raises(ConfigError, match="nondecreasing"):
        config_from_dict(doc)
