"""Every model symbol lives in exactly one named field."""
import dataclasses

import pytest

from helmsim.config import (
    HullConfig, HydrodynamicDerivatives, MassProperties, PropellerConfig, RudderConfig, VesselConfig,
    WindageConfig,
)
from helmsim.dynamics import ControlInput, ShipState, SimulationRecord
from helmsim.environment import ApparentWind, EnvironmentSample
from helmsim.forces import ForceTriplet

DERIVATIVES = ("x_udot", "y_vdot", "y_rdot", "n_vdot", "n_rdot", "y_v", "y_r", "n_v", "n_r",
               "y_vv", "y_vr", "y_rr", "n_rr", "n_rrv", "n_vvr", "x_vr")

SYMBOLS = {
    "m": (MassProperties, "mass"),
    "I_z": (MassProperties, "yaw_inertia"),
    "x_G": (MassProperties, "x_g"),
    "A_R": (RudderConfig, "area"),
    "x_R": (RudderConfig, "x_r"),
    "a_H": (RudderConfig, "a_h"),
    "t_R": (RudderConfig, "t_r"),
    "C_L": (RudderConfig, "lift"),
    "C_D": (RudderConfig, "drag"),
    "gamma_R": (RudderConfig, "gamma_r"),
    "k_prop": (RudderConfig, "k_prop"),
    "D": (PropellerConfig, "diameter"),
    "t_p": (PropellerConfig, "t_p"),
    "w_p": (PropellerConfig, "w_p"),
    "k_T": (PropellerConfig, "k_t"),
    "k_Q": (PropellerConfig, "k_q"),
    "A_F": (WindageConfig, "frontal_area"),
    "A_L": (WindageConfig, "lateral_area"),
    "L_OA": (WindageConfig, "length_overall"),
    "C_X": (WindageConfig, "c_x"),
    "C_Y": (WindageConfig, "c_y"),
    "C_N": (WindageConfig, "c_n"),
    "rho_A": (WindageConfig, "air_density"),
    "B": (HullConfig, "breadth"),
    "L_BWL": (HullConfig, "l_bwl"),
    "L_pp": (HullConfig, "l_pp"),
    "R(u)": (HullConfig, "resistance"),
    "rho": (HullConfig, "water_density"),
    "g": (HullConfig, "gravity"),
    "x": (ShipState, "x"),
    "y": (ShipState, "y"),
    "psi": (ShipState, "psi"),
    "u": (ShipState, "u"),
    "v": (ShipState, "v"),
    "r": (ShipState, "r"),
    "delta": (ControlInput, "delta"),
    "n": (ControlInput, "n"),
    "u'": (SimulationRecord, "u_prime"),
    "v'": (SimulationRecord, "v_prime"),
    "wind": (EnvironmentSample, "true_wind"),
    "H_W1/3": (EnvironmentSample, "wave_height"),
    "wave direction": (EnvironmentSample, "wave_direction"),
    "s_sc": (EnvironmentSample, "current"),
    "U_wind": (ApparentWind, "speed"),
    "psi_wind": (ApparentWind, "angle"),
    "X": (ForceTriplet, "X"),
    "Y": (ForceTriplet, "Y"),
    "N": (ForceTriplet, "N"),
}
SYMBOLS.update({d: (HydrodynamicDerivatives, d) for d in DERIVATIVES})

# VesselConfig only groups the leaf types; its ``mass`` holds MassProperties
LEAF_TYPES = tuple(sorted({cls for cls, _ in SYMBOLS.values()}, key=lambda cls: cls.__name__))


def _field_names(cls):
    return {f.name for f in dataclasses.fields(cls)}


@pytest.mark.parametrize("symbol", sorted(SYMBOLS))
def test_symbol_has_a_field(symbol):
    cls, name = SYMBOLS[symbol]
    assert name in _field_names(cls), f"{symbol} -> {cls.__name__}.{name}"


@pytest.mark.parametrize("symbol", sorted(SYMBOLS))
def test_symbol_field_name_is_unambiguous(symbol):
    _, name = SYMBOLS[symbol]
    owners = [cls.__name__ for cls in LEAF_TYPES if name in _field_names(cls)]
    assert len(owners) == 1, f"{symbol}: {name} appears on {owners}"


def test_symbols_map_to_distinct_fields():
    assert len(set(SYMBOLS.values())) == len(SYMBOLS)


def test_vessel_level_symbols():
    assert "r_max" in _field_names(VesselConfig)
    assert {"mass", "derivatives", "rudder", "propeller", "windage", "hull"} <= _field_names(VesselConfig)


def test_derived_quantities_are_properties():
    assert isinstance(ShipState.__dict__["speed"], property)
    assert isinstance(ShipState.__dict__["drift_angle"], property)
    assert "speed" not in _field_names(ShipState)
