# helmsim/config.py
"""
Vessel parameter set: mass properties, hydrodynamic derivatives and the
rudder, propeller, windage and hull sub-model parameters.

Units follow one ledger throughout the package: tonnes, tonne*m^2, m, m/s,
rad, rad/s, kN, kN*m and kg/m^3 (densities only). With mass in tonnes,
tonne*m/s^2 is a kN and the dynamics need no hidden conversion factors.

Coefficient tables are kept in degrees exactly as written in the JSON file so
that write_config()/load_config() round-trips bit-for-bit.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from .errors import ConfigError, TableError
from .validation import require_finite, require_positive, require_range

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CoefficientTable:
    """Piecewise-linear curve over an angle given in degrees.

    Periodic tables (wind) wrap over 360 deg; the others (rudder) are clamped
    at their end knots.
    """

    angles_deg: Tuple[float, ...]
    values: Tuple[float, ...]
    periodic: bool = False
    _xp: np.ndarray = field(init=False, repr=False, compare=False)
    _fp: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.angles_deg:
            raise TableError("coefficient table is empty")
        if len(self.angles_deg) != len(self.values):
            raise TableError("coefficient table has mismatched angle/value counts")
        xp = np.asarray(self.angles_deg, dtype=float)
        fp = np.asarray(self.values, dtype=float)
        if not (np.all(np.isfinite(xp)) and np.all(np.isfinite(fp))):
            raise TableError("coefficient table contains non-finite entries")
        if np.any(np.diff(xp) <= 0.0):
            raise TableError("coefficient table angles must be strictly increasing")
        if self.periodic and (xp[0] < 0.0 or xp[-1] >= 360.0):
            raise TableError("periodic table angles must lie in [0, 360)")
        object.__setattr__(self, "_xp", xp)
        object.__setattr__(self, "_fp", fp)

    @classmethod
    def from_pairs(cls, pairs, periodic=False):
        pairs = list(pairs)
        if not pairs:
            raise TableError("coefficient table is empty")
        try:
            angles = tuple(float(p[0]) for p in pairs)
            values = tuple(float(p[1]) for p in pairs)
        except (TypeError, IndexError, ValueError):
            raise TableError("coefficient table entries must be [angle_deg, value] pairs")
        return cls(angles, values, periodic)

    def to_pairs(self):
        return [[a, v] for a, v in zip(self.angles_deg, self.values)]


def lookup_coefficient(table, angle):
    """
    Interpolate a coefficient table at an angle.

    Args:
        table (CoefficientTable): Sampled curve
        angle (float): Query angle in radians

    Returns:
        float: Interpolated, dimensionless coefficient

    Raises:
        TableError: If the table is empty or the angle is not finite
    """
    if table is None or not table.angles_deg:
        raise TableError("coefficient table is empty")
    if not math.isfinite(angle):
        raise TableError(f"query angle must be finite, got {angle}")
    deg = math.degrees(angle)
    if table.periodic:
        if len(table.angles_deg) == 1:
            return float(table.values[0])
        return float(np.interp(deg % 360.0, table._xp, table._fp, period=360.0))
    return float(np.interp(deg, table._xp, table._fp))


def mirror_wind_table(pairs, odd):
    """
    Expand a one-sided wind table over [0, 180] deg to [0, 360).

    Args:
        pairs (list): [angle_deg, value] pairs with 0 <= angle <= 180
        odd (bool): True for C_Y and C_N (sign flips), False for C_X

    Returns:
        list: pairs covering [0, 360)
    """
    sign = -1.0 if odd else 1.0
    mirrored = [[360.0 - a, sign * v] for a, v in pairs if 0.0 < a < 180.0]
    return list(pairs) + sorted(mirrored)


def mirror_rudder_table(pairs, odd):
    """Expand a rudder table given for a >= 0 to negative inflow angles."""
    sign = -1.0 if odd else 1.0
    mirrored = [[-a, sign * v] for a, v in pairs if a > 0.0]
    return sorted(mirrored) + list(pairs)


@dataclass(frozen=True)
class MassProperties:
    mass: float
    yaw_inertia: float
    x_g: float = 0.0

    def __post_init__(self):
        require_positive("mass.m", self.mass)
        require_positive("mass.I_z", self.yaw_inertia)
        require_finite("mass.x_G", self.x_g)


@dataclass(frozen=True)
class HydrodynamicDerivatives:
    """Maneuvering coefficients of the 3-DoF equations, dimensional (tonne/kN)."""

    x_udot: float
    y_vdot: float
    y_rdot: float
    n_vdot: float
    n_rdot: float
    y_v: float
    y_r: float
    n_v: float
    n_r: float
    y_vv: float = 0.0
    y_vr: float = 0.0
    y_rr: float = 0.0
    n_rr: float = 0.0
    n_rrv: float = 0.0
    n_vvr: float = 0.0
    x_vr: float = 0.0

    def __post_init__(self):
        for name, json_key in _DERIVATIVE_KEYS.items():
            require_finite(f"derivatives.{json_key}", getattr(self, name))


@dataclass(frozen=True)
class RudderConfig:
    area: float
    x_r: float
    a_h: float
    t_r: float
    lift: CoefficientTable
    drag: CoefficientTable
    gamma_r: float = 0.4
    k_prop: float = 1.0

    def __post_init__(self):
        require_positive("rudder.A_R", self.area)
        require_finite("rudder.x_R", self.x_r)
        require_finite("rudder.a_H", self.a_h)
        require_range("rudder.t_R", self.t_r, 0.0, 1.0)
        require_finite("rudder.gamma_R", self.gamma_r)
        require_positive("rudder.k_prop", self.k_prop)
        if any(v < 0.0 for v in self.drag.values):
            raise ConfigError("drag coefficient must be >= 0 at every knot", field="rudder.C_D")
        if lookup_coefficient(self.lift, 0.0) != 0.0:
            raise ConfigError("lift coefficient must vanish at zero inflow angle", field="rudder.C_L")


@dataclass(frozen=True)
class PropellerConfig:
    diameter: float
    t_p: float
    w_p: float
    k_t: Tuple[float, ...]
    k_q: Tuple[float, ...]

    def __post_init__(self):
        require_positive("propeller.D", self.diameter)
        require_range("propeller.t_p", self.t_p, 0.0, 1.0)
        require_range("propeller.w_p", self.w_p, 0.0, 1.0)
        for key, coeffs in (("k_T", self.k_t), ("k_Q", self.k_q)):
            if not 1 <= len(coeffs) <= 4:
                raise ConfigError("expected 1 to 4 polynomial coefficients", field=f"propeller.{key}")
            for i, c in enumerate(coeffs):
                require_finite(f"propeller.{key}[{i}]", c)
        if self.k_t[0] <= 0.0:
            raise ConfigError("bollard-pull thrust coefficient c1 must be > 0", field="propeller.k_T[0]")

    def thrust_coefficient(self, j):
        return float(np.polynomial.polynomial.polyval(j, self.k_t))

    def torque_coefficient(self, j):
        return float(np.polynomial.polynomial.polyval(j, self.k_q))


@dataclass(frozen=True)
class WindageConfig:
    frontal_area: float
    lateral_area: float
    length_overall: float
    c_x: CoefficientTable
    c_y: CoefficientTable
    c_n: CoefficientTable
    air_density: float = 1.225

    def __post_init__(self):
        require_positive("windage.A_F", self.frontal_area)
        require_positive("windage.A_L", self.lateral_area)
        require_positive("windage.L_OA", self.length_overall)
        require_positive("windage.rho_A", self.air_density)
        for key, table in (("C_X", self.c_x), ("C_Y", self.c_y), ("C_N", self.c_n)):
            if not table.periodic:
                raise ConfigError("wind tables must be periodic", field=f"windage.{key}")
            if table.angles_deg[0] != 0.0 or (len(table.angles_deg) > 1 and table.angles_deg[-1] < 180.0):
                raise ConfigError("table must start at 0 deg and reach 180 deg", field=f"windage.{key}")


@dataclass(frozen=True)
class ResistanceCurve:
    """Calm-water resistance R(u) >= 0 in kN: r2*u*|u|, or a sampled table."""

    r2: Optional[float] = None
    speeds: Tuple[float, ...] = ()
    values: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.r2 is not None:
            if self.speeds:
                raise ConfigError("give either r2 or a table, not both", field="hull.resistance")
            require_range("hull.resistance.r2", self.r2, 0.0, math.inf)
            return
        if not self.speeds or len(self.speeds) != len(self.values):
            raise ConfigError("resistance table is empty or ragged", field="hull.resistance.table")
        speeds = np.asarray(self.speeds, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if speeds[0] != 0.0 or values[0] != 0.0:
            raise ConfigError("table must start at R(0) = 0", field="hull.resistance.table")
        if np.any(np.diff(speeds) <= 0.0):
            raise ConfigError("speeds must be strictly increasing", field="hull.resistance.table")
        if np.any(np.diff(values) < 0.0) or np.any(values < 0.0):
            raise ConfigError("R(u) must be >= 0 and nondecreasing", field="hull.resistance.table")

    def magnitude(self, speed):
        """R at |speed|, kN."""
        speed = abs(speed)
        if self.r2 is not None:
            return self.r2 * speed * speed
        return float(np.interp(speed, self.speeds, self.values))


@dataclass(frozen=True)
class HullConfig:
    breadth: float
    l_bwl: float
    l_pp: float
    resistance: ResistanceCurve
    water_density: float = 1025.0
    gravity: float = 9.81

    def __post_init__(self):
        require_positive("hull.B", self.breadth)
        require_positive("hull.L_BWL", self.l_bwl)
        require_positive("hull.L_pp", self.l_pp)
        require_positive("hull.rho", self.water_density)
        require_positive("hull.g", self.gravity)


@dataclass(frozen=True)
class VesselConfig:
    mass: MassProperties
    derivatives: HydrodynamicDerivatives
    rudder: RudderConfig
    propeller: PropellerConfig
    windage: WindageConfig
    hull: HullConfig
    r_max: float
    name: str = "vessel"

    def __post_init__(self):
        if abs(self.mass.x_g) >= self.hull.l_pp / 2.0:
            raise ConfigError("|x_G| must be < L_pp/2", field="mass.x_G")
        d = self.derivatives
        m = self.mass.mass
        if m - d.x_udot <= 0.0:
            raise ConfigError("surge inertia m - X_udot must be > 0", field="derivatives.X_udot")
        det = inertia_determinant(self)
        if not det > 0.0:
            raise ConfigError(f"sway/yaw inertia matrix determinant must be > 0, got {det}",
                              field="derivatives.inertia_determinant")
        require_positive("r_max", self.r_max)

    @property
    def rho_t(self):
        """Water density in tonne/m^3 (so that rho*m^3*(m/s)^2/m = kN)."""
        return self.hull.water_density / 1000.0


def inertia_matrix(cfg):
    """Sway/yaw inertia matrix [[m - Y_vdot, m*x_G - Y_rdot], [m*x_G - N_vdot, I_z - N_rdot]]."""
    m = cfg.mass.mass
    xg = cfg.mass.x_g
    d = cfg.derivatives
    return ((m - d.y_vdot, m * xg - d.y_rdot),
            (m * xg - d.n_vdot, cfg.mass.yaw_inertia - d.n_rdot))


def inertia_determinant(cfg):
    (a, b), (c, e) = inertia_matrix(cfg)
    return a * e - b * c


# Python field name -> JSON key
_DERIVATIVE_KEYS = {
    "x_udot": "X_udot", "y_vdot": "Y_vdot", "y_rdot": "Y_rdot",
    "n_vdot": "N_vdot", "n_rdot": "N_rdot",
    "y_v": "Y_v", "y_r": "Y_r", "n_v": "N_v", "n_r": "N_r",
    "y_vv": "Y_vv", "y_vr": "Y_vr", "y_rr": "Y_rr",
    "n_rr": "N_rr", "n_rrv": "N_rrv", "n_vvr": "N_vvr", "x_vr": "X_vr",
}

_REQUIRED_SECTIONS = ("mass", "derivatives", "rudder", "propeller", "windage", "hull", "r_max")


def _section(doc, key):
    value = doc.get(key)
    if not isinstance(value, dict):
        raise ConfigError("missing or not an object", field=key)
    return value


def _required(section, name, key):
    if key not in section:
        raise ConfigError("missing required field", field=f"{name}.{key}")
    return section[key]


def _table(section, name, key, periodic, mirror, odd):
    pairs = _required(section, name, key)
    if not isinstance(pairs, list) or not pairs:
        raise ConfigError("expected a non-empty list of [angle_deg, value] pairs", field=f"{name}.{key}")
    try:
        table = CoefficientTable.from_pairs(pairs, periodic=periodic)
        if periodic and table.angles_deg[-1] <= 180.0:
            table = CoefficientTable.from_pairs(mirror_wind_table(table.to_pairs(), odd), periodic=True)
        elif mirror and table.angles_deg[0] >= 0.0:
            table = CoefficientTable.from_pairs(mirror_rudder_table(table.to_pairs(), odd))
    except TableError as f_err:
        raise ConfigError(str(f_err), field=f"{name}.{key}")
    return table


def config_from_dict(doc):
    """
    Build and validate a VesselConfig from a parsed JSON document.

    Raises:
        ConfigError: naming the first violated invariant and its field
    """
    if not isinstance(doc, dict):
        raise ConfigError("top level must be a JSON object")
    for key in _REQUIRED_SECTIONS:
        if key not in doc:
            raise ConfigError("missing top-level key", field=key)

    mass_doc = _section(doc, "mass")
    mass = MassProperties(
        mass=_required(mass_doc, "mass", "m"),
        yaw_inertia=_required(mass_doc, "mass", "I_z"),
        x_g=mass_doc.get("x_G", 0.0),
    )

    deriv_doc = _section(doc, "derivatives")
    unknown = set(deriv_doc) - set(_DERIVATIVE_KEYS.values())
    if unknown:
        raise ConfigError(f"unknown derivative(s) {sorted(unknown)}", field="derivatives")
    derivatives = HydrodynamicDerivatives(**{
        name: deriv_doc[key] if key in deriv_doc else _default_derivative(name)
        for name, key in _DERIVATIVE_KEYS.items()
    })

    rud = _section(doc, "rudder")
    rudder = RudderConfig(
        area=_required(rud, "rudder", "A_R"),
        x_r=_required(rud, "rudder", "x_R"),
        a_h=_required(rud, "rudder", "a_H"),
        t_r=_required(rud, "rudder", "t_R"),
        lift=_table(rud, "rudder", "C_L", periodic=False, mirror=True, odd=True),
        drag=_table(rud, "rudder", "C_D", periodic=False, mirror=True, odd=False),
        gamma_r=rud.get("gamma_R", 0.4),
        k_prop=rud.get("k_prop", 1.0),
    )

    prop = _section(doc, "propeller")
    propeller = PropellerConfig(
        diameter=_required(prop, "propeller", "D"),
        t_p=_required(prop, "propeller", "t_p"),
        w_p=_required(prop, "propeller", "w_p"),
        k_t=tuple(float(c) for c in _required(prop, "propeller", "k_T")),
        k_q=tuple(float(c) for c in _required(prop, "propeller", "k_Q")),
    )

    wind = _section(doc, "windage")
    windage = WindageConfig(
        frontal_area=_required(wind, "windage", "A_F"),
        lateral_area=_required(wind, "windage", "A_L"),
        length_overall=_required(wind, "windage", "L_OA"),
        air_density=wind.get("rho_A", 1.225),
        c_x=_table(wind, "windage", "C_X", periodic=True, mirror=True, odd=False),
        c_y=_table(wind, "windage", "C_Y", periodic=True, mirror=True, odd=True),
        c_n=_table(wind, "windage", "C_N", periodic=True, mirror=True, odd=True),
    )

    hull_doc = _section(doc, "hull")
    res_doc = _required(hull_doc, "hull", "resistance")
    if not isinstance(res_doc, dict):
        raise ConfigError("expected an object with 'r2' or 'table'", field="hull.resistance")
    if "table" in res_doc:
        rows = res_doc["table"]
        resistance = ResistanceCurve(
            r2=res_doc.get("r2"),
            speeds=tuple(float(r[0]) for r in rows),
            values=tuple(float(r[1]) for r in rows),
        )
    else:
        resistance = ResistanceCurve(r2=_required(res_doc, "hull.resistance", "r2"))
    hull = HullConfig(
        breadth=_required(hull_doc, "hull", "B"),
        l_bwl=_required(hull_doc, "hull", "L_BWL"),
        l_pp=_required(hull_doc, "hull", "L_pp"),
        resistance=resistance,
        water_density=hull_doc.get("rho", 1025.0),
        gravity=hull_doc.get("g", 9.81),
    )

    return VesselConfig(
        mass=mass,
        derivatives=derivatives,
        rudder=rudder,
        propeller=propeller,
        windage=windage,
        hull=hull,
        r_max=doc["r_max"],
        name=str(doc.get("name", "vessel")),
    )


def _default_derivative(name):
    required = ("x_udot", "y_vdot", "y_rdot", "n_vdot", "n_rdot", "y_v", "y_r", "n_v", "n_r")
    if name in required:
        raise ConfigError("missing required field", field=f"derivatives.{_DERIVATIVE_KEYS[name]}")
    return 0.0


def config_to_dict(cfg):
    """Inverse of config_from_dict(); tables are written fully expanded."""
    res = cfg.hull.resistance
    if res.r2 is not None:
        resistance = {"r2": res.r2}
    else:
        resistance = {"table": [[u, r] for u, r in zip(res.speeds, res.values)]}
    return {
        "name": cfg.name,
        "mass": {"m": cfg.mass.mass, "I_z": cfg.mass.yaw_inertia, "x_G": cfg.mass.x_g},
        "derivatives": {key: getattr(cfg.derivatives, name) for name, key in _DERIVATIVE_KEYS.items()},
        "rudder": {
            "A_R": cfg.rudder.area, "x_R": cfg.rudder.x_r, "a_H": cfg.rudder.a_h,
            "t_R": cfg.rudder.t_r, "gamma_R": cfg.rudder.gamma_r, "k_prop": cfg.rudder.k_prop,
            "C_L": cfg.rudder.lift.to_pairs(), "C_D": cfg.rudder.drag.to_pairs(),
        },
        "propeller": {
            "D": cfg.propeller.diameter, "t_p": cfg.propeller.t_p, "w_p": cfg.propeller.w_p,
            "k_T": list(cfg.propeller.k_t), "k_Q": list(cfg.propeller.k_q),
        },
        "windage": {
            "A_F": cfg.windage.frontal_area, "A_L": cfg.windage.lateral_area,
            "L_OA": cfg.windage.length_overall, "rho_A": cfg.windage.air_density,
            "C_X": cfg.windage.c_x.to_pairs(), "C_Y": cfg.windage.c_y.to_pairs(),
            "C_N": cfg.windage.c_n.to_pairs(),
        },
        "hull": {
            "B": cfg.hull.breadth, "L_BWL": cfg.hull.l_bwl, "L_pp": cfg.hull.l_pp,
            "rho": cfg.hull.water_density, "g": cfg.hull.gravity, "resistance": resistance,
        },
        "r_max": cfg.r_max,
    }


def load_config(path):
    """
    Load and validate a vessel configuration JSON file.

    Args:
        path (str|Path): Config file path

    Returns:
        VesselConfig: Fully validated, immutable configuration

    Raises:
        ConfigError: If the file is missing, malformed or violates an invariant
    """
    path = Path(path)
    try:
        with open(path, encoding="UTF-8") as f_config:
            doc = json.load(f_config)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as f_err:
        raise ConfigError(f"malformed config file {path}: {f_err}")
    cfg = config_from_dict(doc)
    logger.debug(f"Loaded vessel config '{cfg.name}' from {path}")
    return cfg


def write_config(cfg, path):
    """Write a VesselConfig as JSON that load_config() reads back identically."""
    with open(path, "w", encoding="UTF-8") as f_config:
        json.dump(config_to_dict(cfg), f_config, indent=2)
        f_config.write("\n")
