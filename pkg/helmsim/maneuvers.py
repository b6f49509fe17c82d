# helmsim/maneuvers.py
"""Turning-circle presets and the standard turning-circle measures."""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import yaml
from scipy.spatial.distance import pdist

from .dynamics import ControlInput, ControlSeries, ShipState
from .environment import CALM, EnvironmentSeries
from .errors import ConfigError, HelmsimError
from .validation import require_positive, require_range

logger = logging.getLogger(__name__)

KNOT = 1852.0 / 3600.0
DEFAULT_PRESETS = Path(__file__).resolve().parent.parent / "config" / "presets.yml"


@dataclass(frozen=True)
class ManeuverPreset:
    name: str
    rpm: float
    rudder_deg: float
    speed_kn: float
    steps: int = 900
    dt: float = 1.0

    def __post_init__(self):
        require_range(f"{self.name}.rpm", self.rpm, 0.0, math.inf)
        require_range(f"{self.name}.rudder_deg", self.rudder_deg, -45.0, 45.0, high_inclusive=True)
        require_range(f"{self.name}.speed_kn", self.speed_kn, 0.0, math.inf)
        require_positive(f"{self.name}.dt", self.dt)
        if int(self.steps) != self.steps or self.steps < 1:
            raise ConfigError("must be an integer >= 1", field=f"{self.name}.steps")


def load_presets(path=None):
    """
    Read maneuver presets from YAML.

    Args:
        path (str|Path): Preset file; the shipped config/presets.yml when None

    Returns:
        dict: name -> ManeuverPreset

    Raises:
        ConfigError: If the file is missing, unparsable or a preset is invalid
    """
    path = Path(path) if path else DEFAULT_PRESETS
    try:
        with open(path, encoding="UTF-8") as f_presets:
            doc = yaml.safe_load(f_presets)
    except FileNotFoundError:
        raise ConfigError(f"preset file not found: {path}")
    except yaml.YAMLError as f_err:
        raise ConfigError(f"malformed preset file {path}: {f_err}")
    if not isinstance(doc, dict) or not isinstance(doc.get("presets"), dict):
        raise ConfigError("expected a 'presets' mapping", field=str(path))

    presets = {}
    for name, entry in doc["presets"].items():
        if not isinstance(entry, dict):
            raise ConfigError("preset must be a mapping", field=name)
        unknown = set(entry) - {"rpm", "rudder_deg", "speed_kn", "steps", "dt"}
        if unknown:
            raise ConfigError(f"unknown key(s) {sorted(unknown)}", field=name)
        try:
            presets[name] = ManeuverPreset(name=name, **entry)
        except TypeError:
            raise ConfigError("rpm, rudder_deg and speed_kn are required", field=name)
    logger.debug(f"Loaded {len(presets)} maneuver presets from {path}")
    return presets


def preset_scenario(preset):
    """
    Initial state, commands and calm environment for a preset.

    Returns:
        tuple: (ShipState, ControlSeries, EnvironmentSeries, steps, dt)
    """
    initial = ShipState(u=preset.speed_kn * KNOT)
    controls = ControlSeries.constant(ControlInput(delta=math.radians(preset.rudder_deg), n=preset.rpm / 60.0))
    return initial, controls, EnvironmentSeries.constant(CALM), int(preset.steps), float(preset.dt)


@dataclass(frozen=True)
class TurningMetrics:
    direction: str
    heading_swept: float             # rad
    advance: float                   # m
    transfer: float                  # m
    tactical_diameter: Optional[float]
    steady_diameter: float
    closure_gap: Optional[float]     # fraction of steady_diameter

    def to_dict(self):
        return {
            "direction": self.direction,
            "heading_swept_deg": math.degrees(self.heading_swept),
            "advance_m": self.advance,
            "transfer_m": self.transfer,
            "tactical_diameter_m": self.tactical_diameter,
            "steady_diameter_m": self.steady_diameter,
            "closure_gap": self.closure_gap,
        }


def _crossing(sweep, values, level):
    # linear interpolation at the first knot where sweep reaches level
    idx = int(np.argmax(sweep >= level))
    if idx == 0:
        return values[0]
    frac = (level - sweep[idx - 1]) / (sweep[idx] - sweep[idx - 1])
    return values[idx - 1] + frac * (values[idx] - values[idx - 1])


def turning_metrics(trajectory):
    """
    Advance, transfer, tactical and steady diameters of a turning trajectory.

    Distances are measured in the frame of the initial position and heading,
    lateral positive toward the side of the turn. The steady diameter is the
    largest chord over the second full revolution, or over the first when the
    run is shorter. The closure gap compares the positions where the heading
    has turned through one and two full revolutions.

    Raises:
        HelmsimError: If the heading never turns through 90 deg
    """
    raw = np.unwrap(trajectory.psi) - trajectory.psi[0]
    turn = 1.0 if raw[-1] >= 0.0 else -1.0
    sweep = raw * turn
    if sweep.max() < math.pi / 2.0:
        raise HelmsimError(f"heading swept only {math.degrees(sweep.max()):.1f} deg, need 90")

    psi0 = trajectory.psi[0]
    dx = trajectory.x - trajectory.x[0]
    dy = trajectory.y - trajectory.y[0]
    along = dx * math.cos(psi0) + dy * math.sin(psi0)
    lateral = turn * (-dx * math.sin(psi0) + dy * math.cos(psi0))

    two_pi = 2.0 * math.pi
    if sweep.max() >= 2.0 * two_pi:
        ring = (sweep >= two_pi) & (sweep <= 2.0 * two_pi)
    else:
        ring = (sweep >= max(sweep.max() - two_pi, 0.0))
    points = np.column_stack([trajectory.x[ring], trajectory.y[ring]])
    steady = float(pdist(points).max()) if len(points) > 1 else 0.0

    closure = None
    if sweep.max() >= 2.0 * two_pi and steady > 0.0:
        first = np.array([_crossing(sweep, trajectory.x, two_pi), _crossing(sweep, trajectory.y, two_pi)])
        second = np.array([_crossing(sweep, trajectory.x, 2.0 * two_pi),
                           _crossing(sweep, trajectory.y, 2.0 * two_pi)])
        closure = float(np.hypot(*(second - first)) / steady)

    return TurningMetrics(
        direction="starboard" if turn > 0 else "port",
        heading_swept=float(sweep.max()),
        advance=float(_crossing(sweep, along, math.pi / 2.0)),
        transfer=float(_crossing(sweep, lateral, math.pi / 2.0)),
        tactical_diameter=float(_crossing(sweep, lateral, math.pi)) if sweep.max() >= math.pi else None,
        steady_diameter=steady,
        closure_gap=closure,
    )
