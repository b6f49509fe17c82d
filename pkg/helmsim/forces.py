# helmsim/forces.py
"""
External force models: rudder, propeller, wind, waves and calm-water
resistance. Every function here is pure in (config, state, inputs).

Body frame: X forward (surge), Y to starboard (sway), N positive turning the
bow to starboard. Forces in kN, moments in kN*m.
"""

import logging
import math
from dataclasses import dataclass

from .config import lookup_coefficient
from .environment import apparent_wind, relative_wave_heading
from .errors import ForceModelError

logger = logging.getLogger(__name__)

RUDDER_LIMIT = math.radians(45.0)
WAVE_GATE = math.radians(45.0)
U_EPS = 0.1    # m/s
N_EPS = 0.01   # rev/s


@dataclass(frozen=True)
class ForceTriplet:
    X: float = 0.0
    Y: float = 0.0
    N: float = 0.0

    def __add__(self, other):
        return ForceTriplet(self.X + other.X, self.Y + other.Y, self.N + other.N)

    def is_finite(self):
        return math.isfinite(self.X) and math.isfinite(self.Y) and math.isfinite(self.N)


ZERO = ForceTriplet()


@dataclass(frozen=True)
class ForceBreakdown:
    """Per-source triplets and their sum (the right-hand side of the equations of motion)."""

    rudder: ForceTriplet
    thrust: ForceTriplet
    wind: ForceTriplet
    wave: ForceTriplet
    resistance: ForceTriplet
    resistance_magnitude: float

    @property
    def total(self):
        return self.rudder + self.thrust + self.wind + self.wave + self.resistance

    def first_nonfinite(self):
        """Name of the first sub-model with a non-finite output, or None."""
        for name in ("rudder", "thrust", "wind", "wave", "resistance"):
            if not getattr(self, name).is_finite():
                return "propeller" if name == "thrust" else name
        return None


def rudder_inflow(cfg, state, delta):
    """
    Effective inflow angle and speed at the rudder.

    a_R = delta - gamma_R * beta_R with beta_R the geometric drift of the flow
    at the rudder post, arctan(-(v + x_R*r) / max(u, U_eps)).
    U_R = k_prop * u * (1 - w_p).

    Returns:
        tuple: (a_R rad, U_R m/s)
    """
    rud = cfg.rudder
    beta_r = math.atan((-state.v - rud.x_r * state.r) / max(state.u, U_EPS))
    a_r = delta - rud.gamma_r * beta_r
    u_r = rud.k_prop * state.u * (1.0 - cfg.propeller.w_p)
    return a_r, u_r


def rudder_forces(cfg, state, delta, n=None):
    """
    Rudder force triplet from the normal force F_N.

    Args:
        cfg (VesselConfig): Vessel parameters
        state (ShipState): Current state (through-water velocities)
        delta (float): Rudder angle, rad, positive = starboard rudder
        n (float): Propeller rate, rev/s; accepted for the slipstream hook, unused by
            the default inflow model

    Returns:
        ForceTriplet: (X_rud, Y_rud, N_rud)

    Raises:
        ForceModelError: If |delta| exceeds the 45 deg hard limit
    """
    if not abs(delta) <= RUDDER_LIMIT:
        raise ForceModelError(f"rudder angle {math.degrees(delta):.3f} deg exceeds the 45 deg limit")
    a_r, u_r = rudder_inflow(cfg, state, delta)
    if u_r == 0.0:
        return ZERO
    rud = cfg.rudder
    q = 0.5 * cfg.hull.water_density * rud.area * u_r * u_r / 1000.0
    lift = q * lookup_coefficient(rud.lift, a_r)
    drag = q * lookup_coefficient(rud.drag, a_r)
    f_n = lift * math.cos(a_r) + drag * math.sin(a_r)
    return ForceTriplet(
        X=-(1.0 - rud.t_r) * f_n * math.sin(delta),
        Y=-(1.0 + rud.a_h) * f_n * math.cos(delta),
        N=-(1.0 + rud.a_h) * rud.x_r * f_n * math.cos(delta),
    )


def advance_ratio(cfg, state, n):
    """J = U*cos(beta)*(1 - w_p)/(n*D); 0 below U_eps."""
    speed = state.speed
    if speed < U_EPS or n < N_EPS:
        return 0.0
    return speed * math.cos(state.drift_angle) * (1.0 - cfg.propeller.w_p) / (n * cfg.propeller.diameter)


def _check_rate(n):
    if not n >= 0.0:
        raise ForceModelError(f"propeller rate must be >= 0 rev/s, got {n}")


def propeller_thrust(cfg, state, n):
    """
    Propeller thrust along the surge axis, kN.

    Raises:
        ForceModelError: If n is negative (astern operation is not modelled)
    """
    _check_rate(n)
    if n < N_EPS:
        return 0.0
    prop = cfg.propeller
    k_t = prop.thrust_coefficient(advance_ratio(cfg, state, n))
    return (1.0 - prop.t_p) * cfg.hull.water_density * n * n * prop.diameter ** 4 * k_t / 1000.0


def propeller_torque(cfg, state, n):
    """Torque demanded by the propeller, kN*m."""
    _check_rate(n)
    if n < N_EPS:
        return 0.0
    prop = cfg.propeller
    k_q = prop.torque_coefficient(advance_ratio(cfg, state, n))
    return cfg.hull.water_density * n * n * prop.diameter ** 5 * k_q / 1000.0


def wind_forces(cfg, aw):
    """Wind loads from tabulated coefficients at the apparent wind angle."""
    if aw.speed == 0.0:
        return ZERO
    wnd = cfg.windage
    q = 0.5 * wnd.air_density * aw.speed * aw.speed / 1000.0
    return ForceTriplet(
        X=lookup_coefficient(wnd.c_x, aw.angle) * q * wnd.frontal_area,
        Y=lookup_coefficient(wnd.c_y, aw.angle) * q * wnd.lateral_area,
        N=lookup_coefficient(wnd.c_n, aw.angle) * q * wnd.lateral_area * wnd.length_overall,
    )


def wave_force(cfg, state, env):
    """
    Added resistance in waves, applied as negative surge force.

    Only seas within +/-45 deg of the bow contribute; outside the gate the
    result is exactly zero. Sway force and yaw moment are always zero.
    """
    height = env.wave_height
    if height == 0.0 or abs(relative_wave_heading(state, env)) > WAVE_GATE:
        return ZERO
    hull = cfg.hull
    magnitude = (hull.water_density * hull.gravity * height * height * hull.breadth
                 * math.sqrt(hull.breadth / hull.l_bwl) / 16.0 / 1000.0)
    return ForceTriplet(X=-magnitude)


def hull_resistance(cfg, u):
    """Calm-water resistance R(|u|) >= 0, kN; it opposes the surge velocity."""
    return cfg.hull.resistance.magnitude(u)


def resistance_force(cfg, u):
    r = hull_resistance(cfg, u)
    if u == 0.0:
        return ZERO
    return ForceTriplet(X=-math.copysign(r, u))


def force_breakdown(cfg, state, control, env):
    """Evaluate every force sub-model for one state, control and environment sample."""
    thrust = propeller_thrust(cfg, state, control.n)
    r_mag = hull_resistance(cfg, state.u)
    return ForceBreakdown(
        rudder=rudder_forces(cfg, state, control.delta, control.n),
        thrust=ForceTriplet(X=thrust),
        wind=wind_forces(cfg, apparent_wind(env.true_wind, state, env.current)),
        wave=wave_force(cfg, state, env),
        resistance=resistance_force(cfg, state.u),
        resistance_magnitude=r_mag,
    )


def total_external_forces(cfg, state, control, env):
    """(sum X, sum Y, sum N): rudder + propeller + wind + waves + resistance."""
    return force_breakdown(cfg, state, control, env).total
