# helmsim/dynamics.py
"""
3-DoF equations of motion, sea-current coupling, kinematics and fixed-step
RK4 integration.

Earth frame: x north, y east, heading psi clockwise from north. Body frame:
u forward, v to starboard, r positive turning to starboard. Controls and
environment are held constant over each step (zero-order hold).
"""

import bisect
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
import pandas as pd

from .environment import CALM, EnvironmentSeries, earth_to_body, sample_at, wrap_angle
from .errors import HelmsimError, SeriesError, SimulationError, SingularInertiaError, VoyageDataError
from .file import write_rows_csv
from .forces import U_EPS, force_breakdown

logger = logging.getLogger(__name__)

DET_EPS = 1e-9

STATE_COLUMNS = ("t", "x", "y", "psi", "u", "v", "r")
TRAJECTORY_COLUMNS = STATE_COLUMNS + (
    "u_prime", "v_prime", "delta", "n_rps",
    "X_rud", "Y_rud", "N_rud", "X_thr", "X_wind", "Y_wind", "N_wind", "X_wave", "R_hull",
)


@dataclass(frozen=True)
class ShipState:
    x: float = 0.0
    y: float = 0.0
    psi: float = 0.0
    u: float = 0.0
    v: float = 0.0
    r: float = 0.0

    @property
    def speed(self):
        """Total speed through water U."""
        return math.hypot(self.u, self.v)

    @property
    def drift_angle(self):
        """beta = arctan(-v/U); zero below U_eps."""
        speed = self.speed
        return 0.0 if speed < U_EPS else math.atan(-self.v / speed)

    def is_finite(self):
        return all(math.isfinite(c) for c in (self.x, self.y, self.psi, self.u, self.v, self.r))


@dataclass(frozen=True)
class StateDerivative:
    dx: float
    dy: float
    dpsi: float
    du: float
    dv: float
    dr: float

    def is_finite(self):
        return all(math.isfinite(c) for c in (self.dx, self.dy, self.dpsi, self.du, self.dv, self.dr))


@dataclass(frozen=True)
class ControlInput:
    delta: float = 0.0   # rad, positive = starboard rudder
    n: float = 0.0       # rev/s


@dataclass(frozen=True)
class ControlSeries:
    """Piecewise-constant rudder and propeller commands."""

    times: Tuple[float, ...]
    controls: Tuple[ControlInput, ...]

    def __post_init__(self):
        if not self.times or len(self.times) != len(self.controls):
            raise SeriesError("control series is empty or ragged")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise SeriesError("control series times must be strictly increasing")

    @classmethod
    def constant(cls, control):
        return cls((0.0,), (control,))

    def sample_at(self, t):
        idx = bisect.bisect_right(self.times, t) - 1
        return self.controls[max(idx, 0)]

    def mirrored(self):
        return ControlSeries(self.times, tuple(ControlInput(-c.delta, c.n) for c in self.controls))


@dataclass(frozen=True)
class SimulationRecord:
    t: float
    state: ShipState
    u_prime: float
    v_prime: float
    control: ControlInput
    forces: object  # ForceBreakdown

    def row(self):
        f = self.forces
        s = self.state
        return {
            "t": self.t, "x": s.x, "y": s.y, "psi": s.psi, "u": s.u, "v": s.v, "r": s.r,
            "u_prime": self.u_prime, "v_prime": self.v_prime,
            "delta": self.control.delta, "n_rps": self.control.n,
            "X_rud": f.rudder.X, "Y_rud": f.rudder.Y, "N_rud": f.rudder.N,
            "X_thr": f.thrust.X, "X_wind": f.wind.X, "Y_wind": f.wind.Y, "N_wind": f.wind.N,
            "X_wave": f.wave.X, "R_hull": f.resistance_magnitude,
        }


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-indexed knots; state columns always present, the rest optional."""

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    psi: np.ndarray
    u: np.ndarray
    v: np.ndarray
    r: np.ndarray
    extras: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.t)
        for name in STATE_COLUMNS[1:]:
            if len(getattr(self, name)) != n:
                raise HelmsimError(f"trajectory column '{name}' has {len(getattr(self, name))} knots, expected {n}")
        for name, values in self.extras.items():
            if len(values) != n:
                raise HelmsimError(f"trajectory column '{name}' has {len(values)} knots, expected {n}")

    def __len__(self):
        return len(self.t)

    @classmethod
    def from_columns(cls, columns):
        arrays = {k: np.asarray(v, dtype=float) for k, v in columns.items()}
        missing = [c for c in STATE_COLUMNS if c not in arrays]
        if missing:
            raise HelmsimError(f"trajectory is missing column(s) {missing}")
        extras = {k: v for k, v in arrays.items() if k not in STATE_COLUMNS}
        return cls(*(arrays[c] for c in STATE_COLUMNS), extras=extras)

    @classmethod
    def from_records(cls, records):
        rows = [rec.row() for rec in records]
        return cls.from_columns({c: [row[c] for row in rows] for c in TRAJECTORY_COLUMNS})

    def column(self, name):
        if name in STATE_COLUMNS:
            return getattr(self, name)
        return self.extras[name]

    def columns(self):
        names = list(STATE_COLUMNS) + [c for c in TRAJECTORY_COLUMNS if c in self.extras]
        names += sorted(c for c in self.extras if c not in TRAJECTORY_COLUMNS)
        return names

    def state_at(self, i):
        return ShipState(float(self.x[i]), float(self.y[i]), float(self.psi[i]),
                         float(self.u[i]), float(self.v[i]), float(self.r[i]))

    def slice(self, start, stop):
        return Trajectory.from_columns({c: self.column(c)[start:stop] for c in self.columns()})


def ground_velocities(state, current):
    """
    Speeds over ground in the body frame: [u', v'] = [u, v] + R(psi)^-1 * s_sc.

    Args:
        state (ShipState): Through-water velocities and heading
        current (tuple): Earth-frame (north, east) sea current, m/s

    Returns:
        tuple: (u', v') m/s; r' = r is implied
    """
    cu, cv = earth_to_body(current, state.psi)
    return state.u + cu, state.v + cv


def kinematics(state, u_prime, v_prime):
    """Earth-frame rates (dx, dy, dpsi) from ground velocities."""
    c, s = math.cos(state.psi), math.sin(state.psi)
    return u_prime * c - v_prime * s, u_prime * s + v_prime * c, state.r


def accelerations(cfg, state, forces):
    """
    Solve the equations of motion for (du, dv, dr).

    Surge is explicit. Sway and yaw are coupled through the inertia matrix
    M = [[m - Y_vdot, m*x_G - Y_rdot], [m*x_G - N_vdot, I_z - N_rdot]].
    Velocity-dependent terms are moved to the right-hand side with the signs
    they carry on the left-hand side of the displayed equations; U is floored
    at U_eps in the damping terms.

    Args:
        cfg (VesselConfig): Vessel parameters
        state (ShipState): Through-water velocities
        forces (ForceTriplet): (sum X, sum Y, sum N)

    Returns:
        tuple: (du m/s^2, dv m/s^2, dr rad/s^2)

    Raises:
        SingularInertiaError: If det(M) <= DET_EPS
    """
    d = cfg.derivatives
    m = cfg.mass.mass
    xg = cfg.mass.x_g
    u, v, r = state.u, state.v, state.r
    speed = max(math.hypot(u, v), U_EPS)

    du = (forces.X - (d.y_vdot - d.x_vr - m) * v * r - (d.y_rdot - m * xg) * r * r) / (m - d.x_udot)

    damping_y = (-d.y_v * speed * v + (m * u - d.y_r * speed) * r
                 - d.y_vv * v * abs(v) - d.y_vr * v * abs(r) - d.y_rr * r * abs(r))
    damping_n = (-d.n_v * speed * v + (m * xg * u - d.n_r * speed) * r
                 - d.n_rr * r * abs(r) - d.n_rrv * r * r * v / speed - d.n_vvr * v * v * r / speed)

    inertia = np.array([[m - d.y_vdot, m * xg - d.y_rdot],
                        [m * xg - d.n_vdot, cfg.mass.yaw_inertia - d.n_rdot]])
    det = inertia[0, 0] * inertia[1, 1] - inertia[0, 1] * inertia[1, 0]
    if not det > DET_EPS:
        raise SingularInertiaError(f"sway/yaw inertia matrix is singular (det={det})")
    dv, dr = np.linalg.solve(inertia, np.array([forces.Y - damping_y, forces.N - damping_n]))
    return du, float(dv), float(dr)


def state_derivative(cfg, state, control, env):
    """
    Full derivative for one state; also returns the force breakdown used.

    Raises:
        SimulationError: Naming the sub-model that produced a non-finite value
    """
    breakdown = force_breakdown(cfg, state, control, env)
    bad = breakdown.first_nonfinite()
    if bad:
        raise SimulationError("non-finite force", submodel=bad)
    u_prime, v_prime = ground_velocities(state, env.current)
    dx, dy, dpsi = kinematics(state, u_prime, v_prime)
    du, dv, dr = accelerations(cfg, state, breakdown.total)
    deriv = StateDerivative(dx, dy, dpsi, du, dv, dr)
    if not deriv.is_finite():
        raise SimulationError("non-finite state derivative", submodel="dynamics")
    return deriv, breakdown


def _advance(state, k, h):
    return ShipState(state.x + h * k.dx, state.y + h * k.dy, state.psi + h * k.dpsi,
                     state.u + h * k.du, state.v + h * k.dv, state.r + h * k.dr)


def _rk4(cfg, state, control, env, dt):
    k1, breakdown = state_derivative(cfg, state, control, env)
    k2, _ = state_derivative(cfg, _advance(state, k1, dt / 2.0), control, env)
    k3, _ = state_derivative(cfg, _advance(state, k2, dt / 2.0), control, env)
    k4, _ = state_derivative(cfg, _advance(state, k3, dt), control, env)

    def combine(a, b, c, e):
        return dt * (a + 2.0 * b + 2.0 * c + e) / 6.0

    new = ShipState(
        x=state.x + combine(k1.dx, k2.dx, k3.dx, k4.dx),
        y=state.y + combine(k1.dy, k2.dy, k3.dy, k4.dy),
        psi=wrap_angle(state.psi + combine(k1.dpsi, k2.dpsi, k3.dpsi, k4.dpsi)),
        u=state.u + combine(k1.du, k2.du, k3.du, k4.du),
        v=state.v + combine(k1.dv, k2.dv, k3.dv, k4.dv),
        r=state.r + combine(k1.dr, k2.dr, k3.dr, k4.dr),
    )
    if not new.is_finite():
        raise SimulationError("non-finite state after step", submodel="dynamics")
    return new, breakdown


def step(cfg, state, control, env, dt):
    """
    One classical RK4 step with control and environment held constant.

    Args:
        cfg (VesselConfig): Vessel parameters
        state (ShipState): State at the start of the step
        control (ControlInput): Rudder angle and propeller rate
        env (EnvironmentSample): Wind, waves, current
        dt (float): Step size, s

    Returns:
        ShipState: State after dt, heading wrapped to [-pi, pi)
    """
    if not dt > 0.0:
        raise HelmsimError(f"time step must be > 0, got {dt}")
    return _rk4(cfg, state, control, env, dt)[0]


def _record(t, state, control, env, breakdown):
    u_prime, v_prime = ground_velocities(state, env.current)
    return SimulationRecord(t, state, u_prime, v_prime, control, breakdown)


def simulate(cfg, initial, controls, env=None, dt=1.0, n_steps=120):
    """
    Integrate n_steps fixed RK4 steps from an initial state.

    Args:
        cfg (VesselConfig): Vessel parameters
        initial (ShipState): State at t = 0
        controls (ControlSeries|ControlInput): Commands, sampled with zero-order hold
        env (EnvironmentSeries): Conditions with times relative to t = 0; calm if None
        dt (float): Step size, s
        n_steps (int): Number of steps (>= 1)

    Returns:
        Trajectory: n_steps + 1 knots with ground velocities, controls and force breakdown

    Raises:
        SimulationError: With the index of the failing step
    """
    if not dt > 0.0:
        raise HelmsimError(f"time step must be > 0, got {dt}")
    if int(n_steps) != n_steps or n_steps < 1:
        raise HelmsimError(f"n_steps must be an integer >= 1, got {n_steps}")
    if isinstance(controls, ControlInput):
        controls = ControlSeries.constant(controls)
    if env is None:
        env = EnvironmentSeries.constant(CALM)

    records = []
    state = initial
    for k in range(int(n_steps) + 1):
        t = k * dt
        control = controls.sample_at(t)
        sample = sample_at(env, t)
        try:
            if k < n_steps:
                new_state, breakdown = _rk4(cfg, state, control, sample, dt)
            else:
                _, breakdown = state_derivative(cfg, state, control, sample)
        except SimulationError as f_err:
            raise SimulationError(f_err.message, submodel=f_err.submodel, step=k)
        records.append(_record(t, state, control, sample, breakdown))
        if k < n_steps:
            state = new_state
    logger.debug(f"Simulated {n_steps} steps of {dt} s")
    return Trajectory.from_records(records)


def write_trajectory(trajectory, path):
    """Write the trajectory CSV: fixed column order, 9 significant digits."""
    columns = [c for c in TRAJECTORY_COLUMNS if c in STATE_COLUMNS or c in trajectory.extras]
    rows = [{c: float(trajectory.column(c)[i]) for c in columns} for i in range(len(trajectory))]
    write_rows_csv(rows, path, columns)


def read_trajectory(path):
    """
    Read a trajectory CSV (at least t, x, y, psi, u, v, r).

    Raises:
        VoyageDataError: If the file is missing or lacks state columns
    """
    try:
        frame = pd.read_csv(path)
    except FileNotFoundError:
        raise VoyageDataError(f"trajectory file not found: {path}")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as f_err:
        raise VoyageDataError(f"malformed trajectory file {path}: {f_err}")
    missing = [c for c in STATE_COLUMNS if c not in frame.columns]
    if missing:
        raise VoyageDataError(f"missing column(s) {missing} in {path}", column=missing[0])
    return Trajectory.from_columns({c: frame[c].to_numpy(dtype=float) for c in frame.columns})


def load_controls(path):
    """
    Read a control schedule CSV with columns t_s, rudder_deg, rpm.

    Returns:
        ControlSeries: rudder in rad, propeller rate in rev/s
    """
    try:
        frame = pd.read_csv(path, skipinitialspace=True)
    except FileNotFoundError:
        raise VoyageDataError(f"controls file not found: {path}")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as f_err:
        raise VoyageDataError(f"malformed controls file {path}: {f_err}")
    for column in ("t_s", "rudder_deg", "rpm"):
        if column not in frame.columns:
            raise VoyageDataError(f"missing column in {path}", column=column)
    controls = tuple(
        ControlInput(delta=math.radians(float(row.rudder_deg)), n=float(row.rpm) / 60.0)
        for row in frame.itertuples(index=False)
    )
    return ControlSeries(tuple(float(t) for t in frame["t_s"]), controls)
