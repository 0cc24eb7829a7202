"""Newton-Euler rigid-body simulation driven by body-frame wrenches.

Translation integrates in the inertial frame, rotation on SO(3). One
fixed-step RK4 advances position, velocity, body rate and an incremental
rotation vector together; the attitude update composes the exponential of
that increment onto the current rotation, so orthonormality is preserved
to roundoff between the periodic re-projections.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Protocol

import numpy as np

from .actuation import ActuatorCommand, BodyWrench, VehicleParams, forward_wrench
from .errors import AllocationError, CoaxvaneError, DivergenceError
from .so3 import check_rotation, exp_so3, hat, project_to_so3
from .telemetry import TelemetryLog, TelemetryRecorder


@dataclass
class RigidBodyState:
    """Plant state: inertial position/velocity, attitude, body rate."""

    pos: np.ndarray
    vel: np.ndarray
    R: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        self.pos = np.asarray(self.pos, dtype=float)
        self.vel = np.asarray(self.vel, dtype=float)
        self.R = np.asarray(self.R, dtype=float)
        self.omega = np.asarray(self.omega, dtype=float)

    @classmethod
    def at_rest(cls, pos=(0.0, 0.0, 0.0)) -> "RigidBodyState":
        return cls(np.asarray(pos, dtype=float), np.zeros(3), np.eye(3), np.zeros(3))

    def validate(self) -> "RigidBodyState":
        check_rotation(self.R, what="state attitude")
        if not (np.all(np.isfinite(self.pos)) and np.all(np.isfinite(self.vel))
                and np.all(np.isfinite(self.omega))):
            raise ValueError("state has non-finite components")
        return self

    def copy(self) -> "RigidBodyState":
        return RigidBodyState(self.pos.copy(), self.vel.copy(), self.R.copy(),
                              self.omega.copy())


@dataclass(frozen=True)
class StateDerivative:
    """Time derivative of a RigidBodyState."""

    dpos: np.ndarray
    dvel: np.ndarray
    dR: np.ndarray
    domega: np.ndarray


@dataclass(frozen=True)
class SimConfig:
    """Fixed-step integration settings.

    ``controller_period`` must be an integer multiple of ``dt``; actuator
    commands are zero-order-held between controller invocations. The
    attitude is re-projected onto SO(3) every ``renorm_interval`` physics
    steps.
    """

    dt: float = 1.0e-3
    duration: float = 10.0
    controller_period: float = 2.0e-3
    renorm_interval: int = 100

    def __post_init__(self):
        if not (0.0 < self.dt <= self.controller_period):
            raise ValueError(
                f"need 0 < dt <= controller_period, got dt={self.dt}, "
                f"controller_period={self.controller_period}"
            )
        if self.duration <= 0.0:
            raise ValueError(f"duration must be positive, got {self.duration}")
        if self.renorm_interval < 1:
            raise ValueError(f"renorm_interval must be >= 1, got {self.renorm_interval}")
        ratio = self.controller_period / self.dt
        if abs(ratio - round(ratio)) > 1e-9:
            raise ValueError(
                f"controller_period ({self.controller_period}) must be an integer "
                f"multiple of dt ({self.dt})"
            )

    @property
    def steps_per_control(self) -> int:
        return round(self.controller_period / self.dt)


@dataclass(frozen=True)
class StepCommand:
    """Controller output for one control period, as logged in telemetry."""

    command: ActuatorCommand
    pos_ref: np.ndarray = field(default_factory=lambda: np.zeros(3))
    attitude_ref: np.ndarray = field(default_factory=lambda: np.eye(3))
    mode: str = "FA"


class Controller(Protocol):
    def __call__(self, t: float, state: RigidBodyState) -> StepCommand: ...


def state_derivative(s: RigidBodyState, w: BodyWrench, p: VehicleParams) -> StateDerivative:
    """Newton-Euler equations of motion.

    dpos = v; dvel = g + R f / m; dR = R hat(omega);
    domega = J^-1 (tau - omega x J omega).
    """
    dvel = p.gravity_vec + (s.R @ w.force) / p.mass
    domega = p.inertia_inv @ (w.torque - np.cross(s.omega, p.inertia @ s.omega))
    return StateDerivative(s.vel.copy(), dvel, s.R @ hat(s.omega), domega)


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # unrolled; np.cross dominates the step cost otherwise
    return np.array([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])


def _rk4(pos, vel, r, omega, force, torque, p: VehicleParams, dt: float):
    """One RK4 step of (pos, vel, omega, rotation increment).

    The attitude enters through an incremental rotation vector theta with
    R(t) = R0 exp(hat(theta)); its exact kinematics
    dtheta = omega + theta x omega / 2 + theta x (theta x omega) / 12 + ...
    is truncated at the double-commutator term, which keeps the scheme
    globally fourth order. Returns the new (pos, vel, R, omega).
    """
    m = p.mass
    g = p.gravity_vec
    j = p.inertia
    j_inv = p.inertia_inv

    def derivs(v, om, theta, first):
        r_stage = r if first else r @ exp_so3(theta)
        dv = g + (r_stage @ force) / m
        dom = j_inv @ (torque - _cross(om, j @ om))
        if first:
            dth = om
        else:
            tw = _cross(theta, om)
            dth = om + 0.5 * tw + (1.0 / 12.0) * _cross(theta, tw)
        return dv, dom, dth

    half = 0.5 * dt
    k1v, k1o, k1t = derivs(vel, omega, None, True)
    k2v, k2o, k2t = derivs(vel + half * k1v, omega + half * k1o, half * k1t, False)
    k3v, k3o, k3t = derivs(vel + half * k2v, omega + half * k2o, half * k2t, False)
    k4v, k4o, k4t = derivs(vel + dt * k3v, omega + dt * k3o, dt * k3t, False)

    sixth = dt / 6.0
    # dpos stages are just the velocity stages
    new_pos = pos + sixth * (vel + 2.0 * (vel + half * k1v) + 2.0 * (vel + half * k2v)
                             + (vel + dt * k3v))
    new_vel = vel + sixth * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    new_omega = omega + sixth * (k1o + 2.0 * k2o + 2.0 * k3o + k4o)
    theta_total = sixth * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
    new_r = r @ exp_so3(theta_total)
    return new_pos, new_vel, new_r, new_omega


def step(s: RigidBodyState, w: BodyWrench, p: VehicleParams, dt: float) -> RigidBodyState:
    """Advance the state one RK4 step under a constant body wrench."""
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    pos, vel, r, omega = _rk4(s.pos, s.vel, s.R, s.omega, w.force, w.torque, p, dt)
    checksum = float(pos @ pos + vel @ vel + omega @ omega) + float(r[0] @ r[0])
    if not math.isfinite(checksum):
        raise DivergenceError("integrator produced a non-finite state")
    return RigidBodyState(pos, vel, r, omega)


def integrate_constant_wrench(
    s: RigidBodyState,
    w: BodyWrench,
    p: VehicleParams,
    dt: float,
    n_steps: int,
    renorm_interval: int = 0,
) -> RigidBodyState:
    """Open-loop integration helper: hold one wrench for ``n_steps``."""
    state = s.copy()
    for i in range(1, n_steps + 1):
        state = step(state, w, p, dt)
        if renorm_interval and i % renorm_interval == 0:
            state.R = project_to_so3(state.R)
    return state


def simulate(
    initial: RigidBodyState,
    controller: Callable[[float, RigidBodyState], StepCommand],
    cfg: SimConfig,
    p: VehicleParams,
) -> TelemetryLog:
    """Run the closed loop and record telemetry at the controller rate.

    The controller is invoked every ``controller_period``; its command is
    held for the intervening physics steps. The log gets one row per
    invocation including the final time, so a run of duration D has
    D / controller_period + 1 rows. Controller and integrator failures
    are re-raised with the simulation time prepended.
    """
    initial.validate()
    substeps = cfg.steps_per_control
    n_ctrl = round(cfg.duration / cfg.controller_period)
    recorder = TelemetryRecorder()
    state = initial.copy()
    steps_done = 0
    for k in range(n_ctrl + 1):
        t = k * cfg.controller_period
        try:
            out = controller(t, state)
        except CoaxvaneError as e:
            raise _stamp(e, t) from e
        if not out.command.within_limits(p, tol=1e-6):
            raise _stamp(
                AllocationError(
                    f"controller returned a command outside actuator limits: "
                    f"{out.command}"
                ),
                t,
            )
        wrench = forward_wrench(out.command, p)
        recorder.append(t, state, out, wrench)
        if k == n_ctrl:
            break
        for _ in range(substeps):
            try:
                state = step(state, wrench, p, cfg.dt)
            except DivergenceError as e:
                raise _stamp(e, steps_done * cfg.dt) from e
            steps_done += 1
            if steps_done % cfg.renorm_interval == 0:
                state.R = project_to_so3(state.R)
    return recorder.finalize()


def _stamp(e: CoaxvaneError, t: float) -> CoaxvaneError:
    """Prefix an error with the simulation time and record it as a field."""
    stamped = type(e)(f"t = {t:.6g} s: {e}")
    stamped.sim_time = t
    return stamped
