"""Hierarchical dual-mode position and attitude control.

Outer loop: cascaded PD on position/velocity producing a desired
acceleration. In fully-actuated mode that acceleration maps to a full
three-axis body-force request and the attitude reference is free for the
operator; in underactuated mode only the collective-thrust projection is
commanded and the attitude reference is derived from the acceleration
demand (differential flatness). Inner loop: proportional attitude error
to a body-rate setpoint, then a PID on body rate to a torque request,
which the allocator turns into actuator commands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .actuation import (
    ActuatorCommand,
    BodyWrench,
    SaturationFlags,
    VehicleParams,
    allocate,
)
from .dynamics import RigidBodyState, StepCommand
from .errors import AllocationError, ReferenceSingularityError
from .so3 import vee

# First-order low-pass cutoff for the body-rate-error derivative [Hz]:
# raw finite differences amplify integration noise.
DERIV_FILTER_CUTOFF_HZ = 50.0


class ControlMode(Enum):
    FULLY_ACTUATED = "FA"
    UNDERACTUATED = "UA"


def _gain_matrix(value, name: str) -> np.ndarray:
    """Accept a scalar, a 3-vector of diagonal entries, or a full matrix."""
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = np.eye(3) * float(arr)
    elif arr.shape == (3,):
        arr = np.diag(arr)
    if arr.shape != (3, 3):
        raise ValueError(f"{name} must be a scalar, 3-vector, or 3x3 matrix")
    if not np.allclose(arr, arr.T, atol=1e-12) or np.any(np.linalg.eigvalsh(arr) <= 0.0):
        raise ValueError(f"{name} must be symmetric positive definite")
    return arr


@dataclass(frozen=True)
class ControllerGains:
    """Gain matrices for the cascaded loops.

    All gains are positive definite (diagonal in the stock configuration);
    ``integral_limit`` clamps the body-rate integral componentwise [N m],
    keeping the torque integral bounded.
    """

    kp: np.ndarray = 2.5
    kv: np.ndarray = 3.5
    kr: np.ndarray = field(default_factory=lambda: np.diag([14.0, 14.0, 8.0]))
    kp_omega: np.ndarray = field(default_factory=lambda: np.diag([0.5, 0.5, 0.25]))
    ki_omega: np.ndarray = field(default_factory=lambda: np.diag([0.05, 0.05, 0.02]))
    kd_omega: np.ndarray = field(default_factory=lambda: np.diag([4e-3, 4e-3, 2e-3]))
    integral_limit: np.ndarray = field(default_factory=lambda: np.array([0.1, 0.1, 0.05]))

    def __post_init__(self):
        for name in ("kp", "kv", "kr", "kp_omega", "ki_omega", "kd_omega"):
            object.__setattr__(self, name, _gain_matrix(getattr(self, name), name))
        limit = np.asarray(self.integral_limit, dtype=float)
        if limit.shape != (3,) or np.any(limit <= 0.0):
            raise ValueError("integral_limit must be a positive 3-vector")
        object.__setattr__(self, "integral_limit", limit)


@dataclass(frozen=True)
class TrajectorySample:
    """Reference state at one instant.

    ``R_ref`` is the operator-chosen attitude, required in fully-actuated
    mode and ignored in underactuated mode (where the attitude follows
    from the acceleration demand and ``yaw_ref``).
    """

    pos: np.ndarray
    vel: np.ndarray = field(default_factory=lambda: np.zeros(3))
    acc: np.ndarray = field(default_factory=lambda: np.zeros(3))
    yaw: float = 0.0
    R_ref: np.ndarray | None = None

    def __post_init__(self):
        for name in ("pos", "vel", "acc"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (3,) or not np.all(np.isfinite(arr)):
                raise ValueError(f"reference {name} must be a finite 3-vector")
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class AttitudeLoopState:
    """Integrator and derivative-filter memory of the body-rate PID."""

    integral: np.ndarray = field(default_factory=lambda: np.zeros(3))
    prev_rate_error: np.ndarray | None = None
    deriv_filtered: np.ndarray = field(default_factory=lambda: np.zeros(3))

    @classmethod
    def zero(cls) -> "AttitudeLoopState":
        return cls()


def desired_acceleration(
    ref: TrajectorySample, s: RigidBodyState, g: ControllerGains
) -> np.ndarray:
    """Cascaded PD acceleration demand.

    acc_ref + Kv ((vel_ref + Kp (pos_ref - pos)) - vel): the position loop
    commands a velocity correction which the velocity loop turns into an
    acceleration.
    """
    vel_cmd = ref.vel + g.kp @ (ref.pos - s.pos)
    return ref.acc + g.kv @ (vel_cmd - s.vel)


def desired_thrust_fa(a_d: np.ndarray, r: np.ndarray, p: VehicleParams) -> np.ndarray:
    """Fully-actuated three-axis body-force request [N].

    Pulls the gravity-compensated acceleration demand into the body frame;
    no attitude change is needed to realize lateral force.
    """
    return r.T @ (p.mass * a_d - p.mass * p.gravity_vec)


def desired_collective_thrust_ua(
    a_d: np.ndarray, r: np.ndarray, p: VehicleParams
) -> float:
    """Underactuated collective-thrust request [N].

    Projects the gravity-compensated acceleration demand onto the current
    body z-axis; lateral components are unreachable and drop out.
    """
    return float((p.mass * a_d - p.mass * p.gravity_vec) @ r[:, 2])


def flatness_reference_attitude(
    a_d: np.ndarray, yaw: float, p: VehicleParams
) -> np.ndarray:
    """Attitude whose body z-axis points along the required thrust.

    The thrust direction is the gravity-compensated acceleration demand;
    the heading vector (cos yaw, sin yaw, 0) pins the rotation about it.
    Raises ReferenceSingularityError near free fall (thrust direction
    undefined) or when the thrust axis is parallel to the heading vector.
    """
    thrust_dir = a_d - p.gravity_vec
    norm = float(np.linalg.norm(thrust_dir))
    if norm <= 0.1 * p.gravity:
        raise ReferenceSingularityError(
            f"acceleration demand {a_d} is within 10% of free fall; "
            "thrust direction undefined"
        )
    z_b = thrust_dir / norm
    x_c = np.array([math.cos(yaw), math.sin(yaw), 0.0])
    y_raw = np.cross(z_b, x_c)
    y_norm = float(np.linalg.norm(y_raw))
    if y_norm < 1e-6:
        raise ReferenceSingularityError(
            "thrust axis is parallel to the heading vector; reference attitude "
            "is ambiguous"
        )
    y_b = y_raw / y_norm
    x_b = np.cross(y_b, z_b)
    return np.column_stack([x_b, y_b, z_b])


def attitude_error(r_ref: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Antisymmetric rotation error vee(R_ref^T R - R^T R_ref) / 2.

    Zero iff R_ref^T R is symmetric; for small errors it approaches the
    axis-angle vector pointing from ``r_ref`` toward ``r``.
    """
    m = r_ref.T @ r
    return 0.5 * vee(m - m.T)


def desired_bodyrate(r_e: np.ndarray, g: ControllerGains) -> np.ndarray:
    """Proportional body-rate setpoint from the attitude error."""
    return g.kr @ r_e


def desired_torque(
    omega_d: np.ndarray,
    omega: np.ndarray,
    loop: AttitudeLoopState,
    g: ControllerGains,
    dt: float,
) -> tuple[np.ndarray, AttitudeLoopState]:
    """Body-rate PID: torque request plus updated loop state.

    The integral uses clamped trapezoidal accumulation (anti-windup);
    the derivative is a low-pass-filtered finite difference of the rate
    error. The first call after a reset contributes no derivative kick.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    rate_error = omega_d - omega
    prev = loop.prev_rate_error if loop.prev_rate_error is not None else rate_error
    integral = loop.integral + 0.5 * (rate_error + prev) * dt
    integral = np.clip(integral, -g.integral_limit, g.integral_limit)
    raw_deriv = (rate_error - prev) / dt
    alpha = dt / (dt + 1.0 / (2.0 * math.pi * DERIV_FILTER_CUTOFF_HZ))
    deriv = loop.deriv_filtered + alpha * (raw_deriv - loop.deriv_filtered)
    torque = g.kp_omega @ rate_error + g.ki_omega @ integral + g.kd_omega @ deriv
    new_loop = AttitudeLoopState(integral, rate_error, deriv)
    return torque, new_loop


@dataclass(frozen=True)
class ControlStepResult:
    command: ActuatorCommand
    loop: AttitudeLoopState
    wrench_request: BodyWrench
    attitude_ref: np.ndarray
    saturation: SaturationFlags


def _control_step_full(
    ref: TrajectorySample,
    s: RigidBodyState,
    mode: ControlMode,
    loop: AttitudeLoopState,
    g: ControllerGains,
    p: VehicleParams,
    dt: float,
) -> ControlStepResult:
    a_d = desired_acceleration(ref, s, g)
    if mode is ControlMode.FULLY_ACTUATED:
        if ref.R_ref is None:
            raise ValueError("fully-actuated mode requires a reference attitude")
        r_ref = ref.R_ref
        force = desired_thrust_fa(a_d, s.R, p)
    else:
        r_ref = flatness_reference_attitude(a_d, ref.yaw, p)
        force = np.array([0.0, 0.0, desired_collective_thrust_ua(a_d, s.R, p)])
    # error measured from the vehicle attitude toward the reference, so a
    # positive gain turns the vehicle the stabilizing way
    r_e = attitude_error(s.R, r_ref)
    omega_d = desired_bodyrate(r_e, g)
    torque, new_loop = desired_torque(omega_d, s.omega, loop, g, dt)
    wrench = BodyWrench(force, torque)
    command, flags = allocate(wrench, p)
    return ControlStepResult(command, new_loop, wrench, r_ref, flags)


def control_step(
    ref: TrajectorySample,
    s: RigidBodyState,
    mode: ControlMode,
    loop: AttitudeLoopState,
    g: ControllerGains,
    p: VehicleParams,
    dt: float,
) -> tuple[ActuatorCommand, AttitudeLoopState]:
    """One pass of the full control pipeline, returning the saturated
    actuator command and the advanced attitude-loop state."""
    result = _control_step_full(ref, s, mode, loop, g, p, dt)
    return result.command, result.loop


class DualModeController:
    """Stateful controller for closed-loop runs.

    Follows a mode schedule, resets the body-rate PID memory at every mode
    switch (fresh integral and derivative history avoid torque kicks from
    the changed operating point), holds the previous valid command for at
    most one period if allocation fails, and counts saturation events.
    """

    def __init__(
        self,
        reference: Callable[[float], TrajectorySample],
        gains: ControllerGains,
        params: VehicleParams,
        period: float,
        mode_schedule: list[tuple[float, ControlMode]] | None = None,
    ):
        if mode_schedule is None:
            mode_schedule = [(0.0, ControlMode.FULLY_ACTUATED)]
        if not mode_schedule:
            raise ValueError("mode schedule must contain at least one entry")
        times = [t for t, _ in mode_schedule]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("mode schedule times must be strictly increasing")
        self.reference = reference
        self.gains = gains
        self.params = params
        self.period = period
        self.mode_schedule = mode_schedule
        self.saturation_events = 0
        self._loop = AttitudeLoopState.zero()
        self._active_mode: ControlMode | None = None
        self._last_command: ActuatorCommand | None = None
        self._last_attitude_ref = np.eye(3)
        self._fallback_used = False

    def mode_at(self, t: float) -> ControlMode:
        mode = self.mode_schedule[0][1]
        for t_start, m in self.mode_schedule:
            if t >= t_start:
                mode = m
            else:
                break
        return mode

    def __call__(self, t: float, state: RigidBodyState) -> StepCommand:
        mode = self.mode_at(t)
        if self._active_mode is not None and mode is not self._active_mode:
            self._loop = AttitudeLoopState.zero()
        self._active_mode = mode
        ref = self.reference(t)
        try:
            result = _control_step_full(
                ref, state, mode, self._loop, self.gains, self.params, self.period
            )
        except AllocationError as e:
            if self._last_command is None or self._fallback_used:
                raise AllocationError(f"allocation failed twice in a row: {e}") from e
            self._fallback_used = True
            return StepCommand(
                self._last_command, ref.pos, self._last_attitude_ref, mode.value
            )
        self._fallback_used = False
        self._loop = result.loop
        self._last_command = result.command
        self._last_attitude_ref = result.attitude_ref
        if result.saturation.any:
            self.saturation_events += 1
        return StepCommand(result.command, ref.pos, result.attitude_ref, mode.value)


def hover_reference(point: np.ndarray) -> Callable[[float], TrajectorySample]:
    """Constant position hold with a level attitude reference."""
    point = np.asarray(point, dtype=float)
    sample = TrajectorySample(pos=point, R_ref=np.eye(3))
    return lambda t: sample
