"""Actuator model of the coaxial thrust-vane vehicle.

Six actuators: two stacked counter-rotating rotors (thrusts ``f1`` upper,
``f2`` lower) and four vanes in the rotor wash, mounted at 45 degrees to
the body x/y axes. Each vane's lift is proportional to its deflection
angle and to the thrust of the rotor(s) washing over it: the upper pair
sees only the upper rotor's flow, the lower pair sits below both rotors
and sees the combined flow.

``forward_wrench`` maps a command to the body-frame force/torque it
produces; ``mix`` is its closed-form inverse (the control allocation).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import AllocationError

_SQRT2_OVER_2 = math.sqrt(2.0) / 2.0


@dataclass(frozen=True)
class VehicleParams:
    """Physical constants and actuator limits.

    Attributes
    ----------
    mass : float
        Vehicle mass [kg].
    inertia : np.ndarray
        Body-frame inertia tensor (3, 3) [kg m^2], symmetric positive
        definite.
    arm_upper, arm_lower : float
        Distances from the upper / lower vane centers to the center of
        mass [m].
    cs_gain : float
        Vane lift effectiveness [1/rad]: lift = cs_gain * washing thrust
        * deflection angle.
    torque_per_thrust : float
        Rotor drag-torque-to-thrust ratio [m]; yaw torque is
        torque_per_thrust * (f1 - f2).
    angle_max : float
        Symmetric vane deflection limit [rad].
    rotor_thrust_max : float
        Per-rotor thrust ceiling [N].
    rotor_thrust_min : float
        Upper-rotor thrust floor for allocation [N]; below it the vane
        angle denominators collapse.
    rho : float
        Air density [kg/m^3].
    gravity : float
        Gravitational acceleration magnitude [m/s^2].
    """

    mass: float = 0.952
    inertia: np.ndarray = field(
        default_factory=lambda: np.diag([8.0e-3, 8.0e-3, 4.0e-3])
    )
    arm_upper: float = 0.10
    arm_lower: float = 0.10
    cs_gain: float = 1.0
    torque_per_thrust: float = 0.015
    angle_max: float = math.radians(25.0)
    rotor_thrust_max: float = 12.0
    rotor_thrust_min: float = 0.5
    rho: float = 1.225
    gravity: float = 9.81

    def __post_init__(self):
        object.__setattr__(self, "inertia", np.asarray(self.inertia, dtype=float))
        for name in (
            "mass", "arm_upper", "arm_lower", "cs_gain", "torque_per_thrust",
            "angle_max", "rotor_thrust_max", "rotor_thrust_min", "rho", "gravity",
        ):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value}")
        j = self.inertia
        if j.shape != (3, 3):
            raise ValueError(f"inertia must be (3, 3), got {j.shape}")
        if not np.allclose(j, j.T, atol=1e-12):
            raise ValueError("inertia must be symmetric")
        if np.any(np.linalg.eigvalsh(j) <= 0.0):
            raise ValueError("inertia must be positive definite")

    @cached_property
    def inertia_inv(self) -> np.ndarray:
        return np.linalg.inv(self.inertia)

    @property
    def weight(self) -> float:
        """Hover thrust m*g [N]."""
        return self.mass * self.gravity

    @property
    def gravity_vec(self) -> np.ndarray:
        """Inertial gravity vector (0, 0, -g) [m/s^2]."""
        return np.array([0.0, 0.0, -self.gravity])


@dataclass(frozen=True)
class ActuatorCommand:
    """One set of the six actuator outputs.

    Rotor thrusts in newtons, vane deflections in radians. ``theta`` is
    the vane pair on one 45-degree diagonal, ``delta`` the orthogonal
    pair; suffix 1 = upper unit, 2 = lower unit.
    """

    f1: float
    f2: float
    theta1: float
    theta2: float
    delta1: float
    delta2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.f1, self.f2, self.theta1, self.theta2,
                         self.delta1, self.delta2])

    def within_limits(self, p: VehicleParams, tol: float = 1e-9) -> bool:
        """True if thrusts and angles respect the configured limits."""
        a = p.angle_max + tol
        return (
            -tol <= self.f1 <= p.rotor_thrust_max + tol
            and -tol <= self.f2 <= p.rotor_thrust_max + tol
            and abs(self.theta1) <= a
            and abs(self.theta2) <= a
            and abs(self.delta1) <= a
            and abs(self.delta2) <= a
        )


@dataclass(frozen=True)
class ControlSurfaceLifts:
    """Lift force [N] of each vane for a given command."""

    upper_theta: float
    lower_theta: float
    upper_delta: float
    lower_delta: float


@dataclass(frozen=True)
class BodyWrench:
    """Body-frame force [N] and torque [N m]."""

    force: np.ndarray
    torque: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "force", np.asarray(self.force, dtype=float))
        object.__setattr__(self, "torque", np.asarray(self.torque, dtype=float))

    @classmethod
    def hover(cls, p: VehicleParams) -> "BodyWrench":
        return cls(np.array([0.0, 0.0, p.weight]), np.zeros(3))


@dataclass(frozen=True)
class SaturationFlags:
    """Which actuator channels were clipped."""

    f1: bool = False
    f2: bool = False
    theta1: bool = False
    theta2: bool = False
    delta1: bool = False
    delta2: bool = False

    @property
    def any(self) -> bool:
        return self.f1 or self.f2 or self.theta1 or self.theta2 or self.delta1 or self.delta2


def control_surface_lifts(u: ActuatorCommand, p: VehicleParams) -> ControlSurfaceLifts:
    """Per-vane lift: gain times washing thrust times deflection angle."""
    upper_wash = u.f1
    lower_wash = u.f1 + u.f2
    return ControlSurfaceLifts(
        upper_theta=p.cs_gain * upper_wash * u.theta1,
        lower_theta=p.cs_gain * lower_wash * u.theta2,
        upper_delta=p.cs_gain * upper_wash * u.delta1,
        lower_delta=p.cs_gain * lower_wash * u.delta2,
    )


def forward_wrench(u: ActuatorCommand, p: VehicleParams) -> BodyWrench:
    """Body wrench produced by a command.

    The 45-degree vane mounting splits each vane's lift evenly (sqrt(2)/2)
    between the body x and y axes; the two diagonals differ in the sign of
    their x contribution. Vertical force is the collective rotor thrust;
    yaw torque is the differential rotor drag torque.
    """
    lifts = control_surface_lifts(u, p)
    a, b = lifts.upper_theta, lifts.lower_theta
    c, d = lifts.upper_delta, lifts.lower_delta
    l1, l2 = p.arm_upper, p.arm_lower
    force = np.array([
        _SQRT2_OVER_2 * (-a - b + c + d),
        _SQRT2_OVER_2 * (a + b + c + d),
        u.f1 + u.f2,
    ])
    torque = np.array([
        _SQRT2_OVER_2 * (-(a + c) * l1 + (b + d) * l2),
        _SQRT2_OVER_2 * ((-a + c) * l1 - (-b + d) * l2),
        p.torque_per_thrust * (u.f1 - u.f2),
    ])
    return BodyWrench(force, torque)


def mix(w: BodyWrench, p: VehicleParams) -> ActuatorCommand:
    """Closed-form inverse of ``forward_wrench``: wrench to actuators.

    Rotor thrusts come from the collective/differential split of
    (T_z, tau_z); vane angles follow by inverting the lift combinations,
    dividing by the thrust washing each vane. Raises AllocationError when
    T_z is non-positive or the upper rotor would fall below its mixing
    floor (the angle denominators vanish with rotor thrust). The returned
    command may exceed angle limits; callers saturate.
    """
    tx, ty, tz = float(w.force[0]), float(w.force[1]), float(w.force[2])
    tau_x, tau_y, tau_z = float(w.torque[0]), float(w.torque[1]), float(w.torque[2])
    if tz <= 0.0:
        raise AllocationError(f"collective thrust must be positive, got T_z = {tz:.4g} N")
    upper_twice = tz + tau_z / p.torque_per_thrust  # = 2 f1
    f1 = 0.5 * upper_twice
    f2 = 0.5 * (tz - tau_z / p.torque_per_thrust)
    if f1 < p.rotor_thrust_min:
        raise AllocationError(
            f"upper rotor thrust {f1:.4g} N below mixing floor "
            f"{p.rotor_thrust_min:.4g} N; vane angles unbounded"
        )
    sq2 = math.sqrt(2.0)
    l1, l2 = p.arm_upper, p.arm_lower
    arm_sum = p.cs_gain * (l1 + l2)
    theta1 = sq2 * (-tx * l2 + ty * l2 - tau_x - tau_y) / (arm_sum * upper_twice)
    theta2 = sq2 * (-tx * l1 + ty * l1 + tau_x + tau_y) / (2.0 * arm_sum * tz)
    delta1 = sq2 * (tx * l2 + ty * l2 - tau_x + tau_y) / (arm_sum * upper_twice)
    delta2 = sq2 * (tx * l1 + ty * l1 + tau_x - tau_y) / (2.0 * arm_sum * tz)
    return ActuatorCommand(f1, f2, theta1, theta2, delta1, delta2)


def saturate(u: ActuatorCommand, p: VehicleParams) -> tuple[ActuatorCommand, SaturationFlags]:
    """Clamp thrusts to [0, max] and angles to +-angle_max, with flags."""
    def clamp(x, lo, hi):
        return min(max(x, lo), hi)

    a = p.angle_max
    clamped = ActuatorCommand(
        f1=clamp(u.f1, 0.0, p.rotor_thrust_max),
        f2=clamp(u.f2, 0.0, p.rotor_thrust_max),
        theta1=clamp(u.theta1, -a, a),
        theta2=clamp(u.theta2, -a, a),
        delta1=clamp(u.delta1, -a, a),
        delta2=clamp(u.delta2, -a, a),
    )
    flags = SaturationFlags(
        f1=clamped.f1 != u.f1,
        f2=clamped.f2 != u.f2,
        theta1=clamped.theta1 != u.theta1,
        theta2=clamped.theta2 != u.theta2,
        delta1=clamped.delta1 != u.delta1,
        delta2=clamped.delta2 != u.delta2,
    )
    return clamped, flags


def allocate(w: BodyWrench, p: VehicleParams) -> tuple[ActuatorCommand, SaturationFlags]:
    """Mix with graceful degradation under vane-angle saturation.

    Rotor channels (T_z, tau_z) keep full authority. If the requested
    angles exceed limits, the lateral force request (T_x, T_y) is scaled
    back just enough to fit, preserving the torque request: losing
    attitude authority destabilizes the vehicle, losing lateral force only
    degrades tracking. A final clamp catches whatever torque demand alone
    still exceeds the limits.
    """
    u = mix(w, p)
    if u.within_limits(p):
        return u, SaturationFlags()

    torque_only = mix(BodyWrench(np.array([0.0, 0.0, float(w.force[2])]), w.torque), p)
    # angles are affine in the lateral force scale gamma: angle = base + gamma * lat
    gamma = 1.0
    for full, base in (
        (u.theta1, torque_only.theta1),
        (u.theta2, torque_only.theta2),
        (u.delta1, torque_only.delta1),
        (u.delta2, torque_only.delta2),
    ):
        lat = full - base
        if abs(base) >= p.angle_max:
            gamma = 0.0
            break
        if lat != 0.0:
            limit = (p.angle_max - math.copysign(1.0, lat) * base) / abs(lat)
            gamma = min(gamma, max(limit, 0.0))
    if gamma < 1.0:
        scaled = BodyWrench(
            np.array([gamma * w.force[0], gamma * w.force[1], w.force[2]]),
            w.torque,
        )
        u = mix(scaled, p)
    return saturate(u, p)


def sample_feasible_wrenches(
    p: VehicleParams, n: int, seed: int = 0
) -> list[BodyWrench]:
    """Random wrenches whose mixed commands respect all actuator limits.

    Collective thrust spans [2 N, 2 * rotor max]; yaw torque stays within
    half the differential authority at that thrust; lateral forces and
    roll/pitch torques are drawn at scales that usually land inside the
    vane envelope, with rejection for the stragglers.
    """
    rng = np.random.default_rng(seed)
    out: list[BodyWrench] = []
    attempts = 0
    while len(out) < n:
        attempts += 1
        if attempts > 100 * max(n, 1):
            raise AllocationError(
                "could not sample feasible wrenches; actuator envelope too tight"
            )
        tz = rng.uniform(2.0, 2.0 * p.rotor_thrust_max)
        tau_z = rng.uniform(-0.5, 0.5) * p.torque_per_thrust * tz
        lat = 0.25 * p.cs_gain * tz
        tor = 0.02 * p.cs_gain * tz
        w = BodyWrench(
            np.array([rng.uniform(-lat, lat), rng.uniform(-lat, lat), tz]),
            np.array([rng.uniform(-tor, tor), rng.uniform(-tor, tor), tau_z]),
        )
        try:
            u = mix(w, p)
        except AllocationError:
            continue
        if u.within_limits(p):
            out.append(w)
    return out
