"""Closed-form reference trajectories for the tracking scenarios.

The planar figure-eight is a Gerono lemniscate driven by a phase variable,
so speed scaling, mode-dependent retiming and analytic derivatives all
stay exact. The attitude profile is a rate-limited sinusoid about a fixed
axis with optional dwells at the peaks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .control import ControlMode, TrajectorySample
from .errors import ConfigError
from .so3 import exp_so3


def _lemniscate_speed_shape(a: float, b: float) -> float:
    """max over phase of |d p / d phi| for p = (a sin phi, b sin 2phi)."""
    return math.sqrt(a * a + 4.0 * b * b)


def _lemniscate_accel_shape(a: float, b: float) -> float:
    """max over phase of |d^2 p / d phi^2|.

    |p''|^2 = a^2 u + 64 b^2 u (1 - u) with u = sin^2 phi; the maximizer
    is the vertex of that parabola clipped to u <= 1.
    """
    if b == 0.0:
        return a
    u = min(1.0, (a * a + 64.0 * b * b) / (128.0 * b * b))
    return math.sqrt(a * a * u + 64.0 * b * b * u * (1.0 - u))


def _lemniscate_sample(
    a: float, b: float, altitude: float, phi: float, dphi: float, ddphi: float
) -> TrajectorySample:
    sin1, cos1 = math.sin(phi), math.cos(phi)
    sin2, cos2 = math.sin(2.0 * phi), math.cos(2.0 * phi)
    tangent = np.array([a * cos1, 2.0 * b * cos2, 0.0])
    curvature = np.array([-a * sin1, -4.0 * b * sin2, 0.0])
    return TrajectorySample(
        pos=np.array([a * sin1, b * sin2, altitude]),
        vel=dphi * tangent,
        acc=ddphi * tangent + dphi * dphi * curvature,
        yaw=0.0,
        R_ref=np.eye(3),
    )


@dataclass(frozen=True)
class Figure8Spec:
    """Single-rate figure-eight: half-width, half-height, motion limits.

    The phase rate is the largest constant value that keeps the sampled
    speed below ``v_max`` and the acceleration below ``a_max`` everywhere
    on the loop.
    """

    amplitude_x: float = 1.8
    amplitude_y: float = 0.9
    altitude: float = 1.2
    v_max: float = 1.5
    a_max: float = 0.7
    laps: int = 1

    def __post_init__(self):
        if self.amplitude_x < 0.0 or self.amplitude_y < 0.0:
            raise ConfigError("figure-eight amplitudes must be non-negative")
        if self.amplitude_x == 0.0 and self.amplitude_y == 0.0:
            raise ConfigError("figure-eight needs a non-zero amplitude")
        if self.v_max <= 0.0 or self.a_max <= 0.0:
            raise ConfigError(
                f"motion limits force a zero phase rate "
                f"(v_max={self.v_max}, a_max={self.a_max})"
            )
        if self.laps < 1:
            raise ConfigError(f"laps must be >= 1, got {self.laps}")

    @cached_property
    def phase_rate(self) -> float:
        """Largest phase rate [rad/s] honouring both motion limits."""
        by_speed = self.v_max / _lemniscate_speed_shape(self.amplitude_x, self.amplitude_y)
        by_accel = math.sqrt(
            self.a_max / _lemniscate_accel_shape(self.amplitude_x, self.amplitude_y)
        )
        return min(by_speed, by_accel)

    @property
    def lap_time(self) -> float:
        return 2.0 * math.pi / self.phase_rate

    @property
    def duration(self) -> float:
        return self.laps * self.lap_time


def figure8_sample(spec: Figure8Spec, t: float) -> TrajectorySample:
    """Reference sample of the constant-rate figure-eight at time ``t``."""
    if t < 0.0:
        raise ValueError(f"t must be non-negative, got {t}")
    w = spec.phase_rate
    return _lemniscate_sample(
        spec.amplitude_x, spec.amplitude_y, spec.altitude, w * t, w, 0.0
    )


@dataclass(frozen=True)
class ModeLegSpec:
    """Motion limits and lap count for one leg of the bi-modal run."""

    v_max: float
    a_max: float
    laps: int = 1


@dataclass(frozen=True)
class BimodalFigure8Spec:
    """Figure-eight flown fully-actuated first, then underactuated.

    Both legs share the same lemniscate; each leg gets the fastest phase
    rate its own limits allow. The switch happens at a lap boundary (where
    the reference acceleration vanishes) and the phase rate blends from
    the first rate to the second over ``blend_time`` with a smoothstep, so
    position and velocity references stay continuous through the switch.
    """

    amplitude_x: float = 1.8
    amplitude_y: float = 0.9
    altitude: float = 1.2
    fully_actuated: ModeLegSpec = field(
        default_factory=lambda: ModeLegSpec(v_max=1.5, a_max=0.7, laps=2)
    )
    underactuated: ModeLegSpec = field(
        default_factory=lambda: ModeLegSpec(v_max=3.0, a_max=3.0, laps=4)
    )
    blend_time: float = 2.0

    def __post_init__(self):
        if self.blend_time < 0.0:
            raise ConfigError(f"blend_time must be >= 0, got {self.blend_time}")
        if self._blend_phase() > 2.0 * math.pi * self.underactuated.laps:
            raise ConfigError("blend_time longer than the underactuated leg")

    def _leg(self, leg: ModeLegSpec) -> Figure8Spec:
        return Figure8Spec(
            amplitude_x=self.amplitude_x,
            amplitude_y=self.amplitude_y,
            altitude=self.altitude,
            v_max=leg.v_max,
            a_max=leg.a_max,
            laps=leg.laps,
        )

    @cached_property
    def rate_fa(self) -> float:
        return self._leg(self.fully_actuated).phase_rate

    @cached_property
    def rate_ua(self) -> float:
        return self._leg(self.underactuated).phase_rate

    @property
    def switch_time(self) -> float:
        return self.fully_actuated.laps * 2.0 * math.pi / self.rate_fa

    def _blend_phase(self) -> float:
        # phase accumulated while the rate ramps rate_fa -> rate_ua
        return 0.5 * (self.rate_fa + self.rate_ua) * self.blend_time

    @property
    def duration(self) -> float:
        total_phase = 2.0 * math.pi * (self.fully_actuated.laps + self.underactuated.laps)
        phase_at_blend_end = (
            2.0 * math.pi * self.fully_actuated.laps + self._blend_phase()
        )
        return self.switch_time + self.blend_time + (
            total_phase - phase_at_blend_end
        ) / self.rate_ua

    @property
    def mode_schedule(self) -> list[tuple[float, ControlMode]]:
        return [
            (0.0, ControlMode.FULLY_ACTUATED),
            (self.switch_time, ControlMode.UNDERACTUATED),
        ]

    def phase(self, t: float) -> tuple[float, float, float]:
        """(phi, dphi, ddphi) of the retimed lemniscate at time ``t``."""
        w1, w2 = self.rate_fa, self.rate_ua
        ts, tb = self.switch_time, self.blend_time
        if t < ts:
            return w1 * t, w1, 0.0
        phi_s = 2.0 * math.pi * self.fully_actuated.laps
        if tb > 0.0 and t < ts + tb:
            u = (t - ts) / tb
            sigma = u * u * (3.0 - 2.0 * u)
            dsigma = 6.0 * u * (1.0 - u) / tb
            dw = w2 - w1
            phi = phi_s + w1 * (t - ts) + dw * tb * (u**3 - 0.5 * u**4)
            return phi, w1 + dw * sigma, dw * dsigma
        phi_b = phi_s + w1 * tb + 0.5 * (w2 - w1) * tb
        return phi_b + w2 * (t - ts - tb), w2, 0.0

    def sample(self, t: float) -> TrajectorySample:
        if t < 0.0:
            raise ValueError(f"t must be non-negative, got {t}")
        phi, dphi, ddphi = self.phase(t)
        return _lemniscate_sample(
            self.amplitude_x, self.amplitude_y, self.altitude, phi, dphi, ddphi
        )


@dataclass(frozen=True)
class AttitudeProfileSpec:
    """Sinusoidal attitude command about one axis while holding position.

    First half of the run: the sinusoid pauses for ``hold_duration`` at
    every peak (step-and-hold response); second half: uninterrupted
    sinusoid. The commanded angle is continuous throughout and never
    exceeds ``max_angle``.
    """

    rate: float = 1.5
    max_angle: float = math.radians(20.0)
    hold_duration: float = math.pi / 2.0
    total_duration: float = 30.0
    axis: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0]))

    def __post_init__(self):
        if self.rate <= 0.0:
            raise ConfigError(f"rate must be positive, got {self.rate}")
        if not (0.0 < self.max_angle < math.pi):
            raise ConfigError(f"max_angle must be in (0, pi), got {self.max_angle}")
        if self.hold_duration < 0.0:
            raise ConfigError(f"hold_duration must be >= 0, got {self.hold_duration}")
        if self.total_duration <= 0.0:
            raise ConfigError(f"total_duration must be positive, got {self.total_duration}")
        axis = np.asarray(self.axis, dtype=float)
        norm = float(np.linalg.norm(axis))
        if axis.shape != (3,) or norm < 1e-9:
            raise ConfigError("axis must be a non-zero 3-vector")
        object.__setattr__(self, "axis", axis / norm)

    def _dwell_phase(self, t: float) -> float:
        """Sine phase with the clock paused for hold_duration at each peak."""
        quarter = (0.5 * math.pi) / self.rate
        if t < quarter:
            return self.rate * t
        t -= quarter
        phase = 0.5 * math.pi
        cycle = self.hold_duration + 2.0 * quarter  # hold, then sweep pi
        n = int(t // cycle)
        phase += n * math.pi
        t -= n * cycle
        if t < self.hold_duration:
            return phase
        return phase + self.rate * (t - self.hold_duration)

    def angle(self, t: float) -> float:
        """Commanded rotation angle [rad] at time ``t``."""
        if not (0.0 <= t <= self.total_duration):
            raise ValueError(
                f"t must be within [0, {self.total_duration}], got {t}"
            )
        half = 0.5 * self.total_duration
        if t < half:
            phase = self._dwell_phase(t)
        else:
            phase = self._dwell_phase(half) + self.rate * (t - half)
        return self.max_angle * math.sin(phase)


def attitude_profile_sample(spec: AttitudeProfileSpec, t: float) -> np.ndarray:
    """Reference rotation matrix of the attitude profile at time ``t``."""
    return exp_so3(spec.axis * spec.angle(t))
