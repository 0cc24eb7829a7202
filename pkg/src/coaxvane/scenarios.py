"""Scenario configs, the tracking metrics, and the closed-loop runner."""
from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .actuation import VehicleParams
from .control import (
    ControlMode,
    ControllerGains,
    DualModeController,
    TrajectorySample,
)
from .dynamics import RigidBodyState, SimConfig, simulate
from .errors import (
    AllocationError,
    ConfigError,
    DivergenceError,
    ReferenceSingularityError,
)
from .so3 import geodesic_angle, tilt_angle
from .telemetry import TelemetryLog
from .trajectories import (
    AttitudeProfileSpec,
    BimodalFigure8Spec,
    Figure8Spec,
    ModeLegSpec,
    attitude_profile_sample,
    figure8_sample,
)

SCENARIO_KINDS = ("hover", "figure8", "figure8_bimodal", "attitude_profile")


def rmse(reference: np.ndarray, actual: np.ndarray) -> float:
    """Root-mean-square norm of the per-sample error between two series."""
    reference = np.asarray(reference, dtype=float)
    actual = np.asarray(actual, dtype=float)
    if reference.shape != actual.shape:
        raise ValueError(
            f"series shapes differ: {reference.shape} vs {actual.shape}"
        )
    if len(reference) < 1:
        raise ValueError("series must contain at least one sample")
    err = reference - actual
    if err.ndim == 1:
        err = err[:, None]
    return float(np.sqrt(np.mean(np.sum(err * err, axis=1))))


def attitude_rmse_deg(r_ref: np.ndarray, r: np.ndarray) -> float:
    """RMS geodesic angle between two rotation series, in degrees."""
    if len(r_ref) != len(r):
        raise ValueError(f"series lengths differ: {len(r_ref)} vs {len(r)}")
    if len(r_ref) < 1:
        raise ValueError("series must contain at least one sample")
    angles = [geodesic_angle(a, b) for a, b in zip(r_ref, r)]
    return math.degrees(math.sqrt(float(np.mean(np.square(angles)))))


@dataclass(frozen=True)
class HoverSpec:
    """Hold one point (and a level attitude) for a fixed duration."""

    point: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.2]))
    duration: float = 30.0
    mode: ControlMode = ControlMode.FULLY_ACTUATED

    def __post_init__(self):
        object.__setattr__(self, "point", np.asarray(self.point, dtype=float))
        if self.point.shape != (3,) or not np.all(np.isfinite(self.point)):
            raise ConfigError("hover point must be a finite 3-vector")
        if self.duration <= 0.0:
            raise ConfigError(f"duration must be positive, got {self.duration}")


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one closed-loop run needs."""

    kind: str
    spec: Any
    vehicle: VehicleParams = field(default_factory=VehicleParams)
    gains: ControllerGains = field(default_factory=ControllerGains)
    sim: SimConfig | None = None
    output_csv: str | None = None
    name: str = "scenario"

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise ConfigError(
                f"scenario.type must be one of {SCENARIO_KINDS}, got {self.kind!r}"
            )


@dataclass
class SummaryReport:
    """Metrics of one run, JSON-serializable via ``to_dict``."""

    scenario: str
    status: str = "ok"
    duration_s: float = 0.0
    position_rmse_m: float | None = None
    position_rmse_m_by_mode: dict[str, float] = field(default_factory=dict)
    attitude_rmse_deg: float | None = None
    max_tilt_deg_by_mode: dict[str, float] = field(default_factory=dict)
    saturation_events: int = 0
    mode_switch_times: list[float] = field(default_factory=list)
    failure_time: float | None = None
    failure_message: str | None = None
    csv_path: str | None = None

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "status": self.status,
            "duration_s": self.duration_s,
            "position_rmse_m": self.position_rmse_m,
            "position_rmse_m_by_mode": self.position_rmse_m_by_mode,
            "attitude_rmse_deg": self.attitude_rmse_deg,
            "max_tilt_deg_by_mode": self.max_tilt_deg_by_mode,
            "saturation_events": self.saturation_events,
            "mode_switch_times": self.mode_switch_times,
            "failure_time": self.failure_time,
            "failure_message": self.failure_message,
            "csv_path": self.csv_path,
        }

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")


def _scenario_pieces(cfg: ScenarioConfig):
    """(reference callable, mode schedule, duration, initial state)."""
    spec = cfg.spec
    if cfg.kind == "hover":
        point = spec.point
        sample = TrajectorySample(pos=point, R_ref=np.eye(3))
        reference = lambda t: sample  # noqa: E731
        schedule = [(0.0, spec.mode)]
        initial = RigidBodyState.at_rest(point)
        return reference, schedule, spec.duration, initial
    if cfg.kind == "figure8":
        reference = lambda t: figure8_sample(spec, t)  # noqa: E731
        schedule = [(0.0, ControlMode.FULLY_ACTUATED)]
        first = figure8_sample(spec, 0.0)
        initial = RigidBodyState(first.pos, first.vel, np.eye(3), np.zeros(3))
        return reference, schedule, spec.duration, initial
    if cfg.kind == "figure8_bimodal":
        reference = spec.sample
        first = spec.sample(0.0)
        initial = RigidBodyState(first.pos, first.vel, np.eye(3), np.zeros(3))
        return reference, spec.mode_schedule, spec.duration, initial
    if cfg.kind == "attitude_profile":
        point = spec.hold_point

        def reference(t: float) -> TrajectorySample:
            return TrajectorySample(pos=point, R_ref=attitude_profile_sample(spec.profile, t))

        schedule = [(0.0, ControlMode.FULLY_ACTUATED)]
        initial = RigidBodyState.at_rest(point)
        return reference, schedule, spec.profile.total_duration, initial
    raise ConfigError(f"unknown scenario kind {cfg.kind!r}")


@dataclass(frozen=True)
class AttitudeScenarioSpec:
    """Attitude profile plus the hover point it is flown at."""

    profile: AttitudeProfileSpec = field(default_factory=AttitudeProfileSpec)
    hold_point: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.2]))

    def __post_init__(self):
        object.__setattr__(self, "hold_point", np.asarray(self.hold_point, dtype=float))
        if self.hold_point.shape != (3,) or not np.all(np.isfinite(self.hold_point)):
            raise ConfigError("hold point must be a finite 3-vector")


def run_scenario(cfg: ScenarioConfig, out_dir: str | Path | None = None) -> SummaryReport:
    """Simulate one scenario and summarize its tracking performance.

    Simulation and control failures are folded into the report (status and
    failure timestamp) rather than raised, so batch runs keep going.
    """
    reference, schedule, duration, initial = _scenario_pieces(cfg)
    sim = cfg.sim if cfg.sim is not None else SimConfig(duration=duration)
    controller = DualModeController(
        reference, cfg.gains, cfg.vehicle, sim.controller_period, schedule
    )
    report = SummaryReport(scenario=cfg.name, duration_s=sim.duration)
    report.mode_switch_times = [t for t, _ in schedule[1:]]
    try:
        log = simulate(initial, controller, sim, cfg.vehicle)
    except DivergenceError as e:
        report.status = "diverged"
        report.failure_time = getattr(e, "sim_time", None)
        report.failure_message = str(e)
        report.saturation_events = controller.saturation_events
        return report
    except (AllocationError, ReferenceSingularityError) as e:
        report.status = "allocation_failed"
        report.failure_time = getattr(e, "sim_time", None)
        report.failure_message = str(e)
        report.saturation_events = controller.saturation_events
        return report

    report.position_rmse_m = rmse(log.pos_ref, log.pos)
    report.attitude_rmse_deg = attitude_rmse_deg(log.R_ref, log.R)
    modes = np.array(log.mode)
    for mode in dict.fromkeys(log.mode):
        mask = modes == mode
        report.position_rmse_m_by_mode[mode] = rmse(log.pos_ref[mask], log.pos[mask])
        report.max_tilt_deg_by_mode[mode] = math.degrees(
            max(tilt_angle(r) for r in log.R[mask])
        )
    report.saturation_events = controller.saturation_events

    if cfg.output_csv is not None:
        path = Path(cfg.output_csv)
        if out_dir is not None:
            path = Path(out_dir) / path
        path.parent.mkdir(parents=True, exist_ok=True)
        log.to_csv(path)
        report.csv_path = str(path)
    return report


def simulate_scenario(cfg: ScenarioConfig) -> TelemetryLog:
    """Run a scenario and return the raw telemetry (errors propagate)."""
    reference, schedule, duration, initial = _scenario_pieces(cfg)
    sim = cfg.sim if cfg.sim is not None else SimConfig(duration=duration)
    controller = DualModeController(
        reference, cfg.gains, cfg.vehicle, sim.controller_period, schedule
    )
    return simulate(initial, controller, sim, cfg.vehicle)


# ---------------------------------------------------------------------------
# TOML loading


def _get(table: dict, key: str, kind, path: str, default=None, required=False):
    if key not in table:
        if required:
            raise ConfigError(f"{path}.{key}: required key is missing")
        return default
    value = table[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind):
        raise ConfigError(
            f"{path}.{key}: expected {getattr(kind, '__name__', kind)}, "
            f"got {type(value).__name__}"
        )
    return value


def _vehicle_from_table(table: dict) -> VehicleParams:
    kwargs = {}
    scalars = (
        "mass", "arm_upper", "arm_lower", "cs_gain", "torque_per_thrust",
        "rotor_thrust_max", "rotor_thrust_min", "rho", "gravity",
    )
    for key in scalars:
        value = _get(table, key, float, "vehicle")
        if value is not None:
            kwargs[key] = value
    angle_max_deg = _get(table, "angle_max_deg", float, "vehicle")
    if angle_max_deg is not None:
        kwargs["angle_max"] = math.radians(angle_max_deg)
    if "inertia" in table:
        inertia = np.asarray(table["inertia"], dtype=float)
        if inertia.shape == (3,):
            inertia = np.diag(inertia)
        kwargs["inertia"] = inertia
    try:
        return VehicleParams(**kwargs)
    except ValueError as e:
        raise ConfigError(f"vehicle.{e}") from e


def _gains_from_table(table: dict) -> ControllerGains:
    kwargs = {}
    for key in ("kp", "kv", "kr", "kp_omega", "ki_omega", "kd_omega", "integral_limit"):
        if key in table:
            kwargs[key] = table[key]
    try:
        return ControllerGains(**kwargs)
    except ValueError as e:
        raise ConfigError(f"gains.{e}") from e


def _sim_from_table(table: dict, fallback_duration: float) -> SimConfig:
    try:
        return SimConfig(
            dt=_get(table, "dt", float, "sim", default=1.0e-3),
            duration=_get(table, "duration", float, "sim", default=fallback_duration),
            controller_period=_get(table, "controller_period", float, "sim", default=2.0e-3),
            renorm_interval=_get(table, "renorm_interval", int, "sim", default=100),
        )
    except ValueError as e:
        raise ConfigError(f"sim.{e}") from e


def _mode_from_name(name: str, path: str) -> ControlMode:
    table = {
        "FA": ControlMode.FULLY_ACTUATED,
        "fully_actuated": ControlMode.FULLY_ACTUATED,
        "UA": ControlMode.UNDERACTUATED,
        "underactuated": ControlMode.UNDERACTUATED,
    }
    if name not in table:
        raise ConfigError(f"{path}: unknown mode {name!r}")
    return table[name]


def _leg_from_table(table: dict, path: str, default: ModeLegSpec) -> ModeLegSpec:
    return ModeLegSpec(
        v_max=_get(table, "v_max", float, path, default=default.v_max),
        a_max=_get(table, "a_max", float, path, default=default.a_max),
        laps=_get(table, "laps", int, path, default=default.laps),
    )


def _scenario_from_table(table: dict):
    kind = _get(table, "type", str, "scenario", required=True)
    if kind == "hover":
        spec = HoverSpec(
            point=np.asarray(table.get("point", [0.0, 0.0, 1.2]), dtype=float),
            duration=_get(table, "duration", float, "scenario", default=30.0),
            mode=_mode_from_name(table.get("mode", "FA"), "scenario.mode"),
        )
    elif kind == "figure8":
        spec = Figure8Spec(
            amplitude_x=_get(table, "amplitude_x", float, "scenario", default=1.8),
            amplitude_y=_get(table, "amplitude_y", float, "scenario", default=0.9),
            altitude=_get(table, "altitude", float, "scenario", default=1.2),
            v_max=_get(table, "v_max", float, "scenario", default=1.5),
            a_max=_get(table, "a_max", float, "scenario", default=0.7),
            laps=_get(table, "laps", int, "scenario", default=1),
        )
    elif kind == "figure8_bimodal":
        defaults = BimodalFigure8Spec()
        spec = BimodalFigure8Spec(
            amplitude_x=_get(table, "amplitude_x", float, "scenario", default=1.8),
            amplitude_y=_get(table, "amplitude_y", float, "scenario", default=0.9),
            altitude=_get(table, "altitude", float, "scenario", default=1.2),
            blend_time=_get(table, "blend_time", float, "scenario", default=2.0),
            fully_actuated=_leg_from_table(
                table.get("fully_actuated", {}), "scenario.fully_actuated",
                defaults.fully_actuated,
            ),
            underactuated=_leg_from_table(
                table.get("underactuated", {}), "scenario.underactuated",
                defaults.underactuated,
            ),
        )
    elif kind == "attitude_profile":
        profile = AttitudeProfileSpec(
            rate=_get(table, "rate", float, "scenario", default=1.5),
            max_angle=math.radians(
                _get(table, "max_angle_deg", float, "scenario", default=20.0)
            ),
            hold_duration=_get(
                table, "hold_duration", float, "scenario", default=math.pi / 2.0
            ),
            total_duration=_get(
                table, "total_duration", float, "scenario", default=30.0
            ),
            axis=np.asarray(table.get("axis", [1.0, 0.0, 0.0]), dtype=float),
        )
        spec = AttitudeScenarioSpec(
            profile=profile,
            hold_point=np.asarray(table.get("point", [0.0, 0.0, 1.2]), dtype=float),
        )
    else:
        raise ConfigError(
            f"scenario.type: must be one of {SCENARIO_KINDS}, got {kind!r}"
        )
    return kind, spec


def load_config(path: str | Path) -> ScenarioConfig:
    """Parse and validate a scenario file; errors name the offending key."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: TOML parse error: {e}") from e

    if "scenario" not in data:
        raise ConfigError("scenario.type: required key is missing")
    kind, spec = _scenario_from_table(data["scenario"])
    vehicle = _vehicle_from_table(data.get("vehicle", {}))
    gains = _gains_from_table(data.get("gains", {}))
    if kind == "hover":
        fallback = spec.duration
    elif kind == "attitude_profile":
        fallback = spec.profile.total_duration
    else:
        fallback = spec.duration
    sim = _sim_from_table(data.get("sim", {}), fallback)
    output = data.get("output", {})
    return ScenarioConfig(
        kind=kind,
        spec=spec,
        vehicle=vehicle,
        gains=gains,
        sim=sim,
        output_csv=_get(output, "csv", str, "output"),
        name=_get(data.get("scenario", {}), "name", str, "scenario", default=path.stem),
    )


def bundled_config_path(name: str) -> Path:
    """Path of a packaged scenario file, e.g. ``figure8_bimodal``."""
    from importlib.resources import files

    resource = files("coaxvane") / "configs" / f"{name}.toml"
    return Path(str(resource))
