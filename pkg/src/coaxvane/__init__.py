"""Flight dynamics and dual-mode control for a coaxial thrust-vane vehicle."""

from .actuation import (
    ActuatorCommand,
    BodyWrench,
    ControlSurfaceLifts,
    SaturationFlags,
    VehicleParams,
    allocate,
    control_surface_lifts,
    forward_wrench,
    mix,
    sample_feasible_wrenches,
    saturate,
)
from .control import (
    AttitudeLoopState,
    ControllerGains,
    ControlMode,
    DualModeController,
    TrajectorySample,
    attitude_error,
    control_step,
    desired_acceleration,
    desired_bodyrate,
    desired_collective_thrust_ua,
    desired_thrust_fa,
    desired_torque,
    flatness_reference_attitude,
)
from .dynamics import (
    RigidBodyState,
    SimConfig,
    StepCommand,
    integrate_constant_wrench,
    simulate,
    state_derivative,
    step,
)
from .errors import (
    AllocationError,
    CoaxvaneError,
    ConfigError,
    DivergenceError,
    ReferenceSingularityError,
)
from .rotor_config import (
    ConfigReportRow,
    RotorConfigQuery,
    circumscribed_radius,
    footprint_area,
    generate_config_table,
    hover_efficiency,
    ideal_power,
    write_config_table_csv,
)
from .scenarios import (
    AttitudeScenarioSpec,
    HoverSpec,
    ScenarioConfig,
    SummaryReport,
    attitude_rmse_deg,
    bundled_config_path,
    load_config,
    rmse,
    run_scenario,
    simulate_scenario,
)
from .telemetry import TelemetryLog
from .trajectories import (
    AttitudeProfileSpec,
    BimodalFigure8Spec,
    Figure8Spec,
    ModeLegSpec,
    attitude_profile_sample,
    figure8_sample,
)
from . import so3

__version__ = "0.1.0"

__all__ = [
    "ActuatorCommand",
    "AllocationError",
    "AttitudeLoopState",
    "AttitudeProfileSpec",
    "AttitudeScenarioSpec",
    "BimodalFigure8Spec",
    "BodyWrench",
    "CoaxvaneError",
    "ConfigError",
    "ConfigReportRow",
    "ControlMode",
    "ControlSurfaceLifts",
    "ControllerGains",
    "DivergenceError",
    "DualModeController",
    "Figure8Spec",
    "HoverSpec",
    "ModeLegSpec",
    "ReferenceSingularityError",
    "RigidBodyState",
    "RotorConfigQuery",
    "SaturationFlags",
    "ScenarioConfig",
    "SimConfig",
    "StepCommand",
    "SummaryReport",
    "TelemetryLog",
    "TrajectorySample",
    "VehicleParams",
    "allocate",
    "attitude_error",
    "attitude_profile_sample",
    "attitude_rmse_deg",
    "bundled_config_path",
    "circumscribed_radius",
    "control_step",
    "control_surface_lifts",
    "desired_acceleration",
    "desired_bodyrate",
    "desired_collective_thrust_ua",
    "desired_thrust_fa",
    "desired_torque",
    "figure8_sample",
    "flatness_reference_attitude",
    "footprint_area",
    "forward_wrench",
    "generate_config_table",
    "hover_efficiency",
    "ideal_power",
    "integrate_constant_wrench",
    "load_config",
    "mix",
    "rmse",
    "run_scenario",
    "sample_feasible_wrenches",
    "saturate",
    "simulate",
    "simulate_scenario",
    "so3",
    "state_derivative",
    "step",
    "write_config_table_csv",
]
