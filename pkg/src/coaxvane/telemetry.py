"""Flight-log container and deterministic CSV serialization."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from .so3 import rotation_to_euler_zyx, rotation_to_quaternion

if TYPE_CHECKING:  # pragma: no cover
    from .actuation import BodyWrench
    from .dynamics import RigidBodyState, StepCommand

CSV_COLUMNS = (
    "t",
    "p_x", "p_y", "p_z",
    "v_x", "v_y", "v_z",
    "q_w", "q_x", "q_y", "q_z",
    "w_x", "w_y", "w_z",
    "p_ref_x", "p_ref_y", "p_ref_z",
    "roll_ref", "pitch_ref", "yaw_ref",
    "f1", "f2", "theta1", "theta2", "delta1", "delta2",
    "mode",
)


@dataclass
class TelemetryLog:
    """Closed-loop run history sampled at the controller rate.

    Attitudes are stored as full rotation matrices; the CSV flattens the
    vehicle attitude to a quaternion and the reference attitude to ZYX
    Euler angles.
    """

    t: np.ndarray           # (N,)
    pos: np.ndarray         # (N, 3)
    vel: np.ndarray         # (N, 3)
    R: np.ndarray           # (N, 3, 3)
    omega: np.ndarray       # (N, 3)
    pos_ref: np.ndarray     # (N, 3)
    R_ref: np.ndarray       # (N, 3, 3)
    command: np.ndarray     # (N, 6) f1 f2 theta1 theta2 delta1 delta2
    wrench: np.ndarray      # (N, 6) force, torque
    mode: list[str]         # (N,)

    def __len__(self) -> int:
        return len(self.t)

    def to_csv(self, path: str | Path) -> None:
        """Write the log; output is byte-identical across repeat runs."""
        lines = [",".join(CSV_COLUMNS)]
        for i in range(len(self.t)):
            quat = rotation_to_quaternion(self.R[i])
            euler = rotation_to_euler_zyx(self.R_ref[i])
            values = [
                self.t[i],
                *self.pos[i], *self.vel[i], *quat, *self.omega[i],
                *self.pos_ref[i], *euler, *self.command[i],
            ]
            lines.append(
                ",".join(f"{v:.9g}" for v in values) + f",{self.mode[i]}"
            )
        Path(path).write_text("\n".join(lines) + "\n")


class TelemetryRecorder:
    """Accumulates rows during a run, then freezes them into arrays."""

    def __init__(self):
        self._t: list[float] = []
        self._pos: list[np.ndarray] = []
        self._vel: list[np.ndarray] = []
        self._r: list[np.ndarray] = []
        self._omega: list[np.ndarray] = []
        self._pos_ref: list[np.ndarray] = []
        self._r_ref: list[np.ndarray] = []
        self._command: list[np.ndarray] = []
        self._wrench: list[np.ndarray] = []
        self._mode: list[str] = []

    def append(self, t: float, state: "RigidBodyState", out: "StepCommand",
               wrench: "BodyWrench") -> None:
        self._t.append(t)
        self._pos.append(state.pos.copy())
        self._vel.append(state.vel.copy())
        self._r.append(state.R.copy())
        self._omega.append(state.omega.copy())
        self._pos_ref.append(np.asarray(out.pos_ref, dtype=float))
        self._r_ref.append(np.asarray(out.attitude_ref, dtype=float))
        self._command.append(out.command.as_array())
        self._wrench.append(np.concatenate([wrench.force, wrench.torque]))
        self._mode.append(out.mode)

    def finalize(self) -> TelemetryLog:
        return TelemetryLog(
            t=np.array(self._t),
            pos=np.array(self._pos),
            vel=np.array(self._vel),
            R=np.array(self._r),
            omega=np.array(self._omega),
            pos_ref=np.array(self._pos_ref),
            R_ref=np.array(self._r_ref),
            command=np.array(self._command),
            wrench=np.array(self._wrench),
            mode=self._mode,
        )
