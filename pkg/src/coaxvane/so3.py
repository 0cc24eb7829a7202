"""Minimal 3-vector / 3x3-matrix utilities on the rotation group.

Rotation matrices map body-frame vectors into the inertial frame and are
kept as plain (3, 3) float64 ndarrays. Everything here is a pure function;
nothing holds state.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DivergenceError

# Frobenius tolerance for R^T R = I and det R = 1.
ROTATION_TOL = 1e-9

# Below this rotation magnitude the Rodrigues coefficients use their Taylor
# expansions to avoid 0/0.
_SMALL_ANGLE = 1e-8


def hat(v: np.ndarray) -> np.ndarray:
    """Skew-symmetric matrix of ``v`` such that ``hat(v) @ w == cross(v, w)``."""
    x, y, z = float(v[0]), float(v[1]), float(v[2])
    return np.array([
        [0.0, -z, y],
        [z, 0.0, -x],
        [-y, x, 0.0],
    ])


def vee(m: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    """Extract the 3-vector from a skew-symmetric matrix (inverse of hat).

    Raises ValueError if ``m`` departs from skew symmetry by more than
    ``tol`` (Frobenius norm of m + m^T), which signals a malformed
    attitude-error computation upstream.
    """
    m = np.asarray(m, dtype=float)
    asym = float(np.linalg.norm(m + m.T))
    if not math.isfinite(asym) or asym > tol:
        raise ValueError(
            f"matrix is not skew-symmetric (||m + m^T|| = {asym:.3e} > {tol:.1e})"
        )
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def exp_so3(v: np.ndarray) -> np.ndarray:
    """Rotation matrix for a rotation of ``|v|`` radians about ``v``.

    Rodrigues formula with a Taylor branch for tiny angles.
    """
    x, y, z = float(v[0]), float(v[1]), float(v[2])
    theta2 = x * x + y * y + z * z
    theta = math.sqrt(theta2)
    if theta < _SMALL_ANGLE:
        # sin(t)/t -> 1, (1-cos(t))/t^2 -> 1/2; error below machine eps here
        a, b = 1.0, 0.5
    else:
        a = math.sin(theta) / theta
        b = (1.0 - math.cos(theta)) / theta2
    k = hat(np.array([x, y, z]))
    return np.eye(3) + a * k + b * (k @ k)


def is_rotation(r: np.ndarray, tol: float = ROTATION_TOL) -> bool:
    """True if ``r`` is orthonormal with unit determinant within ``tol``."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3) or not np.all(np.isfinite(r)):
        return False
    ortho = float(np.linalg.norm(r.T @ r - np.eye(3)))
    return ortho <= tol and abs(float(np.linalg.det(r)) - 1.0) <= tol


def check_rotation(r: np.ndarray, tol: float = ROTATION_TOL, what: str = "matrix") -> np.ndarray:
    """Validate rotation invariants, returning ``r`` as float64."""
    r = np.asarray(r, dtype=float)
    if not is_rotation(r, tol):
        raise ValueError(f"{what} is not a rotation matrix within tolerance {tol:.1e}")
    return r


def project_to_so3(m: np.ndarray, max_distance: float = 0.1) -> np.ndarray:
    """Nearest rotation matrix to ``m`` (special orthogonal Procrustes).

    Intended for re-orthonormalizing an attitude that has drifted during
    integration. If ``m`` sits farther than ``max_distance`` (Frobenius)
    from its projection the integration has blown up and DivergenceError
    is raised; rank-deficient inputs land in the same branch.
    """
    m = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(m)):
        raise DivergenceError("cannot project non-finite matrix onto SO(3)")
    u, _, vt = np.linalg.svd(m)
    d = float(np.linalg.det(u @ vt))
    r = u @ np.diag([1.0, 1.0, d]) @ vt
    dist = float(np.linalg.norm(m - r))
    if dist > max_distance:
        raise DivergenceError(
            f"matrix is {dist:.3e} (Frobenius) from SO(3); exceeds {max_distance}"
        )
    return r


def rotation_angle(r: np.ndarray) -> float:
    """Rotation angle of ``r`` in radians (angle of the axis-angle form)."""
    c = (float(np.trace(r)) - 1.0) / 2.0
    return math.acos(min(1.0, max(-1.0, c)))


def geodesic_angle(ra: np.ndarray, rb: np.ndarray) -> float:
    """Geodesic distance on SO(3) between two rotations, in radians."""
    return rotation_angle(ra.T @ rb)


def tilt_angle(r: np.ndarray) -> float:
    """Angle between the body z-axis and the inertial z-axis, in radians."""
    return math.acos(min(1.0, max(-1.0, float(r[2, 2]))))


def rotation_to_quaternion(r: np.ndarray) -> np.ndarray:
    """Unit quaternion [w, x, y, z] for a rotation matrix (for log output)."""
    t = float(np.trace(r))
    if t > 0.0:
        s = math.sqrt(t + 1.0) * 2.0
        w = 0.25 * s
        x = (r[2, 1] - r[1, 2]) / s
        y = (r[0, 2] - r[2, 0]) / s
        z = (r[1, 0] - r[0, 1]) / s
    elif r[0, 0] > r[1, 1] and r[0, 0] > r[2, 2]:
        s = math.sqrt(1.0 + r[0, 0] - r[1, 1] - r[2, 2]) * 2.0
        w = (r[2, 1] - r[1, 2]) / s
        x = 0.25 * s
        y = (r[0, 1] + r[1, 0]) / s
        z = (r[0, 2] + r[2, 0]) / s
    elif r[1, 1] > r[2, 2]:
        s = math.sqrt(1.0 + r[1, 1] - r[0, 0] - r[2, 2]) * 2.0
        w = (r[0, 2] - r[2, 0]) / s
        x = (r[0, 1] + r[1, 0]) / s
        y = 0.25 * s
        z = (r[1, 2] + r[2, 1]) / s
    else:
        s = math.sqrt(1.0 + r[2, 2] - r[0, 0] - r[1, 1]) * 2.0
        w = (r[1, 0] - r[0, 1]) / s
        x = (r[0, 2] + r[2, 0]) / s
        y = (r[1, 2] + r[2, 1]) / s
        z = 0.25 * s
    q = np.array([w, x, y, z])
    if q[0] < 0.0:
        q = -q
    return q / np.linalg.norm(q)


def rotation_to_euler_zyx(r: np.ndarray) -> tuple[float, float, float]:
    """(roll, pitch, yaw) of a body->inertial rotation, ZYX convention."""
    pitch = math.asin(min(1.0, max(-1.0, -float(r[2, 0]))))
    if abs(r[2, 0]) < 1.0 - 1e-12:
        roll = math.atan2(r[2, 1], r[2, 2])
        yaw = math.atan2(r[1, 0], r[0, 0])
    else:
        # gimbal-lock: fold yaw into roll
        roll = math.atan2(-r[1, 2], r[1, 1])
        yaw = 0.0
    return roll, pitch, yaw
