"""Compactness and hover-efficiency trade-off across rotor counts.

Compares how large an n-rotor vehicle must be (area of the minimum
circumscribed circle of its horizontal projection) when every
configuration is held to the same hovering efficiency and take-off mass.
The single-rotor / coaxial layout comes out smallest, which is the sizing
argument behind this vehicle.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class RotorConfigQuery:
    """Inputs for the sizing comparison.

    Attributes
    ----------
    n : int
        Number of rotors (>= 1).
    mass : float
        Vehicle mass [kg].
    rotor_radius : float
        Rotor radius [m].
    rho : float
        Air density [kg/m^3].
    gravity : float
        Gravitational acceleration [m/s^2].
    """

    n: int
    mass: float
    rotor_radius: float
    rho: float = 1.225
    gravity: float = 9.81

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"rotor count must be an integer >= 1, got {self.n}")
        for name in ("mass", "rotor_radius", "rho", "gravity"):
            value = getattr(self, name)
            if not (value > 0.0) or not math.isfinite(value):
                raise ValueError(f"{name} must be positive and finite, got {value}")


@dataclass(frozen=True)
class ConfigReportRow:
    """One rotor-count entry of the comparison table."""

    n: int
    hover_efficiency: float   # kg/W
    circumscribed_radius: float  # m
    footprint_area: float     # m^2
    area_ratio: float         # footprint relative to n = 1
    diameter_ratio: float     # sqrt(area_ratio)


def ideal_power(thrust: float, rotor_radius: float, rho: float) -> float:
    """Ideal induced power [W] for one rotor producing ``thrust`` [N].

    P = sqrt(F^3 / (2 pi r^2 rho)) from momentum theory.
    """
    if rotor_radius <= 0.0:
        raise ValueError(f"rotor_radius must be positive, got {rotor_radius}")
    if rho <= 0.0:
        raise ValueError(f"rho must be positive, got {rho}")
    if thrust < 0.0:
        raise ValueError(f"thrust must be non-negative, got {thrust}")
    return math.sqrt(thrust**3 / (2.0 * math.pi * rotor_radius**2 * rho))


def hover_efficiency(q: RotorConfigQuery) -> float:
    """Hovering efficiency [kg/W]: mass supported per watt of ideal power.

    Closed form r * sqrt(2 pi n rho) / (g * sqrt(m g)); identical to
    m / (n * ideal_power(m g / n)).
    """
    return (
        q.rotor_radius
        * math.sqrt(2.0 * math.pi * q.n * q.rho)
        / (q.gravity * math.sqrt(q.mass * q.gravity))
    )


def circumscribed_radius(n: int, rotor_radius: float) -> float:
    """Radius [m] of the circle circumscribing n equal rotors in a ring.

    A single rotor is its own circumscribed circle; for n >= 2 the rotors
    are tangent neighbours on a ring.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"rotor count must be an integer >= 1, got {n}")
    if rotor_radius <= 0.0:
        raise ValueError(f"rotor_radius must be positive, got {rotor_radius}")
    if n == 1:
        return rotor_radius
    s = math.sin(math.pi / n)
    return rotor_radius * (1.0 + s) / s


def footprint_area(q: RotorConfigQuery, eta_h: float) -> float:
    """Area [m^2] of the minimum circumscribed circle at fixed efficiency.

    Expresses the footprint purely in terms of the hovering efficiency
    ``eta_h``, mass and air density, with the rotor radius eliminated;
    the n = 1 and n >= 2 branches do not reduce to each other.
    """
    if eta_h <= 0.0:
        raise ValueError(f"eta_h must be positive, got {eta_h}")
    base = eta_h**2 * q.mass * q.gravity**3 / (2.0 * q.rho)
    if q.n == 1:
        return base
    s = math.sin(math.pi / q.n)
    return base * (1.0 + s) ** 2 / (q.n * s**2)


def generate_config_table(q: RotorConfigQuery, n_max: int = 8) -> list[ConfigReportRow]:
    """Comparison rows for n = 1..n_max at equal efficiency and weight.

    The query fixes the hovering efficiency (via its own n, mass and rotor
    radius); every row then gets the rotor radius that keeps that
    efficiency at its rotor count, and ratios are normalized to n = 1.
    """
    if int(n_max) != n_max or n_max < 1:
        raise ValueError(f"n_max must be an integer >= 1, got {n_max}")
    eta = hover_efficiency(q)
    rows = []
    area_n1 = footprint_area(_with_n(q, 1), eta)
    for n in range(1, n_max + 1):
        qn = _with_n(q, n)
        # radius that keeps eta fixed at this rotor count
        r_n = eta * q.gravity * math.sqrt(q.mass * q.gravity) / math.sqrt(2.0 * math.pi * n * q.rho)
        area = footprint_area(qn, eta)
        ratio = area / area_n1
        rows.append(
            ConfigReportRow(
                n=n,
                hover_efficiency=eta,
                circumscribed_radius=circumscribed_radius(n, r_n),
                footprint_area=area,
                area_ratio=ratio,
                diameter_ratio=math.sqrt(ratio),
            )
        )
    return rows


def write_config_table_csv(rows: list[ConfigReportRow], path: str | Path) -> None:
    """Write the comparison table with a fixed, diff-friendly column order."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "eta_h", "R_circ", "S_c", "area_ratio", "diameter_ratio"])
        for row in rows:
            writer.writerow([
                row.n,
                f"{row.hover_efficiency:.9g}",
                f"{row.circumscribed_radius:.9g}",
                f"{row.footprint_area:.9g}",
                f"{row.area_ratio:.9g}",
                f"{row.diameter_ratio:.9g}",
            ])


def _with_n(q: RotorConfigQuery, n: int) -> RotorConfigQuery:
    return RotorConfigQuery(
        n=n, mass=q.mass, rotor_radius=q.rotor_radius, rho=q.rho, gravity=q.gravity
    )
