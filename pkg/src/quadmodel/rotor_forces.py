"""Rotor thrust algebra: body torques, net thrust, the force<->input mixing
map and its exact inverse, and the small-angle translational accelerations.

Conventions (body frame): rotors 1 and 3 sit on the x-axis and spin
clockwise; rotors 2 and 4 sit on the y-axis and spin counter-clockwise.
Counter-clockwise reaction torque is positive, so rotors 2 and 4 contribute
+c*F to yaw and rotors 1 and 3 contribute -c*F.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .params import QuadParams

# Tilt magnitude beyond which sin(a) ~ a stops being a good approximation.
SMALL_ANGLE_LIMIT = 0.5  # rad


class SmallAngleDomainViolation(UserWarning):
    """Tilt angle outside the small-angle regime the linear model assumes."""


def _require_finite(kind: str, values: tuple[float, ...]) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{kind} components must be finite, got {values!r}")


@dataclass(frozen=True)
class RotorForces:
    """Thrust of each rotor, newtons. Negative values are representable
    (so saturation can be detected) but flagged by is_physical."""

    f1: float
    f2: float
    f3: float
    f4: float

    def __post_init__(self):
        _require_finite("rotor forces", self.as_tuple())

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.f1, self.f2, self.f3, self.f4)


@dataclass(frozen=True)
class GeneralizedInput:
    """Net upward force above weight plus the three body torques."""

    u1: float  # T - m*g       (N)
    u2: float  # roll torque   (N m, about body x)
    u3: float  # pitch torque  (N m, about body y)
    u4: float  # yaw torque    (N m, about body z)

    def __post_init__(self):
        _require_finite("generalized input", self.as_tuple())

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.u1, self.u2, self.u3, self.u4)


def roll_torque(f: RotorForces, p: QuadParams) -> float:
    """Torque about body x. Rotors 1 and 3 have zero moment arm about x."""
    return p.d * (f.f2 - f.f4)


def pitch_torque(f: RotorForces, p: QuadParams) -> float:
    """Torque about body y. Rotors 2 and 4 have zero moment arm about y."""
    return p.d * (f.f1 - f.f3)


def yaw_torque(f: RotorForces, p: QuadParams) -> float:
    """Net reaction torque about body z from the two rotor pairs."""
    return p.c * (-f.f1 + f.f2 - f.f3 + f.f4)


def total_thrust(f: RotorForces) -> float:
    return f.f1 + f.f2 + f.f3 + f.f4


def mix(f: RotorForces, p: QuadParams) -> GeneralizedInput:
    """Map four rotor thrusts to (net upward force, roll, pitch, yaw torque)."""
    return GeneralizedInput(
        u1=total_thrust(f) - p.m * p.g,
        u2=roll_torque(f, p),
        u3=pitch_torque(f, p),
        u4=yaw_torque(f, p),
    )


def demix(u: GeneralizedInput, p: QuadParams) -> RotorForces:
    """Exact inverse of mix: the unique rotor-force quadruple producing ``u``.

    Never clamps: a commanded input that needs a rotor to pull downward
    comes back with a negative entry; use is_physical to detect saturation.
    """
    quarter = (u.u1 + p.m * p.g) / 4.0
    half_roll = u.u2 / (2.0 * p.d)
    half_pitch = u.u3 / (2.0 * p.d)
    quarter_yaw = u.u4 / (4.0 * p.c)
    return RotorForces(
        f1=quarter + half_pitch - quarter_yaw,
        f2=quarter + half_roll + quarter_yaw,
        f3=quarter - half_pitch - quarter_yaw,
        f4=quarter - half_roll + quarter_yaw,
    )


def is_physical(f: RotorForces) -> bool:
    """True iff no rotor is asked to push downward (all thrusts >= 0)."""
    return f.f1 >= 0.0 and f.f2 >= 0.0 and f.f3 >= 0.0 and f.f4 >= 0.0


def translational_accels(
    phi: float, theta: float, u1: float, p: QuadParams
) -> tuple[float, float, float]:
    """Small-angle linear accelerations (ax, ay, az) for tilt (phi, theta)
    and net upward force u1.

    Outside |angle| < 0.5 rad the linearization is unreliable; a
    SmallAngleDomainViolation warning is issued (not an error, so the
    breakdown can be probed deliberately) and the formulas still evaluate.
    """
    if abs(phi) >= SMALL_ANGLE_LIMIT or abs(theta) >= SMALL_ANGLE_LIMIT:
        warnings.warn(
            f"tilt (phi={phi!r}, theta={theta!r}) outside small-angle domain "
            f"|angle| < {SMALL_ANGLE_LIMIT} rad",
            SmallAngleDomainViolation,
            stacklevel=2,
        )
    return (-p.g * theta, p.g * phi, u1 / p.m)
