"""Physical parameter set of the vehicle. SI units throughout."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields


class ParameterError(ValueError):
    """A physical parameter violates its invariant."""

    def __init__(self, name: str, value: float, reason: str):
        super().__init__(f"parameter {name} {reason} (got {value!r})")
        self.name = name
        self.value = value


class NonPositiveParameter(ParameterError):
    def __init__(self, name: str, value: float):
        super().__init__(name, value, "must be strictly positive")


class NonFiniteParameter(ParameterError):
    def __init__(self, name: str, value: float):
        super().__init__(name, value, "must be finite")


@dataclass(frozen=True)
class QuadParams:
    """Physical constants every model builder and simulator consumes.

    m          total mass                              (kg)
    d          rotor-to-center moment arm              (m)
    c          force-to-moment scaling factor: one     (m)
               rotor's yaw reaction torque is +-c times its thrust
    Ix, Iy, Iz principal moments of inertia            (kg m^2)
    g          gravitational acceleration              (m/s^2)
    """

    m: float
    d: float
    c: float
    Ix: float
    Iy: float
    Iz: float
    g: float = 9.81


def validate(p: QuadParams) -> QuadParams:
    """Return ``p`` unchanged iff every parameter is finite and > 0.

    Raises NonFiniteParameter or NonPositiveParameter naming the first
    offending field.
    """
    for f in fields(p):
        v = getattr(p, f.name)
        if not (isinstance(v, (int, float)) and not isinstance(v, bool)):
            raise NonFiniteParameter(f.name, v)
        if not math.isfinite(v):
            raise NonFiniteParameter(f.name, v)
        if v <= 0.0:
            raise NonPositiveParameter(f.name, v)
    return p


def hover_thrust_per_rotor(p: QuadParams) -> float:
    """Thrust each rotor holds in hover: m*g split evenly over four rotors.

    Pure arithmetic; validation is the caller's explicit gate so that
    degenerate inputs (e.g. g = 0) still evaluate.
    """
    return p.m * p.g / 4.0
