"""Trajectory generation for the linear models and the nonlinear reference
plant.

The linear models are propagated either exactly (their A matrices are
nilpotent, so the zero-order-hold discretization is a finite polynomial in
A -- no truncation) or by classical RK4. On these models RK4 with a
constant held input reproduces the exact step to rounding, because the
one-step RK4 map equals the exponential series truncated at degree 4 and
A^4 = 0 (A^2 = 0 for the attitude model); the test suite leans on that
equivalence as a cross-check.

Inputs are zero-order held: the input function is sampled at the start of
each step and held constant across it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import NotNilpotent, StateSpaceModel, expm_nilpotent, nilpotency_index
from .models import DOF6_STATE_LABELS, ROTOR_FORCE_LABELS, Dof3State, Dof6State
from .params import QuadParams, validate
from .rotor_forces import (
    RotorForces,
    pitch_torque,
    roll_torque,
    total_thrust,
    yaw_torque,
)

INTEGRATORS = ("exact_zoh", "rk4")
PLANTS = ("linear_3dof", "linear_6dof", "nonlinear_6dof")

MAX_STEPS = 10_000_000


class StepCountExceeded(ValueError):
    """t_final/dt asks for more steps than the in-memory guard allows."""


class NonFiniteDerivative(ArithmeticError):
    """The derivative function produced NaN or infinity during a step."""


class NonFiniteState(ArithmeticError):
    """The propagated state left the finite floats."""


def _n_steps(t_final: float, dt: float) -> int:
    # ceil with a small backoff so t_final = k*dt does not round up to k+1
    return max(1, math.ceil(t_final / dt - 1e-9))


@dataclass(frozen=True)
class SimConfig:
    """Run settings: horizon, step, integrator, and which plant to drive."""

    t_final: float
    dt: float = 0.001
    integrator: str = "exact_zoh"
    plant: str = "linear_6dof"

    def __post_init__(self):
        if not (math.isfinite(self.dt) and math.isfinite(self.t_final)):
            raise ValueError("dt and t_final must be finite")
        if not 0.0 < self.dt <= self.t_final:
            raise ValueError(
                f"need 0 < dt <= t_final, got dt={self.dt!r}, t_final={self.t_final!r}"
            )
        if self.integrator not in INTEGRATORS:
            raise ValueError(f"unknown integrator {self.integrator!r}; choose from {INTEGRATORS}")
        if self.plant not in PLANTS:
            raise ValueError(f"unknown plant {self.plant!r}; choose from {PLANTS}")
        if _n_steps(self.t_final, self.dt) > MAX_STEPS:
            raise StepCountExceeded(
                f"t_final/dt = {self.t_final / self.dt:.3g} exceeds the {MAX_STEPS} step guard"
            )

    @property
    def n_steps(self) -> int:
        return _n_steps(self.t_final, self.dt)


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled run: times (N,), states (N, n), inputs (N, p).

    The input row i is the value held over [t_i, t_i + dt); the final row
    is the input function sampled at the last time, for shape regularity.
    """

    times: np.ndarray
    states: np.ndarray
    inputs: np.ndarray
    state_labels: tuple[str, ...]
    input_labels: tuple[str, ...]

    def __len__(self) -> int:
        return self.times.shape[0]


def zoh_discretize(m: StateSpaceModel, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Exact one-step transition pair (Phi, Gamma) for a held input:
    x+ = Phi x + Gamma u, valid when A is nilpotent.

    Phi = exp(A dt); Gamma = (sum_j A^j dt^(j+1)/(j+1)!) B, both series
    terminating at the nilpotency index.
    """
    k = nilpotency_index(m.A)
    if k is None:
        raise NotNilpotent(
            "exact ZOH stepping needs a nilpotent A matrix; use integrator='rk4'"
        )
    phi = expm_nilpotent(m.A, dt)
    gamma_factor = np.eye(m.n) * dt
    term = np.eye(m.n) * dt
    for j in range(1, k):
        term = term @ m.A * (dt / (j + 1))
        gamma_factor = gamma_factor + term
    return phi, gamma_factor @ m.B


def zoh_step(m: StateSpaceModel, x, u, dt: float) -> np.ndarray:
    """One exact zero-order-hold step of dx/dt = A x + B u."""
    phi, gamma = zoh_discretize(m, dt)
    return phi @ np.asarray(x, dtype=float) + gamma @ np.asarray(u, dtype=float)


def rk4_step(
    deriv: Callable[[float, np.ndarray], np.ndarray], x, t: float, dt: float
) -> np.ndarray:
    """Classical 4th-order Runge-Kutta update of dx/dt = deriv(t, x)."""
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        k1 = np.asarray(deriv(t, x), dtype=float)
        k2 = np.asarray(deriv(t + 0.5 * dt, x + 0.5 * dt * k1), dtype=float)
        k3 = np.asarray(deriv(t + 0.5 * dt, x + 0.5 * dt * k2), dtype=float)
        k4 = np.asarray(deriv(t + dt, x + dt * k3), dtype=float)
        out = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(out)):
        raise NonFiniteDerivative(
            f"derivative produced non-finite values on the step at t={float(t):g}"
        )
    return out


def simulate(
    m: StateSpaceModel,
    x0,
    input_fn: Callable[[float, np.ndarray], np.ndarray],
    cfg: SimConfig,
) -> Trajectory:
    """Propagate a linear model from x0 under input_fn(t, x).

    input_fn may close over anything: a constant vector for open loop,
    u = r - K x for state feedback, or a scripted maneuver. It is sampled
    at each step start and held across the step.
    """
    if cfg.plant == "nonlinear_6dof":
        raise ValueError("cfg.plant is nonlinear_6dof; use simulate_nonlinear")
    if isinstance(x0, (Dof3State, Dof6State)):
        x0 = x0.as_array()
    x = np.asarray(x0, dtype=float).reshape(m.n)
    steps = cfg.n_steps
    times = np.arange(steps + 1) * cfg.dt
    states = np.empty((steps + 1, m.n))
    inputs = np.empty((steps + 1, m.p))

    exact = cfg.integrator == "exact_zoh"
    if exact:
        phi, gamma = zoh_discretize(m, cfg.dt)

    states[0] = x
    # overflow is detected by the explicit finiteness checks, not by numpy
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(steps):
            t = times[i]
            u = np.asarray(input_fn(t, x), dtype=float).reshape(m.p)
            if not np.all(np.isfinite(u)):
                raise NonFiniteState(f"input became non-finite at t={float(t):g}")
            inputs[i] = u
            if exact:
                x = phi @ x + gamma @ u
            else:
                x = rk4_step(lambda tt, xx: m.A @ xx + m.B @ u, x, t, cfg.dt)
            if not np.all(np.isfinite(x)):
                raise NonFiniteState(
                    f"state became non-finite at t={float(times[i + 1]):g}"
                )
            states[i + 1] = x
    inputs[steps] = np.asarray(input_fn(times[steps], x), dtype=float).reshape(m.p)
    return Trajectory(times, states, inputs, m.state_labels, m.input_labels)


def nonlinear_deriv(p: QuadParams, x, f: RotorForces) -> np.ndarray:
    """Reference-plant state derivative in the 6DOF state ordering.

    Keeps the trigonometric thrust decomposition but, like the linear
    models, has no drag and no gyroscopic coupling: it exists to measure
    how fast the small-angle linearization degrades, nothing more. Under
    sin a -> a, cos a -> 1, T -> m g it reduces exactly to the linear
    6DOF model.
    """
    x = np.asarray(x, dtype=float)
    phi, theta = x[6], x[7]
    thrust = total_thrust(f)
    return np.array(
        [
            x[3],
            x[4],
            x[5],
            -(thrust / p.m) * math.sin(theta),
            (thrust / p.m) * math.sin(phi),
            (thrust * math.cos(phi) * math.cos(theta)) / p.m - p.g,
            x[9],
            x[10],
            x[11],
            roll_torque(f, p) / p.Ix,
            pitch_torque(f, p) / p.Iy,
            yaw_torque(f, p) / p.Iz,
        ]
    )


def simulate_nonlinear(
    p: QuadParams,
    x0,
    forces_fn: Callable[[float, np.ndarray], RotorForces],
    cfg: SimConfig,
) -> Trajectory:
    """Propagate the nonlinear reference plant under forces_fn(t, x).

    Always integrates with RK4 (there is no exact propagator here);
    forces are sampled at each step start and held, mirroring the linear
    simulator so the two runs are comparable sample by sample.
    """
    validate(p)
    if cfg.plant != "nonlinear_6dof":
        raise ValueError("simulate_nonlinear requires cfg.plant = 'nonlinear_6dof'")
    if isinstance(x0, Dof6State):
        x0 = x0.as_array()
    x = np.asarray(x0, dtype=float).reshape(12)
    steps = cfg.n_steps
    times = np.arange(steps + 1) * cfg.dt
    states = np.empty((steps + 1, 12))
    inputs = np.empty((steps + 1, 4))

    states[0] = x
    for i in range(steps):
        t = times[i]
        f = forces_fn(t, x)
        inputs[i] = f.as_tuple()
        x = rk4_step(lambda tt, xx: nonlinear_deriv(p, xx, f), x, t, cfg.dt)
        states[i + 1] = x
    inputs[steps] = forces_fn(times[steps], x).as_tuple()
    return Trajectory(times, states, inputs, DOF6_STATE_LABELS, ROTOR_FORCE_LABELS)
