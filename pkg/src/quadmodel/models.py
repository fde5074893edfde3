"""Builders for the two concrete vehicle models.

3DOF attitude model (6 states, inputs are the raw rotor thrusts):
    state   [phi, theta, psi, phi_dot, theta_dot, psi_dot]
    input   [F1, F2, F3, F4]
    output  [phi, theta, psi]

6DOF model (12 states, inputs are the generalized force/torques):
    state   [x, y, z, vx, vy, vz, phi, theta, psi, phi_dot, theta_dot, psi_dot]
    input   [U1, U2, U3, U4]
    output  [x, y, z, phi, theta, psi]

Both orderings are frozen; every CSV/JSON artifact uses these labels.
Signs follow the self-consistent reading of the source dynamics:
x_ddot = -g*theta, y_ddot = +g*phi, z_ddot = +U1/m, with U2/U3/U4 the
torques about body x/y/z respectively.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import StateSpaceModel
from .params import QuadParams, validate

ROTOR_FORCE_LABELS = ("F1", "F2", "F3", "F4")

DOF3_STATE_LABELS = ("phi", "theta", "psi", "phi_dot", "theta_dot", "psi_dot")
DOF3_INPUT_LABELS = ROTOR_FORCE_LABELS
DOF3_OUTPUT_LABELS = ("phi", "theta", "psi")

DOF6_STATE_LABELS = (
    "x", "y", "z", "vx", "vy", "vz",
    "phi", "theta", "psi", "phi_dot", "theta_dot", "psi_dot",
)
DOF6_INPUT_LABELS = ("U1", "U2", "U3", "U4")
DOF6_OUTPUT_LABELS = ("x", "y", "z", "phi", "theta", "psi")


@dataclass(frozen=True)
class Dof3State:
    """Attitude state in the frozen 3DOF ordering."""

    phi: float = 0.0
    theta: float = 0.0
    psi: float = 0.0
    phi_dot: float = 0.0
    theta_dot: float = 0.0
    psi_dot: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.phi, self.theta, self.psi, self.phi_dot, self.theta_dot, self.psi_dot]
        )

    @classmethod
    def from_array(cls, x) -> "Dof3State":
        x = np.asarray(x, dtype=float)
        if x.shape != (6,):
            raise ValueError(f"expected a length-6 state vector, got shape {x.shape}")
        return cls(*x.tolist())


@dataclass(frozen=True)
class Dof6State:
    """Full rigid-body state in the frozen 6DOF ordering."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    vx: float = 0.0
    vy: float = 0.0
    vz: float = 0.0
    phi: float = 0.0
    theta: float = 0.0
    psi: float = 0.0
    phi_dot: float = 0.0
    theta_dot: float = 0.0
    psi_dot: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array(
            [
                self.x, self.y, self.z, self.vx, self.vy, self.vz,
                self.phi, self.theta, self.psi,
                self.phi_dot, self.theta_dot, self.psi_dot,
            ]
        )

    @classmethod
    def from_array(cls, x) -> "Dof6State":
        x = np.asarray(x, dtype=float)
        if x.shape != (12,):
            raise ValueError(f"expected a length-12 state vector, got shape {x.shape}")
        return cls(*x.tolist())


def build_3dof(p: QuadParams) -> StateSpaceModel:
    """Attitude-only model: three double-integrator chains driven by the
    rotor thrusts through the moment arms."""
    validate(p)
    A = np.zeros((6, 6))
    A[0, 3] = A[1, 4] = A[2, 5] = 1.0

    B = np.zeros((6, 4))
    B[3, 1] = p.d / p.Ix
    B[3, 3] = -p.d / p.Ix
    B[4, 0] = p.d / p.Iy
    B[4, 2] = -p.d / p.Iy
    B[5, 0] = -p.c / p.Iz
    B[5, 1] = p.c / p.Iz
    B[5, 2] = -p.c / p.Iz
    B[5, 3] = p.c / p.Iz

    C = np.zeros((3, 6))
    C[0, 0] = C[1, 1] = C[2, 2] = 1.0
    D = np.zeros((3, 4))

    return StateSpaceModel(
        A, B, C, D, DOF3_STATE_LABELS, DOF3_INPUT_LABELS, DOF3_OUTPUT_LABELS
    )


def build_6dof(p: QuadParams) -> StateSpaceModel:
    """Full model: positions, velocities, attitude, and rates, with the
    gravity-tilt coupling x_ddot = -g*theta and y_ddot = +g*phi."""
    validate(p)
    A = np.zeros((12, 12))
    A[0, 3] = A[1, 4] = A[2, 5] = 1.0  # position <- velocity
    A[3, 7] = -p.g                     # x_ddot = -g*theta
    A[4, 6] = p.g                      # y_ddot = +g*phi
    A[6, 9] = A[7, 10] = A[8, 11] = 1.0  # angle <- rate

    B = np.zeros((12, 4))
    B[5, 0] = 1.0 / p.m
    B[9, 1] = 1.0 / p.Ix
    B[10, 2] = 1.0 / p.Iy
    B[11, 3] = 1.0 / p.Iz

    C = np.zeros((6, 12))
    for row, col in enumerate((0, 1, 2, 6, 7, 8)):
        C[row, col] = 1.0
    D = np.zeros((6, 4))

    return StateSpaceModel(
        A, B, C, D, DOF6_STATE_LABELS, DOF6_INPUT_LABELS, DOF6_OUTPUT_LABELS
    )
