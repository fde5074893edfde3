"""Full-state feedback synthesis by pole placement on integrator chains.

Both models decompose into decoupled chains of pure integrators:

  6DOF: U1 -> (z, vz)                          order 2, gain  1/m
        U2 -> (y, vy, phi, phi_dot)            order 4, gain  g/Ix
        U3 -> (x, vx, theta, theta_dot)        order 4, gain -g/Iy
        U4 -> (psi, psi_dot)                   order 2, gain  1/Iz
  3DOF: per-axis torque -> (angle, rate)       order 2, gains 1/Ix, 1/Iy, 1/Iz

On a chain of k integrators with input gain b, the feedback row in
"derivative coordinates" (most-integrated state first) that realizes a
monic target polynomial s^k + a1 s^(k-1) + ... + ak is simply
k_j = a_(k-j+1) / b -- Ackermann collapses to reading coefficients off the
companion form. The 4-chains are handled by scaling the angle/rate entries
by the tilt-to-acceleration coupling (+-g); the 3DOF design happens in
torque space and is then pushed through the inverse mixing relations into
rotor-force space, zero net-thrust offset.

Feedback convention: u = r - K x, with r defaulting to the hover
equilibrium input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import char_poly, is_hurwitz
from .models import build_3dof, build_6dof
from .params import QuadParams, validate


class PolePlacementError(ValueError):
    """Requested placement is malformed."""


class UnstablePoleRequested(PolePlacementError):
    pass


class PoleCountMismatch(PolePlacementError):
    pass


class ZeroInputGain(PolePlacementError):
    pass


class InternalStabilityCheckFailed(RuntimeError):
    """The synthesized closed loop failed its own Hurwitz check. Should be
    impossible for valid inputs; treated as a defect signal, not a user
    error."""


def _validate_pole_set(name: str, poles: tuple) -> tuple[complex, ...]:
    out = tuple(complex(s) for s in poles)
    for s in out:
        if not (np.isfinite(s.real) and np.isfinite(s.imag)):
            raise PolePlacementError(f"{name} pole {s!r} is not finite")
        if s.real >= 0.0:
            raise UnstablePoleRequested(
                f"{name} pole {s!r} is not strictly in the left half-plane"
            )
    conjugates = sorted((s.conjugate() for s in out), key=lambda s: (s.real, s.imag))
    if sorted(out, key=lambda s: (s.real, s.imag)) != conjugates:
        raise PolePlacementError(
            f"{name} poles must be closed under conjugation, got {poles!r}"
        )
    return out


@dataclass(frozen=True)
class PoleSpec:
    """Desired closed-loop pole multisets per chain.

    For the 6DOF design: z and yaw take 2 poles each, roll and pitch take
    4 each (their chains run through the tilt coupling into position).
    For the 3DOF design only roll/pitch/yaw are used, 2 poles each.
    """

    z: tuple = ()
    roll: tuple = ()
    pitch: tuple = ()
    yaw: tuple = ()

    def __post_init__(self):
        for name in ("z", "roll", "pitch", "yaw"):
            object.__setattr__(self, name, _validate_pole_set(name, getattr(self, name)))

    @classmethod
    def uniform_6dof(cls, pole: complex = -2.0) -> "PoleSpec":
        """Every chain placed at a single repeated pole (6DOF chain sizes)."""
        return cls(z=(pole,) * 2, roll=(pole,) * 4, pitch=(pole,) * 4, yaw=(pole,) * 2)

    @classmethod
    def uniform_3dof(cls, pole: complex = -2.0) -> "PoleSpec":
        """Every attitude axis placed at a single repeated pole."""
        return cls(roll=(pole,) * 2, pitch=(pole,) * 2, yaw=(pole,) * 2)


@dataclass(frozen=True)
class GainMatrix:
    """Feedback gains for u = r - K x, with the target model's labels."""

    K: np.ndarray
    state_labels: tuple[str, ...]
    input_labels: tuple[str, ...]

    def __post_init__(self):
        k = np.array(self.K, dtype=float)
        if k.shape != (len(self.input_labels), len(self.state_labels)):
            raise PolePlacementError(
                f"gain shape {k.shape} does not match labels "
                f"({len(self.input_labels)} inputs, {len(self.state_labels)} states)"
            )
        k.setflags(write=False)
        object.__setattr__(self, "K", k)
        object.__setattr__(self, "state_labels", tuple(self.state_labels))
        object.__setattr__(self, "input_labels", tuple(self.input_labels))

    def feedback_input(self, x, r=None) -> np.ndarray:
        """u = r - K x (r defaults to zero, the hover equilibrium in the
        deviation coordinates both designs use)."""
        u = -self.K @ np.asarray(x, dtype=float)
        if r is not None:
            u = np.asarray(r, dtype=float) + u
        return u


def poles_to_monic(poles) -> np.ndarray:
    """Expand prod (s - p_i) into real monic coefficients.

    Conjugate-closed inputs are required, so the imaginary residue is pure
    rounding; it is checked and dropped.
    """
    coeffs = np.array([1.0 + 0.0j])
    for s in poles:
        coeffs = np.convolve(coeffs, np.array([1.0, -complex(s)]))
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    if float(np.max(np.abs(coeffs.imag))) > 1e-9 * scale:
        raise PolePlacementError(f"pole set {tuple(poles)!r} is not conjugate-closed")
    return coeffs.real


def place_integrator_chain(chain_order: int, input_gain: float, poles) -> np.ndarray:
    """Gain row stabilizing a pure integrator chain.

    chain_order   number of integrators (the chain's state dimension)
    input_gain    scalar b in w_k' = b u; must be nonzero
    poles         chain_order desired poles, strictly left half-plane

    Returns gains (k_1 ... k_k) on the chain states ordered most-integrated
    first, so that u = -sum k_j w_j gives the target polynomial exactly.
    """
    poles = _validate_pole_set("chain", tuple(poles))
    if len(poles) != chain_order:
        raise PoleCountMismatch(
            f"chain of order {chain_order} needs exactly {chain_order} poles, "
            f"got {len(poles)}"
        )
    if input_gain == 0.0 or not np.isfinite(input_gain):
        raise ZeroInputGain(f"input gain must be nonzero and finite, got {input_gain!r}")
    target = poles_to_monic(poles)  # [1, a1, ..., ak]
    return target[1:][::-1] / input_gain


def design_6dof_gains(p: QuadParams, spec: PoleSpec) -> GainMatrix:
    """4x12 feedback gain for the 6DOF model, one chain per input row.

    The pitch->x chain carries the -g tilt coupling, so its theta entries
    flip sign relative to the roll->y chain; the internal Hurwitz check at
    the end would catch any regression there.
    """
    validate(p)
    for name, need in (("z", 2), ("roll", 4), ("pitch", 4), ("yaw", 2)):
        got = len(getattr(spec, name))
        if got != need:
            raise PoleCountMismatch(f"6DOF {name} chain needs {need} poles, got {got}")

    model = build_6dof(p)
    K = np.zeros((4, 12))

    kz = place_integrator_chain(2, 1.0 / p.m, spec.z)
    K[0, 2], K[0, 5] = kz[0], kz[1]

    # roll->y chain in derivative coordinates (y, vy, g*phi, g*phi_dot)
    kr = place_integrator_chain(4, p.g / p.Ix, spec.roll)
    K[1, 1], K[1, 4] = kr[0], kr[1]
    K[1, 6], K[1, 9] = p.g * kr[2], p.g * kr[3]

    # pitch->x chain: x_ddot = -g*theta, hence the sign-flipped gain
    kp = place_integrator_chain(4, -p.g / p.Iy, spec.pitch)
    K[2, 0], K[2, 3] = kp[0], kp[1]
    K[2, 7], K[2, 10] = -p.g * kp[2], -p.g * kp[3]

    ky = place_integrator_chain(2, 1.0 / p.Iz, spec.yaw)
    K[3, 8], K[3, 11] = ky[0], ky[1]

    _check_closed_loop(model.A - model.B @ K)
    return GainMatrix(K, model.state_labels, model.input_labels)


def design_3dof_gains(p: QuadParams, spec: PoleSpec) -> GainMatrix:
    """4x6 feedback gain for the 3DOF model, in rotor-force input space.

    Each axis is placed as a 2nd-order chain in torque space; the torque
    rows are then mapped to the four rotor forces by the inverse mixing
    relations with zero net-thrust offset (the attitude states never see
    total thrust, so the offset is free and zero keeps gains small).
    """
    validate(p)
    for name in ("roll", "pitch", "yaw"):
        got = len(getattr(spec, name))
        if got != 2:
            raise PoleCountMismatch(f"3DOF {name} axis needs 2 poles, got {got}")

    model = build_3dof(p)
    Kt = np.zeros((3, 6))  # torque-space gains: rows (tau_x, tau_y, tau_z)
    kr = place_integrator_chain(2, 1.0 / p.Ix, spec.roll)
    Kt[0, 0], Kt[0, 3] = kr[0], kr[1]
    kp = place_integrator_chain(2, 1.0 / p.Iy, spec.pitch)
    Kt[1, 1], Kt[1, 4] = kp[0], kp[1]
    ky = place_integrator_chain(2, 1.0 / p.Iz, spec.yaw)
    Kt[2, 2], Kt[2, 5] = ky[0], ky[1]

    # forces realizing torques (tau_x, tau_y, tau_z) with zero added thrust
    torque_to_forces = np.array(
        [
            [0.0, 1.0 / (2.0 * p.d), -1.0 / (4.0 * p.c)],
            [1.0 / (2.0 * p.d), 0.0, 1.0 / (4.0 * p.c)],
            [0.0, -1.0 / (2.0 * p.d), -1.0 / (4.0 * p.c)],
            [-1.0 / (2.0 * p.d), 0.0, 1.0 / (4.0 * p.c)],
        ]
    )
    K = torque_to_forces @ Kt

    _check_closed_loop(model.A - model.B @ K)
    return GainMatrix(K, model.state_labels, model.input_labels)


def _check_closed_loop(a_closed: np.ndarray) -> None:
    if not is_hurwitz(char_poly(a_closed)):
        raise InternalStabilityCheckFailed(
            "synthesized closed loop is not Hurwitz; this indicates a defect "
            "in the chain/gain bookkeeping, not in the request"
        )
