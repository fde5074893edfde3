"""Acceptance suite: the binding exit criteria, one test per criterion.

Each criterion prints a [PASS]/[FAIL] line (visible with ``pytest -s`` or
in captured output) and enforces its runtime budget. Oracles are
independent of the code paths they check: closed-form matrix entries,
hand-derived trajectories, numpy SVD ranks, and polynomial convolution.

Known red: criterion 6 demands the regulation transient reach 1e-3 of the
initial state norm by t = 5 s with every pole at -2. That closed loop
(chain-local gain rows, char poly (s+2)^12) is fully determined, and its
repeated-pole polynomial transients have only decayed to ~1.76e-2 by then;
the 1e-3 level is reached near t = 6.9 s. The assertion is kept at the
stated bound rather than silently relaxed, so it fails and documents the
gap; tests/test_stabilize.py pins the true decay against a
matrix-exponential oracle.
"""

import json
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

from quadmodel import (
    GeneralizedInput,
    PoleSpec,
    QuadParams,
    RotorForces,
    SimConfig,
    build_3dof,
    build_6dof,
    char_poly,
    controllability_matrix,
    controllability_rank,
    demix,
    design_6dof_gains,
    hover_thrust_per_rotor,
    is_hurwitz,
    mix,
    observability_rank,
    poles_to_monic,
    rk4_step,
    simulate,
    simulate_nonlinear,
    zoh_step,
)
from quadmodel.cli import main as cli_main
from quadmodel.linalg import StateSpaceModel
from util import assert_close

GOLDEN = Path(__file__).parent / "golden"

EXAMPLE = QuadParams(m=1.0, d=0.25, c=0.01, Ix=0.01, Iy=0.01, Iz=0.02, g=9.81)


@contextmanager
def criterion(name: str, budget_s: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name}")
        raise
    elapsed = time.perf_counter() - start
    print(f"[PASS] {name} ({elapsed:.2f}s, budget {budget_s:.0f}s)")
    assert elapsed < budget_s, f"{name}: {elapsed:.2f}s exceeded the {budget_s}s budget"


def random_params(rng) -> QuadParams:
    v = rng.uniform(0.05, 20.0, size=7)
    return QuadParams(m=v[0], d=v[1], c=v[2], Ix=v[3], Iy=v[4], Iz=v[5], g=v[6])


def expected_3dof(p):
    A = np.zeros((6, 6))
    A[0, 3] = A[1, 4] = A[2, 5] = 1.0
    B = np.zeros((6, 4))
    B[3, 1], B[3, 3] = p.d / p.Ix, -p.d / p.Ix
    B[4, 0], B[4, 2] = p.d / p.Iy, -p.d / p.Iy
    B[5] = [-p.c / p.Iz, p.c / p.Iz, -p.c / p.Iz, p.c / p.Iz]
    C = np.hstack([np.eye(3), np.zeros((3, 3))])
    return A, B, C, np.zeros((3, 4))


def expected_6dof(p):
    A = np.zeros((12, 12))
    A[0, 3] = A[1, 4] = A[2, 5] = 1.0
    A[3, 7], A[4, 6] = -p.g, p.g
    A[6, 9] = A[7, 10] = A[8, 11] = 1.0
    B = np.zeros((12, 4))
    B[5, 0] = 1.0 / p.m
    B[9, 1], B[10, 2], B[11, 3] = 1.0 / p.Ix, 1.0 / p.Iy, 1.0 / p.Iz
    C = np.eye(12)[[0, 1, 2, 6, 7, 8]]
    return A, B, C, np.zeros((6, 4))


def test_criterion_1_structural_fidelity():
    with criterion("1 structural fidelity (100 random parameter sets, bitwise)", 1.0):
        rng = np.random.default_rng(1001)
        for _ in range(100):
            p = random_params(rng)
            m3, m6 = build_3dof(p), build_6dof(p)
            for built, want in zip((m3.A, m3.B, m3.C, m3.D), expected_3dof(p)):
                assert np.array_equal(built, want)
            for built, want in zip((m6.A, m6.B, m6.C, m6.D), expected_6dof(p)):
                assert np.array_equal(built, want)


def test_criterion_2_nilpotency_suite():
    with criterion("2 nilpotency and open-loop spectrum", 1.0):
        a3 = build_3dof(EXAMPLE).A
        a6 = build_6dof(EXAMPLE).A
        assert np.max(np.abs(a3 @ a3)) <= 1e-12
        a6_cubed = a6 @ a6 @ a6
        assert np.max(np.abs(a6_cubed)) > 1e-12
        assert np.max(np.abs(a6_cubed @ a6)) <= 1e-12

        c3, c6 = char_poly(a3), char_poly(a6)
        assert c3[0] == 1.0 and np.max(np.abs(c3[1:])) <= 1e-12  # lambda^6
        assert c6[0] == 1.0 and np.max(np.abs(c6[1:])) <= 1e-12  # lambda^12
        assert not is_hurwitz(c3)
        assert not is_hurwitz(c6)


def test_criterion_3_mixer_round_trip():
    with criterion("3 mixer round trip (1000 random quadruples)", 1.0):
        rng = np.random.default_rng(1003)
        for _ in range(1000):
            p = random_params(rng)
            f = RotorForces(*rng.uniform(-8.0, 8.0, size=4))
            assert_close(demix(mix(f, p), p).as_tuple(), f.as_tuple(), rel=1e-12)
            u = GeneralizedInput(*rng.uniform(-8.0, 8.0, size=4))
            assert_close(mix(demix(u, p), p).as_tuple(), u.as_tuple(), rel=1e-12)
        h = hover_thrust_per_rotor(EXAMPLE)
        assert mix(RotorForces(h, h, h, h), EXAMPLE).as_tuple() == (0.0, 0.0, 0.0, 0.0)


def test_criterion_4_rk4_equals_exact():
    with criterion("4 RK4 equals exact ZOH step (1000 samples per model)", 1.0):
        rng = np.random.default_rng(1004)
        for model in (build_3dof(EXAMPLE), build_6dof(EXAMPLE)):
            for _ in range(1000):
                x = rng.uniform(-5.0, 5.0, size=model.n)
                u = rng.uniform(-5.0, 5.0, size=4)
                dt = rng.uniform(1e-4, 0.1)
                exact = zoh_step(model, x, u, dt)
                stepped = rk4_step(lambda t, xx: model.deriv(xx, u), x, 0.0, dt)
                assert_close(stepped, exact, rel=1e-12)


def test_criterion_5_rank_suite():
    with criterion("5 controllability/observability ranks", 2.0):
        rng = np.random.default_rng(1005)
        for _ in range(100):
            p = random_params(rng)
            m3, m6 = build_3dof(p), build_6dof(p)
            assert controllability_rank(m6) == 12
            assert observability_rank(m6) == 12
            assert controllability_rank(m3) == 6
            assert observability_rank(m3) == 6

        m6 = build_6dof(EXAMPLE)
        b = np.array(m6.B)
        b[:, 3] = 0.0  # lose the yaw torque input
        crippled = StateSpaceModel(
            A=m6.A, B=b, C=m6.C, D=m6.D,
            state_labels=m6.state_labels, input_labels=m6.input_labels,
            output_labels=m6.output_labels,
        )
        assert controllability_rank(crippled) == 10
        # independent oracle: SVD rank of the same Kalman matrix
        assert np.linalg.matrix_rank(controllability_matrix(crippled)) == 10


def test_criterion_6_closed_loop_regulation():
    with criterion("6 closed-loop regulation, poles at -2", 5.0):
        m = build_6dof(EXAMPLE)
        gains = design_6dof_gains(EXAMPLE, PoleSpec.uniform_6dof(-2.0))
        achieved = char_poly(m.A - m.B @ gains.K)
        target = poles_to_monic([-2.0] * 12)  # (s+2)^12 via convolution oracle
        np.testing.assert_allclose(achieved, target, rtol=1e-8)

        x0 = np.zeros(12)
        x0[0] = x0[1] = x0[2] = 0.5
        x0[6] = x0[7] = 0.05
        traj = simulate(m, x0, lambda t, x: gains.feedback_input(x),
                        SimConfig(t_final=5.0, dt=0.001))
        ratio = np.linalg.norm(traj.states[-1]) / np.linalg.norm(x0)
        assert ratio < 1e-3, (
            f"state norm ratio at t=5s is {ratio:.4e}, bound 1e-3: the specified "
            f"closed loop (chain gains, all poles -2) is fully determined and its "
            f"repeated-pole transients only reach 1e-3 near t=7s"
        )


def test_criterion_7_linearization_validity():
    with criterion("7 linearization validity (RK4 reference at dt=0.1ms)", 10.0):
        m = build_6dof(EXAMPLE)
        h = hover_thrust_per_rotor(EXAMPLE)
        hover = RotorForces(h, h, h, h)
        dt = 1e-4

        def run_pair(theta0):
            x0 = np.zeros(12)
            x0[7] = theta0
            lin = simulate(m, x0, lambda t, x: np.zeros(4),
                           SimConfig(t_final=1.0, dt=dt))
            cfg = SimConfig(t_final=1.0, dt=dt, integrator="rk4",
                            plant="nonlinear_6dof")
            nl = simulate_nonlinear(EXAMPLE, x0, lambda t, x: hover, cfg)
            return lin.states[:, 0], nl.states[:, 0]

        lin_x, nl_x = run_pair(0.05)
        assert np.all(np.abs(nl_x - lin_x) <= 0.05 * np.abs(lin_x) + 1e-6)

        lin_x, nl_x = run_pair(0.4)
        assert abs(nl_x[-1] - lin_x[-1]) > 0.01 * abs(lin_x[-1])


def test_criterion_8_cli_conformance(capsys, tmp_path):
    with criterion("8 CLI conformance (golden files, CSV shape, exit codes)", 5.0):
        params_path = tmp_path / "params.json"
        params_path.write_text(json.dumps({
            "m": 1.0, "d": 0.25, "c": 0.01,
            "Ix": 0.01, "Iy": 0.01, "Iz": 0.02, "g": 9.81,
        }), encoding="utf-8")

        for dof, golden in ((3, "model_3dof.json"), (6, "model_6dof.json")):
            code = cli_main(["model", "--dof", str(dof), "--params", str(params_path),
                             "--format", "json"])
            out = capsys.readouterr().out
            assert code == 0
            assert out == (GOLDEN / golden).read_text(encoding="utf-8")

        csv_path = tmp_path / "traj.csv"
        code = cli_main(["sim", "--dof", "6", "--params", str(params_path),
                         "--x0", "theta=0.01", "--t-final", "1", "--dt", "0.001",
                         "--out", str(csv_path)])
        capsys.readouterr()
        assert code == 0
        lines = csv_path.read_text(encoding="utf-8").split("\n")
        assert lines[0].split(",") == ["t"] + list(build_6dof(EXAMPLE).state_labels) \
            + list(build_6dof(EXAMPLE).input_labels)
        assert len(lines) == 1 + 1001 + 1  # header + samples + trailing newline
        final = [float(v) for v in lines[-2].split(",")]
        assert final[1] == pytest.approx(-0.04905, abs=1e-12)

        code = cli_main(["model", "--dof", "6", "--params", str(tmp_path / "missing.json")])
        captured = capsys.readouterr()
        assert code == 2 and captured.out == "" and captured.err.strip()

        bad_path = tmp_path / "bad.json"
        bad_path.write_text(json.dumps({"m": -1, "d": 0.25, "c": 0.01,
                                        "Ix": 0.01, "Iy": 0.01, "Iz": 0.02}))
        code = cli_main(["model", "--dof", "6", "--params", str(bad_path)])
        captured = capsys.readouterr()
        assert code == 3 and captured.out == ""

        unknown_path = tmp_path / "unknown.json"
        unknown_path.write_text(json.dumps({"m": 1, "d": 0.25, "c": 0.01,
                                            "Ix": 0.01, "Iy": 0.01, "Iz": 0.02,
                                            "q": 7}))
        code = cli_main(["model", "--dof", "6", "--params", str(unknown_path)])
        captured = capsys.readouterr()
        assert code == 2 and captured.out == ""
