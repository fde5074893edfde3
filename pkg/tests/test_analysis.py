import numpy as np
from hypothesis import given

from quadmodel import (
    MARGINAL_OR_UNSTABLE,
    STRICTLY_STABLE,
    StateSpaceModel,
    analyze,
    build_3dof,
    build_6dof,
    controllability_matrix,
    controllability_rank,
    observability_matrix,
    observability_rank,
)
from util import quad_params


def _with_matrices(m, A=None, B=None, C=None):
    return StateSpaceModel(
        A=m.A if A is None else A,
        B=m.B if B is None else B,
        C=m.C if C is None else C,
        D=m.D,
        state_labels=m.state_labels,
        input_labels=m.input_labels,
        output_labels=m.output_labels,
    )


def test_full_rank_for_example_params(params):
    m3, m6 = build_3dof(params), build_6dof(params)
    assert controllability_rank(m6) == 12
    assert observability_rank(m6) == 12
    assert controllability_rank(m3) == 6
    assert observability_rank(m3) == 6
    # numpy's SVD rank on the same Kalman matrices as independent oracle
    assert np.linalg.matrix_rank(controllability_matrix(m6)) == 12
    assert np.linalg.matrix_rank(observability_matrix(m6)) == 12


@given(p=quad_params)
def test_full_rank_for_random_params(p):
    m3, m6 = build_3dof(p), build_6dof(p)
    assert controllability_rank(m6) == observability_rank(m6) == 12
    assert controllability_rank(m3) == observability_rank(m3) == 6


def test_zero_input_matrix_gives_rank_zero(params):
    m = build_6dof(params)
    assert controllability_rank(_with_matrices(m, B=np.zeros((12, 4)))) == 0


def test_full_state_measurement_gives_rank_n(params):
    m = build_6dof(params)
    full = StateSpaceModel(
        A=m.A, B=m.B, C=np.eye(12), D=np.zeros((12, 4)),
        state_labels=m.state_labels, input_labels=m.input_labels,
        output_labels=m.state_labels,
    )
    assert observability_rank(full) == 12


def test_losing_yaw_input_drops_rank_to_ten(params):
    m = build_6dof(params)
    b = np.array(m.B)
    b[:, 3] = 0.0
    crippled = _with_matrices(m, B=b)
    assert controllability_rank(crippled) == 10
    assert np.linalg.matrix_rank(controllability_matrix(crippled)) == 10


def test_position_only_measurement_loses_yaw(params):
    # positions alone recover velocities and tilt through the dynamics,
    # but nothing feeds back from psi: rank drops by exactly 2
    m = build_6dof(params)
    c = np.array(m.C)
    c[3:, :] = 0.0
    assert observability_rank(_with_matrices(m, C=c)) == 10


def test_rank_invariant_under_column_rescaling(params):
    m = build_6dof(params)
    scaled = _with_matrices(m, B=np.array(m.B) * np.array([3.0, 0.25, 40.0, 1e3]))
    assert controllability_rank(scaled) == 12


def test_analyze_6dof(params):
    rep = analyze(build_6dof(params))
    assert rep.controllability_rank == 12
    assert rep.observability_rank == 12
    assert rep.is_controllable and rep.is_observable
    assert rep.stability_class == MARGINAL_OR_UNSTABLE
    assert rep.nilpotency_index == 4
    poly = np.asarray(rep.open_loop_char_poly)
    assert poly[0] == 1.0 and np.max(np.abs(poly[1:])) <= 1e-12


def test_analyze_3dof(params):
    rep = analyze(build_3dof(params))
    assert rep.controllability_rank == rep.observability_rank == 6
    assert rep.stability_class == MARGINAL_OR_UNSTABLE
    assert rep.nilpotency_index == 2


def test_analyze_stable_toy_system():
    toy = StateSpaceModel(
        A=-np.eye(2), B=np.eye(2), C=np.eye(2), D=np.zeros((2, 2)),
        state_labels=("a", "b"), input_labels=("u1", "u2"), output_labels=("a", "b"),
    )
    rep = analyze(toy)
    assert rep.stability_class == STRICTLY_STABLE
    assert rep.is_controllable and rep.is_observable
    assert rep.nilpotency_index is None


@given(p=quad_params)
def test_paper_models_are_never_strictly_stable(p):
    assert analyze(build_3dof(p)).stability_class == MARGINAL_OR_UNSTABLE
    assert analyze(build_6dof(p)).stability_class == MARGINAL_OR_UNSTABLE
