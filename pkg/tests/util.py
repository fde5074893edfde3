"""Shared test helpers: vector-scale-relative comparison and hypothesis
strategies for physical parameters and force quadruples."""

import numpy as np
from hypothesis import strategies as st

from quadmodel import QuadParams, RotorForces


def assert_close(actual, expected, rel=1e-12, floor=1.0):
    """Assert max|actual - expected| <= rel * max(floor, max|expected|).

    Relative to the vector's scale, not per component: the quantities here
    (forces, states) are vectors whose near-zero components would make a
    per-component relative test meaninglessly strict.
    """
    a = np.asarray(actual, dtype=float)
    e = np.asarray(expected, dtype=float)
    scale = max(floor, float(np.max(np.abs(e))) if e.size else floor)
    err = float(np.max(np.abs(a - e))) if a.size else 0.0
    assert err <= rel * scale, f"max err {err:.3e} > {rel:.0e} * scale {scale:.3e}"


finite_floats = st.floats(allow_nan=False, allow_infinity=False, width=64)

positive_params = st.floats(min_value=0.05, max_value=20.0, allow_nan=False)

quad_params = st.builds(
    QuadParams,
    m=positive_params,
    d=positive_params,
    c=positive_params,
    Ix=positive_params,
    Iy=positive_params,
    Iz=positive_params,
    g=positive_params,
)

force_component = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)

rotor_forces = st.builds(
    RotorForces, f1=force_component, f2=force_component,
    f3=force_component, f4=force_component,
)
