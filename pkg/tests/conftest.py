import json

import pytest

from quadmodel import QuadParams

EXAMPLE_PARAMS = {
    "m": 1.0, "d": 0.25, "c": 0.01,
    "Ix": 0.01, "Iy": 0.01, "Iz": 0.02, "g": 9.81,
}


@pytest.fixture
def params():
    return QuadParams(**EXAMPLE_PARAMS)


@pytest.fixture
def params_file(tmp_path):
    path = tmp_path / "params.json"
    path.write_text(json.dumps(EXAMPLE_PARAMS), encoding="utf-8")
    return str(path)
