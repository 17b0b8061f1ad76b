import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gridsens.casecli import fixture_path, load_acceptance  # noqa: E402
from gridsens.inverters import build_gfl_model, build_gfm_model, load_params  # noqa: E402
from gridsens.netgraph import grounded_laplacian, load_network  # noqa: E402

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def params():
    return load_params(fixture_path("table_a1.json"))


@pytest.fixture(scope="session")
def gfl_model(params):
    return build_gfl_model(params.filter, params.gfl)


@pytest.fixture(scope="session")
def gfm_model(params):
    return build_gfm_model(params.filter, params.gfm)


@pytest.fixture(scope="session")
def case_network():
    return load_network(fixture_path("three_inverter.json"))


@pytest.fixture(scope="session")
def case_b(case_network):
    return {k: grounded_laplacian(replace(case_network, k=k)) for k in (1.0, 0.1)}


@pytest.fixture(scope="session")
def acceptance():
    return load_acceptance()


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
