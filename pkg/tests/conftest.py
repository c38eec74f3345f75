import pytest

from atomchip.config import ScenarioConfig
from atomchip.rydberg import CollectiveQubit, RydbergScalingModel, rydberg_level
from atomchip.species import load_species


@pytest.fixture(scope="session")
def rb87():
    return load_species("rb87")


@pytest.fixture(scope="session")
def scaling():
    return RydbergScalingModel.calibrated()


@pytest.fixture(scope="session")
def level100(scaling):
    return rydberg_level(scaling, 100)


@pytest.fixture(scope="session")
def qubit():
    return CollectiveQubit(500)


@pytest.fixture
def default_config():
    return ScenarioConfig.default()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
