import numpy as np
import pytest

from treegrower import GrowthModel, Operator, SeedSpec, grow, resolve_seed

ACCEPTANCE_LINES: list[str] = []


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow Monte Carlo checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="slow; enable with --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def edge():
    return resolve_seed(SeedSpec("edge"))


@pytest.fixture(scope="session")
def path3():
    return resolve_seed(SeedSpec("path", m=3))


@pytest.fixture(scope="session")
def star5():
    return resolve_seed(SeedSpec("star", m=5))


@pytest.fixture(scope="session")
def phi_edge():
    """grow(PHI, EDGE, t) for t = 0..7, built once."""
    return {t: grow(GrowthModel(Operator.PHI, t)) for t in range(8)}


@pytest.fixture(scope="session")
def star_edge():
    return {t: grow(GrowthModel(Operator.PHI_STAR, t)) for t in range(8)}


@pytest.fixture
def rng():
    return np.random.default_rng(20201)
