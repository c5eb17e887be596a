import numpy as np
import pytest

from logharm.fixtures import EXAMPLE1, EXAMPLE2, example_map, example_series, random_instances
from logharm.grid import disk_grid


@pytest.fixture(scope="session")
def ex1():
    return example_series(EXAMPLE1)


@pytest.fixture(scope="session")
def ex2():
    return example_series(EXAMPLE2)


@pytest.fixture(scope="session")
def ex1_map():
    return example_map(EXAMPLE1)


@pytest.fixture(scope="session")
def ex2_map():
    return example_map(EXAMPLE2)


@pytest.fixture(scope="session")
def instances():
    return random_instances(12)


@pytest.fixture(scope="session")
def instance_maps(instances):
    return [inst.map() for inst in instances]


@pytest.fixture
def grid():
    return disk_grid()


@pytest.fixture
def inner_grid():
    return disk_grid(tuple(np.round(np.arange(1, 8) / 10, 1)))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
