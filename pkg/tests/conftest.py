import numpy as np
import pytest

from irep.groups import make_cyclic_group, make_torus_group


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def z8():
    return make_cyclic_group(8)


@pytest.fixture(scope="session")
def z16():
    return make_cyclic_group(16)


@pytest.fixture(scope="session")
def torus4():
    return make_torus_group(4)


_criteria = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_criteria] = []


@pytest.fixture
def report_criterion(request):
    """Record one acceptance line; all lines are printed in the terminal summary."""
    def record(number, title, passed, detail):
        line = f"criterion {number:>2} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
        request.config.stash[_criteria].append((number, line))
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[_criteria]
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
