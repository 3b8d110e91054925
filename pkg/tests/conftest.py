import functools

import pytest
from hypothesis import HealthCheck, settings

from bergman_lab.geometry import build_lattice

settings.register_profile("lab", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("lab")

# PASS/FAIL lines collected by the acceptance suite, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def lattice(r: float, r_max: float):
    return build_lattice(r, r_max)


@pytest.fixture(scope="session")
def lattice_1():
    return lattice(1.0, 0.999)


@pytest.fixture(scope="session")
def lattice_half():
    return lattice(0.5, 0.999)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
