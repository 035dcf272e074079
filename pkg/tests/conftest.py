import numpy as np
import pytest

from microqreg.trap_physics import load_species


@pytest.fixture(scope="session")
def rb85():
    return load_species("Rb85")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import report_lines
    except ImportError:
        return
    lines = report_lines()
    if any("NOT RUN" not in line for line in lines):
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
