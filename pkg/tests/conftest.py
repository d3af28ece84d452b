import numpy as np
import pytest

ACCEPTANCE_LINES: list = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_state(rng, d=2):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def comm(a, b):
    return a @ b - b @ a


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
