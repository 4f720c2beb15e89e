import time

import numpy as np
import pytest

from ffmfg.core import SimConfig, make_grid
from ffmfg.models import QQ
from ffmfg.parabolic import evolve_viscous

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def v_wave(x):
    return 0.3 * np.sin(2 * np.pi * x)


def m_wave(x):
    return 1 + 0.3 * np.cos(2 * np.pi * x)


@pytest.fixture(scope="session")
def long_viscous_timed():
    """eps = 0.05, N = 256, t_end = 50 from the standard centered data, with wall time."""
    config = SimConfig(QQ, make_grid(256), 50.0, v0=v_wave, m0=m_wave, epsilon=0.05,
                       snapshot_interval=0.5)
    start = time.perf_counter()
    trajectory = evolve_viscous(config)
    return trajectory, time.perf_counter() - start


@pytest.fixture(scope="session")
def long_viscous_run(long_viscous_timed):
    return long_viscous_timed[0]


@pytest.fixture
def rng():
    return np.random.default_rng(20161014)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
