import math

import numpy as np
import pytest

from qflow.geometry import SphericalPoint

ACCEPTANCE_LINES: list[str] = []


def sample_points(n, seed=0, r_range=(0.1, 10.0), margin=1e-3, avoid=None):
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < n:
        p = SphericalPoint(
            float(rng.uniform(*r_range)),
            float(rng.uniform(margin, math.pi - margin)),
            float(rng.uniform(0.0, 2.0 * math.pi)),
        )
        if avoid is None or not avoid(p):
            pts.append(p)
    return pts


@pytest.fixture
def points():
    return sample_points


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
