import math
import sys

import numpy as np
import pytest

from surface_identities.geometry import Disk


def sample_uv(chart, n, rng, margin=1e-3):
    """Uniform random parameter points, kept ``margin`` away from the domain edge."""
    d = chart.domain
    if isinstance(d, Disk):
        r = (d.radius - margin) * np.sqrt(rng.uniform(0, 1, n))
        a = rng.uniform(0, 2 * math.pi, n)
        return np.stack([d.center[0] + r * np.cos(a), d.center[1] + r * np.sin(a)], axis=-1)
    u = rng.uniform(d.u_min + margin, d.u_max - margin, n)
    v = rng.uniform(d.v_min + margin, d.v_max - margin, n)
    return np.stack([u, v], axis=-1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
