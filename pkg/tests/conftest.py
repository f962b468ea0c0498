import sys
import numpy as np
import pytest

from gbk.grassmann import GrassmannPoint
from gbk.region import RegionSpec


def standard_pair(n, m):
    """P = e_1 ^ ... ^ e_n and Q = e_{n+1} ^ e_2 ^ ... ^ e_n."""
    p = GrassmannPoint.coordinate(n, m)
    q = GrassmannPoint.coordinate(n, m, [n] + list(range(1, n)))
    return p, q


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def spec():
    p, q = standard_pair(3, 2)
    return RegionSpec.from_points(p, q, 0.4, 0.05)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
