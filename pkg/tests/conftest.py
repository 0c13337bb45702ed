import sys

import numpy as np
import pytest

from saitoh_lab.geometry import Annulus, Disk, ProductDomain


@pytest.fixture
def disk1():
    return ProductDomain((Disk(0, 1),), (0,))


@pytest.fixture
def bidisc():
    return ProductDomain((Disk(0, 1), Disk(0, 1)), (0, 0))


@pytest.fixture
def annulus07():
    return ProductDomain((Annulus(0, 0.5, 1.0),), (0.7,))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "VERDICTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
