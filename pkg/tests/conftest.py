import numpy as np
import pytest

from compact_rcs import kernels
from compact_rcs.scatter import (ChamberArtifacts, ScanGeometry, ScatteringCenter, SweepConfig,
                                 TargetModel)

BACKENDS = kernels.available_backends()


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    return BACKENDS[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def three_center_target():
    return TargetModel(
        (ScatteringCenter(0.05, (0.10, 0.00)),
         ScatteringCenter(0.03, (-0.12, 0.08)),
         ScatteringCenter(0.02, (0.02, -0.15))),
        name="three-center",
    )


@pytest.fixture
def geometry():
    return ScanGeometry()


@pytest.fixture
def sweep_config():
    return SweepConfig(24e9, 26e9, 401)


@pytest.fixture
def quiet_chamber():
    return ChamberArtifacts()


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = {}


@pytest.fixture
def acceptance():
    def record(number, passed, detail):
        ACCEPTANCE_LINES[number] = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
