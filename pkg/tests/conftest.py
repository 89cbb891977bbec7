import sys

import pytest

from ffsga import _pykernels
from ffsga.instance_gen import GenParams, generate
from ffsga.kernels import compiled
from ffsga.model import Instance

BACKENDS = [pytest.param(_pykernels, id="python")]
if compiled() is not None:
    BACKENDS.append(pytest.param(compiled(), id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def hand_instance() -> Instance:
    """Two jobs, two stages; stage 0 has two machines, stage 1 has one."""
    return Instance.from_lists(
        machines_per_stage=[2, 1],
        proc_time=[[[2, 3], [4]], [[2, 3], [1]]],
        release=[0, 0],
        due=[10, 10],
        weight=100,
    )


@pytest.fixture
def small_instance() -> Instance:
    return generate(GenParams(8, 3, (2, 3, 2), seed=11))


@pytest.fixture
def medium_instance() -> Instance:
    return generate(GenParams(20, 4, seed=5))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
