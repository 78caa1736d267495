import numpy as np
import pytest

from stacknas import _backend

BACKENDS = ["python"]
try:
    _backend.get_kernels("cython")
except ImportError:
    pass
else:
    BACKENDS.append("cython")


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[number])
