import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("lrberry", deadline=None, max_examples=25, derandomize=True)
settings.load_profile("lrberry")


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


_LOG = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LOG] = []


@pytest.fixture
def criterion(request):
    """Call with (number, ok, detail); the line is printed now and in the summary."""
    lines = request.config.stash[_LOG]

    def record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}"
        lines.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LOG, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
