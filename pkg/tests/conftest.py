import numpy as np
import pytest

from irs_sense.rng import substream


@pytest.fixture
def rng():
    return substream(12345, 0)


@pytest.fixture
def rng_factory():
    def make(*key):
        return substream(12345, *key)

    return make


ACCEPTANCE_LOG = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)
