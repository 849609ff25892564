import itertools
import sys
import math

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

SQ2 = math.sqrt(2)


def brute_alignment(a, b):
    """Max over permutations of sum a[i] * b[perm(i)], both zero-padded to equal length."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    n = max(a.size, b.size)
    x = np.zeros(n)
    y = np.zeros(n)
    x[: a.size] = a
    y[: b.size] = b
    return max(float(np.dot(x, y[list(p)])) for p in itertools.permutations(range(n)))


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
