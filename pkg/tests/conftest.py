import numpy as np
import pytest
from hypothesis import settings

from stator_gates.rng import SplitMix64

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Lines shown in the terminal summary whether or not output is captured."""
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return SplitMix64(42)


def brute_partial_trace(amps, n, keep):
    """Element-by-element partial trace; independent of the reshape path."""
    k = len(keep)
    rho = np.zeros((2**k, 2**k), dtype=complex)
    for i in range(2**n):
        for j in range(2**n):
            bi = [(i >> (n - 1 - q)) & 1 for q in range(n)]
            bj = [(j >> (n - 1 - q)) & 1 for q in range(n)]
            if any(bi[q] != bj[q] for q in range(n) if q not in keep):
                continue
            r = int("".join(str(bi[q]) for q in keep), 2)
            c = int("".join(str(bj[q]) for q in keep), 2)
            rho[r, c] += amps[i] * np.conj(amps[j])
    return rho
