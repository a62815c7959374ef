import numpy as np
import pytest

from boussinesq_dei import kernels
from boussinesq_dei.grid import TorusGrid


def naive_dft(values, a, b):
    """Direct O(M^2) sum c_l = (1/M) sum_j v_j exp(-i mu_l (x_j - a)), signed order."""
    M = len(values)
    h = (b - a) / M
    out = []
    for l in range(-M // 2, M // 2):
        mu = 2 * np.pi * l / (b - a)
        acc = 0j
        for j in range(M):
            acc += values[j] * np.exp(-1j * mu * (j * h))
        out.append(acc / M)
    return np.array(out)


@pytest.fixture
def soliton_grid():
    return TorusGrid(-60.0, 60.0, 32)


@pytest.fixture(params=kernels.available_backends())
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    impl = kernels.load_backend(request.param)
    for name in ("advance_position", "advance_velocity", "rk4_reference"):
        monkeypatch.setattr(kernels, name, getattr(impl, name))
    return request.param


#: "criterion N: PASS/FAIL ..." lines collected by the acceptance suite
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
