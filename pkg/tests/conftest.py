import numpy as np
import pytest

from uavmeta.model import SimControls, baseline_params


@pytest.fixture
def params():
    return baseline_params(h=100.0, eps_scale=1.0)


@pytest.fixture
def controls():
    return SimControls(seed=2024, n_realizations=2000, n_fading=500)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(label, passed, detail)."""
    def record(label, passed, detail=""):
        _ACCEPTANCE.append((label, bool(passed), detail))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {label}: {detail}")
