import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from avf_maxwell.grid import EMState, cube_grid

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

_CRITERIA: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    label = dict(report.user_properties).get("criterion")
    if label is None:
        return
    _CRITERIA[report.nodeid] = (label, "PASS" if report.passed else "FAIL")


def pytest_runtest_setup(item):
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        item.user_properties.append(("criterion", mark.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    merged: dict[str, str] = {}
    for label, status in _CRITERIA.values():
        if merged.get(label) != "FAIL":
            merged[label] = status
    terminalreporter.section("acceptance criteria")
    for label in sorted(merged):
        terminalreporter.write_line(f"{merged[label]}  {label}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_state(grid, rng, eps=1.0, mu=1.0):
    shape = (3,) + grid.shape
    return EMState(grid, rng.standard_normal(shape), rng.standard_normal(shape), 0.0, eps, mu)


@pytest.fixture
def grid4():
    return cube_grid(0.0, 2.0, 4)
