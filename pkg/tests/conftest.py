"""Shared fixtures: expensive Monte Carlo sample sets are built once per
session and their build times recorded so the acceptance tests can account
runtime honestly."""

from __future__ import annotations

import time

import pytest

from mmwcov import load_preset, simulate_samples

ACCEPTANCE_SEED = 20240817
SIM_BUILD_SECONDS: dict[str, float] = {}
_ACCEPTANCE_OUTCOMES: dict[str, str] = {}


def _timed_samples(key: str, scenario, n: int):
    start = time.perf_counter()
    samples = simulate_samples(scenario, n, ACCEPTANCE_SEED)
    SIM_BUILD_SECONDS[key] = time.perf_counter() - start
    return samples


@pytest.fixture(scope="session")
def mc28_rc100():
    return _timed_samples("rc100", load_preset("mmwave-28", cell_radius_m=100.0), 100_000)


@pytest.fixture(scope="session")
def mc28_rc200():
    return _timed_samples("rc200", load_preset("mmwave-28", cell_radius_m=200.0), 100_000)


@pytest.fixture(scope="session")
def mc28_rc50():
    return _timed_samples("rc50", load_preset("mmwave-28", cell_radius_m=50.0), 100_000)


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _ACCEPTANCE_OUTCOMES[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_OUTCOMES:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for nodeid in sorted(_ACCEPTANCE_OUTCOMES):
        outcome = _ACCEPTANCE_OUTCOMES[nodeid]
        label = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{label}] {nodeid.split('::')[-1]}")
