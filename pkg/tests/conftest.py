"""Shared fixtures and the acceptance-summary reporter.

The terminal-summary hook prints one PASS/FAIL line per acceptance
criterion after the run, aggregating every test named
``test_criterion_<n>_*`` in tests/test_acceptance.py.
"""

from __future__ import annotations

import re

import pytest

from sirjump import EpidemicParams, IntegratorConfig, JumpMeasure, SirState

_CRITERION = re.compile(r"test_criterion_(\d+)")

_CRITERION_TITLES = {
    1: "deterministic threshold psi0",
    2: "jump-corrected psi via documented override",
    3: "persistence limits with flagged reference discrepancy",
    4: "DFE spectrum",
    5: "extinction dynamics ensemble",
    6: "persistence dynamics ensemble",
    7: "invariant suites",
    8: "monotonicity sweeps",
}


@pytest.fixture
def base_params() -> EpidemicParams:
    return EpidemicParams(theta=0.0073, xi=0.003, eta=0.001, rho=0.01, gamma=0.02)


@pytest.fixture
def persistence_params() -> EpidemicParams:
    return EpidemicParams(theta=0.0073, xi=0.0033, eta=0.001, rho=0.01, gamma=0.02)


@pytest.fixture
def base_measure() -> JumpMeasure:
    return JumpMeasure.single(0.001, 1.0)


@pytest.fixture
def base_initial() -> SirState:
    return SirState(7.1, 0.2, 0.0)


@pytest.fixture
def quick_config() -> IntegratorConfig:
    return IntegratorConfig(dt=0.1, t_end=5.0, record_every=1)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes: dict[int, bool] = {}
    for status, ok in (("passed", True), ("failed", False), ("error", False)):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            match = _CRITERION.search(nodeid)
            if not match:
                continue
            n = int(match.group(1))
            outcomes[n] = outcomes.get(n, True) and ok
    if not outcomes:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria summary")
    for n in sorted(outcomes):
        verdict = "PASS" if outcomes[n] else "FAIL"
        title = _CRITERION_TITLES.get(n, "")
        terminalreporter.write_line(f"ACCEPTANCE C{n}: {verdict} — {title}")
