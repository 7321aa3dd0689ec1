from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "exact",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("exact")

ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Lines of the form 'criterion N: PASS|FAIL ...', echoed in the terminal summary."""
    return ACCEPTANCE


@pytest.fixture(scope="session")
def default_reports():
    from p1cert.certificates import run_all

    return {r.id: r for r in run_all()}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
