import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("repo", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

DATA = Path(__file__).resolve().parents[1] / "src" / "sgbraid" / "data"

# lines recorded by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def data_dir() -> Path:
    return DATA


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
