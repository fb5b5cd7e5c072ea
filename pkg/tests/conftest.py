from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from fl0unify.frontend import parse_file

DATA = Path(__file__).parent / "data"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def data():
    return DATA


@pytest.fixture
def running_example():
    return parse_file(DATA / "running_example.flu")


# one line per acceptance criterion, printed in the terminal summary
CRITERIA: dict = {}


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    CRITERIA[number] = (title, ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        title, ok, detail = CRITERIA[n]
        line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
