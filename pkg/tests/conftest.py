import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from catoshadow.weyl import weyl_group  # noqa: E402

# criterion number -> (passed, message); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(params=["A1", "A2", "B2", "A3"])
def small_group(request):
    return weyl_group(request.param)


@pytest.fixture
def record_criterion():
    def record(number: int, passed: bool, message: str) -> None:
        ACCEPTANCE[number] = (passed, message)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        passed, msg = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if passed else 'FAIL'}  {msg}")
