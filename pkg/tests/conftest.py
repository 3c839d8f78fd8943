import pytest

from _helpers import SEED

# criterion id -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_report_header(config):
    return f"PWS_SOLVE_SEED={SEED}"


@pytest.fixture
def record():
    def _record(ac: str, passed: bool, detail: str = ""):
        ACCEPTANCE[ac] = (bool(passed), detail)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for ac in sorted(ACCEPTANCE, key=lambda s: int(s[2:])):
        ok, detail = ACCEPTANCE[ac]
        terminalreporter.write_line(f"{ac}: {'PASS' if ok else 'FAIL'}  {detail}")
