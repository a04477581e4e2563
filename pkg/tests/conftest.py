import pytest

from dwcalc.groups import build_group

GROUP_NAMES = ("Z2", "Z3", "Z4", "Z2xZ2", "S3")

# acceptance criterion number -> (status, detail), printed after the run
ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def groups():
    return {name: build_group(name) for name in GROUP_NAMES}


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {status}  {detail}")
