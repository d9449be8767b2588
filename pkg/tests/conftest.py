import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from toriheights.fanfile import SHIPPED, load_fan_file  # noqa: E402


@pytest.fixture(scope="session")
def shipped():
    return {name: load_fan_file(name) for name in SHIPPED}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
