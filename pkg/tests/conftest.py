import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", max_examples=40, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(n, title, checks)``, checks = [(label, ok, detail)]."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number: int, title: str, checks):
        ok = all(c[1] for c in checks)
        detail = "; ".join(f"{label}: {'ok' if good else 'FAIL'} ({info})" for label, good, info in checks)
        line = f"criterion {number} {'PASS' if ok else 'FAIL'} - {title} | {detail}"
        print(line)
        lines.append(line)
        failing = [f"{label} ({info})" for label, good, info in checks if not good]
        assert ok, "failed sub-checks: " + "; ".join(failing)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
