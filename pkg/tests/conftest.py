import pytest

from koszulate.fields import DEFAULT_PRIME, FieldConfig


@pytest.fixture
def QQ():
    return FieldConfig.rational()


@pytest.fixture
def big():
    return FieldConfig.prime(DEFAULT_PRIME)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
