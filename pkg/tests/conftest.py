import pytest

_VERDICTS = []


class Verdicts:
    """Records one PASS/FAIL/SKIP line per acceptance criterion."""

    def check(self, name, ok, detail=""):
        _VERDICTS.append(("PASS" if ok else "FAIL", name, detail))
        assert ok, f"{name}: {detail}"

    def skip(self, name, reason):
        _VERDICTS.append(("SKIP", name, reason))
        pytest.skip(reason)


@pytest.fixture(scope="session")
def verdicts():
    return Verdicts()


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, detail in _VERDICTS:
        terminalreporter.write_line(f"{status}  {name}" + (f"  ({detail})" if detail else ""))
