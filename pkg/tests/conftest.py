"""Prints one PASS/FAIL line per acceptance criterion after the run."""

import pytest

_lines = []


@pytest.fixture
def detail(request):
    """Call with a short measurement string; it is shown next to the verdict."""
    def note(text):
        request.node.user_properties.append(("detail", text))
    return note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if item.module.__name__ != "test_acceptance" or report.when != "call":
        return
    name = (item.function.__doc__ or item.name).strip().splitlines()[0]
    notes = "; ".join(v for k, v in item.user_properties if k == "detail")
    verdict = "PASS" if report.passed else "FAIL"
    _lines.append(f"{verdict}  {name}" + (f"  [{notes}]" if notes else ""))


def pytest_terminal_summary(terminalreporter):
    if _lines:
        terminalreporter.section("acceptance criteria")
        for line in _lines:
            terminalreporter.write_line(line)
