import pytest

# Acceptance tests append (criterion, passed, detail) here; the summary hook prints them.
ACCEPTANCE_LINES: list[tuple[int, bool, str]] = []


@pytest.fixture
def record_criterion():
    def record(number: int, checks: list[tuple[str, bool]]) -> bool:
        ok = all(passed for _, passed in checks)
        detail = "; ".join(f"{'ok' if passed else 'MISS'} {text}" for text, passed in checks)
        ACCEPTANCE_LINES.append((number, ok, detail))
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
