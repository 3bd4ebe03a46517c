import pytest

# criterion number -> list of (sub-check, ok, detail)
RESULTS: dict = {}


class Recorder:
    def __init__(self, number):
        self.number = number

    def check(self, name, ok, detail=""):
        RESULTS.setdefault(self.number, []).append((name, bool(ok), detail))
        print(f"criterion {self.number} [{name}]: {'PASS' if ok else 'FAIL'} {detail}")
        return ok


@pytest.fixture
def criterion():
    return Recorder


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in range(1, 15):
        checks = RESULTS.get(n)
        if not checks:
            tr.write_line(f"criterion {n}: NOT RUN")
            continue
        ok = all(c[1] for c in checks)
        failed = [c[0] for c in checks if not c[1]]
        note = f" (failed: {', '.join(failed)})" if failed else ""
        tr.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}{note}")
        for name, good, detail in checks:
            tr.write_line(f"    {'ok  ' if good else 'FAIL'} {name}: {detail}")
