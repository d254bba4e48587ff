import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_AC = re.compile(r"test_acceptance\.py::test_ac(\d+)_")
_results: dict[int, bool] = {}


def pytest_runtest_logreport(report):
    m = _AC.search(report.nodeid)
    if m is None:
        return
    n = int(m.group(1))
    failed = report.failed or (report.when == "call" and report.skipped)
    _results[n] = _results.get(n, True) and not failed


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        terminalreporter.write_line(f"AC{n} {'PASS' if _results[n] else 'FAIL'}")
