import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_results: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


def pytest_runtest_makereport(item, call):
    m = item.get_closest_marker("criterion")
    if m is None or call.when != "call":
        return
    n, title = m.args
    ok = call.excinfo is None
    _results[n] = (title, ok, call.duration)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        title, ok, dur = _results[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}  ({dur:.1f} s)")
