import pytest

_RESULTS = []


class Criterion:
    def __init__(self, number, title):
        self.number = number
        self.title = title
        self.detail = ""
        self.elapsed = None
        self.passed = False


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; the terminal summary prints a pass/fail line for each."""
    marker = request.node.get_closest_marker("criterion")
    c = Criterion(*marker.args)
    yield c
    rep = getattr(request.node, "rep_call", None)
    c.passed = rep is not None and rep.passed
    _RESULTS.append(c)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(_RESULTS, key=lambda c: c.number):
        t = "" if c.elapsed is None else f" [{c.elapsed:.2f} s]"
        terminalreporter.write_line(f"{'PASS' if c.passed else 'FAIL'}  {c.number:>2}. {c.title}{t}  {c.detail}")
