import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import DATA, DeadTransport, ReplayTransport  # noqa: E402

from answergrader.config import GradingConfig  # noqa: E402
from answergrader.linguistic import SpellingDictionary  # noqa: E402
from answergrader.sources import MediaWikiClient, ReferenceCache  # noqa: E402


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def replay():
    return ReplayTransport()


@pytest.fixture
def dead():
    return DeadTransport()


@pytest.fixture
def cache(tmp_path):
    return ReferenceCache(tmp_path / "cache")


@pytest.fixture
def make_client(cache):
    def _make(transport, **kwargs):
        kwargs.setdefault("min_interval", 0.0)
        return MediaWikiClient(cache=cache, transport=transport, **kwargs)

    return _make


@pytest.fixture
def tiny_dictionary():
    return SpellingDictionary(frozenset("the cat sat on a mat dog ran he she it goes go home".split()))


@pytest.fixture
def config(tmp_path):
    return GradingConfig(cache_dir=tmp_path / "cache")


# -- acceptance summary: one line per criterion ------------------------------

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        previous = _acceptance.get(n, (title, "PASS"))[1]
        status = "PASS" if report.passed and previous == "PASS" else "FAIL"
        _acceptance[n] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        title, status = _acceptance[n]
        terminalreporter.write_line(f"[{status}] criterion {n:>2}: {title}")
