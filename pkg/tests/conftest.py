import pytest

from analogia.data import fixture_text
from analogia.model import load_knowledge_base


@pytest.fixture
def load_bundled():
    def _load(name):
        return load_knowledge_base(fixture_text(name))

    return _load


@pytest.fixture
def berlin_rome(load_bundled):
    return load_bundled("berlin_rome")


@pytest.fixture
def currency(load_bundled):
    return load_bundled("currency")


@pytest.fixture
def similarity_kb(load_bundled):
    return load_bundled("similarity")


@pytest.fixture
def two_chains(load_bundled):
    return load_bundled("two_chains")


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line, print it, then assert it."""
    lines = request.config.stash.setdefault(ACCEPTANCE, [])

    def record(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
        lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
