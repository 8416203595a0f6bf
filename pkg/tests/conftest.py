import pytest

from ca_linkpred.graph import build_graph


@pytest.fixture
def triangle_pendant():
    return build_graph([(0, 1), (1, 2), (0, 2), (2, 3)], 4)


@pytest.fixture
def path3():
    return build_graph([(0, 1), (1, 2)], 3)


@pytest.fixture
def k3():
    return build_graph([(0, 1), (1, 2), (0, 2)], 3)


@pytest.fixture
def star3():
    return build_graph([(0, 1), (0, 2), (0, 3)], 4)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.REPORT):
        terminalreporter.write_line(line)
