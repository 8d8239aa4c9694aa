import pytest

from topgraph.graph import OMEGA, build_graph


@pytest.fixture
def loop1():
    return build_graph(["v"], [("e", "v", "v")])


@pytest.fixture
def o2():
    return build_graph(["v"], [("e1", "v", "v"), ("e2", "v", "v")])


@pytest.fixture
def edge_wv():
    return build_graph(["v", "w"], [("e", "w", "v")])


@pytest.fixture
def omega_loop():
    return build_graph(["v"], [("e", "v", "v", OMEGA)])


def on_graph(n: int):
    return build_graph(["v"], [(f"e{i}", "v", "v") for i in range(1, n + 1)])


def cycle_graph(n: int):
    vs = [f"v{i}" for i in range(n)]
    return build_graph(vs, [(f"e{i}", vs[i], vs[(i + 1) % n]) for i in range(n)])


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
