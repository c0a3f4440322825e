import hypothesis
import numpy as np
import pytest

from udmis.graph import UnitDiskGraph

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")


def path_graph(n: int) -> UnitDiskGraph:
    return UnitDiskGraph.from_points([(0.9 * i, 0.0) for i in range(n)])


def triangle() -> UnitDiskGraph:
    return UnitDiskGraph.from_points([(0, 0), (0.8, 0), (0.4, 0.6)])


def star(leaves: int) -> UnitDiskGraph:
    ang = np.linspace(0, 2 * np.pi, leaves, endpoint=False)
    return UnitDiskGraph.from_points([(0, 0)] + [(0.9 * np.cos(a), 0.9 * np.sin(a)) for a in ang])


@pytest.fixture
def tri():
    return triangle()


@pytest.fixture
def path5():
    return path_graph(5)


# criterion number -> list of (ok, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[k]
        status = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        terminalreporter.write_line(f"criterion {k:2d}: {status}  " + "; ".join(d for _, d in parts))
