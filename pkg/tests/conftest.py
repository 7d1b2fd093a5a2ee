import numpy as np
import pytest
from hypothesis import strategies as st

from gfix.core import FiniteMetricSpace, SelfMap
from gfix.fixtures import line_instance, reich_instance, triangle_instance
from gfix.generate import shortest_path_closure


@st.composite
def metric_spaces(draw, min_n=3, max_n=7):
    n = draw(st.integers(min_n, max_n))
    weights = draw(
        st.lists(
            st.floats(0.05, 1.0, allow_nan=False, allow_infinity=False),
            min_size=n * n, max_size=n * n,
        )
    )
    w = np.array(weights).reshape(n, n)
    w = np.triu(w, 1)
    w = w + w.T
    d = shortest_path_closure(w)
    np.fill_diagonal(d, 0.0)
    return FiniteMetricSpace([f"p{i}" for i in range(n)], d)


@st.composite
def spaces_with_maps(draw, min_n=3, max_n=6):
    m = draw(metric_spaces(min_n, max_n))
    n = len(m)
    image = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    return m, SelfMap(tuple(image))


@pytest.fixture
def triangle():
    return triangle_instance()


@pytest.fixture
def line():
    return line_instance()


@pytest.fixture
def reich():
    return reich_instance(0.125)


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py" in nodeid and getattr(rep, "when", "call") == "call":
                rows.append((nodeid.split("::")[-1], outcome))
    if rows:
        terminalreporter.section("acceptance criteria")
        for name, outcome in sorted(rows):
            terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
