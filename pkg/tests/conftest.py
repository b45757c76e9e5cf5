import numpy as np
import pytest
from hypothesis import strategies as st

from graphlet_ldp import kernels
from graphlet_ldp.graph import Graph, pair_count

BACKENDS = kernels.available()


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def random_graph(n, p, rng):
    return Graph.from_pair_bits(n, rng.random(pair_count(n)) < p)


@st.composite
def graphs(draw, min_n=0, max_n=8):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.booleans(), min_size=pair_count(n), max_size=pair_count(n)))
    return Graph.from_pair_bits(n, np.array(bits, dtype=bool))


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
