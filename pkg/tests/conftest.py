import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from rankdesign.graph import MultiGraph  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def multigraphs(draw, min_n=2, max_n=9, max_w=3, connected=False):
    """Small weighted graphs; with ``connected`` a random spanning tree is planted first."""
    n = draw(st.integers(min_n, max_n))
    N = n * (n - 1) // 2
    w = np.array(draw(st.lists(st.integers(0, max_w), min_size=N, max_size=N)), dtype=np.int64)
    g = MultiGraph.from_weight_vector(n, w)
    if connected:
        order = draw(st.permutations(range(n)))
        for t in range(1, n):
            parent = order[draw(st.integers(0, t - 1))]
            g = g.add_weight((min(parent, order[t]), max(parent, order[t])))
    return g


def random_connected(n, rng, p=0.4, max_w=3):
    """Random spanning tree plus G(n, p) extras with weights in 1..max_w."""
    edges = []
    perm = rng.permutation(n)
    for t in range(1, n):
        edges.append((int(perm[rng.integers(0, t)]), int(perm[t])))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.extend([(i, j)] * int(rng.integers(1, max_w + 1)))
    return MultiGraph.from_edges(n, [(min(a, b), max(a, b)) for a, b in edges])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
