import math

import numpy as np
import pytest
from hypothesis import given, settings

from oracles import brute_normalized_cut
from rankdesign.bounds import (
    best_cut_bound_exhaustive,
    cut_bound,
    degree_bound,
    edge_connectivity_bound,
    er_bound,
    er_bound_edges,
)
from rankdesign.errors import HypothesisViolation, InvalidSubsetError, SizeError
from rankdesign.graph import MultiGraph, complete_graph, cycle_graph, path_graph, star_graph
from rankdesign.spectral import full_spectrum

from conftest import multigraphs


def test_degree_bound_examples():
    assert degree_bound(complete_graph(6))[1] == pytest.approx(6)
    tight, loose = degree_bound(path_graph(4))
    assert tight == pytest.approx(4 / 3) and tight <= loose
    assert degree_bound(star_graph(3))[0] == pytest.approx(4 / 3)


def test_cut_bound_examples():
    assert cut_bound(cycle_graph(4), {0, 1}).value == pytest.approx(2)
    assert cut_bound(complete_graph(4), {2}).value == pytest.approx(4)
    assert cut_bound(MultiGraph.from_edges(4, [(0, 1), (2, 3)]), {0, 1}).value == 0
    for bad in (set(), {0, 1, 2, 3}, {7}):
        with pytest.raises(InvalidSubsetError):
            cut_bound(cycle_graph(4), bad)


def test_exhaustive_cut_examples():
    assert best_cut_bound_exhaustive(cycle_graph(4)).value == pytest.approx(2)
    assert best_cut_bound_exhaustive(path_graph(2)).value == pytest.approx(2)
    tri = MultiGraph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    rep = best_cut_bound_exhaustive(tri)
    assert rep.value == pytest.approx(2 / 3)
    assert rep.certificate in ({0, 1, 2}, {3, 4, 5})
    with pytest.raises(SizeError):
        best_cut_bound_exhaustive(path_graph(21))


def test_er_bound_examples():
    assert er_bound(100, 0.4, 0.01) == pytest.approx(40 + 4e-4 * math.sqrt(2 * math.log(100)))
    assert er_bound(100, 0.4, 0.01) == pytest.approx(40.00121, abs=1e-5)
    assert er_bound(50, 0.3, 1.0) == 50 * 0.3
    assert er_bound_edges(50, 0.4 * 1225, 0.05) == pytest.approx(er_bound(50, 0.4, 0.05))
    with pytest.raises(HypothesisViolation):
        er_bound(51, 0.4, 0.05)


def test_edge_connectivity_examples():
    assert edge_connectivity_bound(path_graph(5)).value == 1
    assert edge_connectivity_bound(cycle_graph(6)).value == 2


def test_edge_connectivity_fails_on_complete_graph():
    with pytest.warns(UserWarning, match="complete"):
        rep = edge_connectivity_bound(complete_graph(4))
    assert rep.value == 3 < full_spectrum(complete_graph(4))[1]


@settings(max_examples=50)
@given(multigraphs(max_n=10, max_w=1, connected=True))
def test_deterministic_bounds_dominate_lambda2(g):
    g = MultiGraph.from_weight_vector(g.n, np.minimum(g.weight_vector(), 1))
    lam2 = full_spectrum(g)[1]
    tight, loose = degree_bound(g)
    assert tight <= loose + 1e-12
    assert lam2 <= tight + 1e-8
    best = best_cut_bound_exhaustive(g)
    assert lam2 <= best.value + 1e-8
    assert best.value == pytest.approx(brute_normalized_cut(g.n, list(g.edges()))[0])
    if g.m < g.N:
        assert lam2 <= edge_connectivity_bound(g).value + 1e-8
