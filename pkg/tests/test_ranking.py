import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_kendall, lsq_pinv
from rankdesign.errors import DimensionError, InvalidInputError, NotIdentifiableError
from rankdesign.graph import MultiGraph, complete_graph
from rankdesign.ranking import (
    PairwiseData,
    gradient,
    kendall_tau,
    l2_error,
    lsq_rank,
    lsq_rank_many,
    residual_histogram,
    residuals,
)

from conftest import multigraphs, random_connected


def data_from(g, y):
    return PairwiseData.from_arrays(g, y)


def test_consistent_k3():
    g = complete_graph(3)
    phi = np.array([1.0, 0.0, -1.0])
    est = lsq_rank(data_from(g, gradient(g, phi)))
    assert np.allclose(est.phi, phi, atol=1e-12)
    assert est.relative_residual == pytest.approx(0, abs=1e-12)


def test_single_edge():
    est = lsq_rank(data_from(MultiGraph.from_edges(2, [(0, 1)]), [3.0]))
    assert np.allclose(est.phi, [-1.5, 1.5])


def test_inconsistent_k3():
    data = data_from(complete_graph(3), [1.0, 1.0, 1.0])
    est = lsq_rank(data)
    assert np.allclose(est.phi, [-2 / 3, 0, 2 / 3], atol=1e-12)
    assert np.allclose(residuals(data, est), [1 / 3, -1 / 3, 1 / 3], atol=1e-12)
    assert est.relative_residual > 0


def test_disconnected_rejected_with_components():
    g = MultiGraph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(NotIdentifiableError) as info:
        lsq_rank(data_from(g, [1.0, 2.0]))
    assert info.value.components == [[0, 1], [2, 3]]


def test_pairwise_data_validation():
    g = complete_graph(3)
    with pytest.raises(InvalidInputError):
        PairwiseData(g, {0: 1.0, 1: 1.0})
    with pytest.raises(InvalidInputError):
        data_from(g, [1.0, np.nan, 0.0])
    with pytest.raises(DimensionError):
        data_from(g, [1.0, 2.0])


def test_matches_pinv_on_random_graphs(rng):
    for _ in range(50):
        g = random_connected(int(rng.integers(2, 9)), rng)
        y = rng.normal(size=g.m) * 3
        est = lsq_rank(data_from(g, y))
        assert np.allclose(est.phi, lsq_pinv(g.n, list(g.edges()), y), atol=1e-8)


def test_block_solve_matches_single(rng):
    g = random_connected(30, rng, p=0.2)
    Y = rng.normal(size=(g.m, 5))
    block = lsq_rank_many(g, Y)
    for c in range(5):
        assert np.allclose(block[:, c], lsq_rank(data_from(g, Y[:, c])).phi, atol=1e-8)


def test_gauge_invariance(rng):
    g = random_connected(7, rng)
    phi = rng.normal(size=7)
    a = lsq_rank(data_from(g, gradient(g, phi))).phi
    b = lsq_rank(data_from(g, gradient(g, phi + 5.0))).phi
    assert np.allclose(a, b, atol=1e-12) and abs(a.sum()) < 1e-10


def test_unbiased_over_noise(rng):
    g = random_connected(6, rng)
    phi = np.array([2.0, -1.0, 0.5, 0.0, 1.0, -3.0])
    Y = gradient(g, phi)[:, None] + rng.normal(size=(g.m, 10_000)) * np.sqrt(5.0 / g.w)[:, None]
    est = lsq_rank_many(g, Y)
    mean, se = est.mean(axis=1), est.std(axis=1, ddof=1) / math.sqrt(10_000)
    assert np.all(np.abs(mean - (phi - phi.mean())) <= 3 * se + 1e-12)


def test_histogram_examples():
    g = complete_graph(4)
    data = data_from(g, gradient(g, np.arange(4.0)))
    h = residual_histogram(data, lsq_rank(data), bins=5)
    assert h.counts[2] == g.m and h.counts.sum() == g.m
    bad = data_from(complete_graph(3), [1.0, 1.0, 1.0])
    h = residual_histogram(bad, lsq_rank(bad), bins=1)
    assert h.counts.tolist() == [3]
    assert sorted(np.round(h.residuals, 12)) == sorted(np.round([1 / 3, -1 / 3, 1 / 3], 12))


def test_kendall_examples():
    assert kendall_tau([1, 2, 3], [1, 2, 3]) == 0
    assert kendall_tau([1, 2, 3, 4], [4, 3, 2, 1]) == 1
    assert kendall_tau([1, 2, 3], [2, 1, 3]) == pytest.approx(1 / 3)
    assert kendall_tau([1, 1, 2], [1, 2, 2]) == 0  # ties never count
    assert kendall_tau([1, 1, 2], [2, 1, 1]) == pytest.approx(1 / 3)


def test_l2_examples():
    assert l2_error([1, 2], [1, 2]) == 0
    assert l2_error([1, -1], [-1, 1]) == pytest.approx(2 * math.sqrt(2))
    assert l2_error([2, 0], [1, -1]) == 0


score_lists = st.lists(st.integers(-5, 5), min_size=2, max_size=12)


@given(score_lists.flatmap(lambda a: st.tuples(st.just(a), st.lists(st.integers(-5, 5),
                                                                      min_size=len(a), max_size=len(a)))))
def test_kendall_symmetric_monotone_and_brute(pair):
    a, b = map(np.array, pair)
    t = kendall_tau(a, b)
    assert t == pytest.approx(brute_kendall(a, b))
    assert t == kendall_tau(b, a)
    assert t == kendall_tau(np.exp(a / 3.0), b ** 3 + 2 * b)
    assert 0 <= t <= 1


@settings(max_examples=40)
@given(multigraphs(max_n=8, connected=True), st.integers(0, 2**31))
def test_lsq_matches_pinv_property(g, seed):
    y = np.random.default_rng(seed).normal(size=g.m)
    est = lsq_rank(data_from(g, y))
    assert np.allclose(est.phi, lsq_pinv(g.n, list(g.edges()), y), atol=1e-8)
