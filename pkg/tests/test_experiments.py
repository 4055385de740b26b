import numpy as np
import pytest

from rankdesign.errors import DimensionError, InvalidInputError
from rankdesign.experiments import (
    ExperimentReport,
    SyntheticModel,
    active_vs_random,
    covariance_check,
    er_ensemble,
    er_sample,
    greedy_growth,
    increment_observation,
    synth_scores,
)
from rankdesign.graph import bridged_cliques, complete_graph, path_graph
from rankdesign.ranking import PairwiseData, gradient

from conftest import random_connected


def test_er_sample_extremes_and_determinism():
    assert er_sample(6, 1.0, 3) == complete_graph(6)
    assert er_sample(6, 0.0, 3).m == 0
    assert er_sample(20, 0.3, 5) == er_sample(20, 0.3, 5)
    with pytest.raises(InvalidInputError):
        er_sample(5, 1.5)


def test_er_edge_count_moments():
    ens = er_ensemble(50, 0.4, 1000, seed=1)
    N = 1225
    assert abs(ens.mean_m - 0.4 * N) <= 3 * np.sqrt(N * 0.4 * 0.6)


def test_er_ensemble_below_threshold_has_disconnected_samples():
    n = 40
    ens = er_ensemble(n, 0.5 * np.log(n) / n, 200, seed=0)
    assert ens.fraction_disconnected > 0
    assert len(er_ensemble(10, 0.5, 1).rows()) == 1


def test_synth_scores():
    g = path_graph(4).add_weight((0, 1), 3)
    model = SyntheticModel(np.array([0.0, 1.0, 3.0, 2.0]), 0.0)
    assert np.allclose(synth_scores(g, model).values, gradient(g, model.phi_true))
    with pytest.raises(DimensionError):
        synth_scores(path_graph(5), model)
    with pytest.raises(InvalidInputError):
        SyntheticModel(np.zeros(3), -1.0)


def test_synth_variance_scales_with_weight():
    g = complete_graph(2).add_weight((0, 1), 3)  # w = 4
    model = SyntheticModel(np.zeros(2), 5.0)
    rng = np.random.default_rng(0)
    draws = np.array([synth_scores(g, model, rng).values[0] for _ in range(100_000)])
    se = 1.25 * np.sqrt(2 / (draws.size - 1))
    assert abs(draws.var(ddof=1) - 1.25) <= 3 * se


def test_increment_running_mean():
    g = complete_graph(2)
    data = PairwiseData(g, {0: 2.0})
    model = SyntheticModel(np.array([0.0, 1.0]), 0.0)
    new = increment_observation(data, (0, 1), model)
    assert new.graph.weight(0, 1) == 2 and new.y[0] == pytest.approx(1.5)
    new = increment_observation(PairwiseData(complete_graph(3), {0: 9.0, 1: 9.0, 2: 9.0}), (1, 2),
                                SyntheticModel(np.array([0.0, 1.0, 5.0]), 0.0))
    assert new.y[2] == pytest.approx((9.0 + 4.0) / 2)


def test_increment_variance_law():
    model = SyntheticModel(np.array([0.0, 0.0]), 2.0)
    rng = np.random.default_rng(3)
    vals = []
    for _ in range(20_000):
        d = synth_scores(complete_graph(2), model, rng)
        for _ in range(3):
            d = increment_observation(d, (0, 1), model, rng)
        vals.append(d.values[0])
    v = np.var(vals, ddof=1)
    assert abs(v - 0.5) <= 3 * 0.5 * np.sqrt(2 / 19_999)


def test_zero_budget_strategies_identical():
    g = bridged_cliques(4, 1)
    rep = active_vs_random(g, SyntheticModel.gaussian(8, 5.0, seed=2), 0, 5)
    for name in ("l2", "ktau", "lambda2"):
        assert np.array_equal(rep.metric("greedy", name, 0), rep.metric("random", name, 0))


def test_report_determinism_and_threads():
    g = bridged_cliques(5, 1)
    model = SyntheticModel.gaussian(10, 5.0, seed=4)
    a = active_vs_random(g, model, 12, 6, checkpoints=[0, 6, 12])
    b = active_vs_random(g, model, 12, 6, checkpoints=[0, 6, 12], workers=3)
    assert a.to_csv() == b.to_csv() and a.to_json() == b.to_json()
    assert a.checkpoints == [0, 6, 12]
    for t in range(6):
        for s in ("greedy", "random"):
            lam = [r[5] for r in a.rows if r[0] == s and r[1] == t]
            assert np.all(np.diff(lam) >= -1e-8)


def test_regenerate_mode_runs():
    g = bridged_cliques(4, 1)
    rep = active_vs_random(g, SyntheticModel.gaussian(8, 1.0, seed=1), 6, 3, regenerate=True)
    assert len(rep.rows) == 2 * 3 * len(rep.checkpoints)


def test_noise_free_recovery():
    g = bridged_cliques(4, 1)
    rep = active_vs_random(g, SyntheticModel.gaussian(8, 0.0), 5, 2)
    assert max(r[3] for r in rep.rows) < 1e-8 and max(r[4] for r in rep.rows) == 0


def test_covariance_check():
    g = random_connected(6, np.random.default_rng(8))
    assert covariance_check(g, 0.0, 100) == 0.0
    assert covariance_check(g, 5.0, 100_000, seed=1) <= 0.05


def test_greedy_growth_path():
    values, res = greedy_growth(12, [11, 20, 30])
    assert values[11] == pytest.approx(2 - 2 * np.cos(np.pi / 12), abs=1e-8)
    assert values[11] <= values[20] <= values[30] <= 2 * 30 / 11 + 1e-9


def test_report_serialization():
    rep = ExperimentReport({"a": 1}, [("greedy", 0, 0, 1.0, 0.5, 2.0), ("random", 0, 0, 1.5, 0.25, 2.0)])
    text = rep.to_csv({"seed": 0})
    assert text.splitlines()[:2] == ["# seed: 0", "strategy,trial,xi,l2,ktau,lambda2"]
    assert '"meta"' in rep.to_json({"version": "x"})


def test_expected_error_of_greedy_design_below_random():
    """E||phi_hat - phi||^2 = sigma2 tr(L^+): compare the designs without sampling noise."""
    from rankdesign.cli import load_graph
    from rankdesign.design import greedy_augment, random_pairs

    g = load_graph("bridged_cliques_30").data.graph
    greedy = greedy_augment(g, g.m).graph
    expected = lambda h: 5.0 * np.trace(np.linalg.pinv(h.laplacian_dense()))
    rand = []
    for s in range(30):
        w = g.weight_vector()
        for key in random_pairs(g.n, g.m, rng=s):
            w[key.k] += 1
        rand.append(expected(type(g).from_weight_vector(g.n, w)))
    assert expected(greedy) < np.mean(rand)
    assert expected(greedy) < expected(g)
