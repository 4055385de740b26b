"""Random-graph baselines and the synthetic active-vs-random sampling protocol.

Randomness is drawn from per-trial substreams keyed by ``(seed, trial, ...)``,
so a trial's numbers do not depend on which other trials ran or in what order.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .design import greedy_augment, random_pairs
from .errors import DimensionError, InvalidInputError, NotIdentifiableError
from .graph import MultiGraph, _as_key, num_pairs, pair_arrays
from .ranking import PairwiseData, gradient, kendall_tau, l2_error, lsq_rank, lsq_rank_many
from .spectral import DENSE_SIZE_CAP, fiedler

STRATEGIES = ("greedy", "random")


def substream(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, keys)]))


@dataclass(frozen=True)
class SyntheticModel:
    """Ground-truth scores and the per-comparison noise variance."""

    phi_true: np.ndarray
    sigma2: float
    seed: int = 0

    def __post_init__(self):
        if self.sigma2 < 0:
            raise InvalidInputError("sigma2 must be nonnegative")
        object.__setattr__(self, "phi_true", np.asarray(self.phi_true, dtype=np.float64))

    @classmethod
    def gaussian(cls, n: int, sigma2: float, seed: int = 0, score_var: float = 1.0) -> "SyntheticModel":
        """Scores drawn i.i.d. from N(0, score_var)."""
        phi = substream(seed, 0xF1).normal(0.0, np.sqrt(score_var), size=n)
        return cls(phi, sigma2, seed)


def er_sample(n: int, p: float, seed=0) -> MultiGraph:
    """G(n, p): each pair present independently with probability ``p``, unit weight."""
    if not 0 <= p <= 1:
        raise InvalidInputError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    present = np.flatnonzero(rng.random(num_pairs(n)) < p)
    return MultiGraph(n, dict.fromkeys(present.tolist(), 1))


def _lambda2(g: MultiGraph) -> float:
    if not g.is_connected():
        return 0.0
    if g.n <= DENSE_SIZE_CAP:
        return float(np.linalg.eigvalsh(g.laplacian_dense())[1])
    return fiedler(g).value


@dataclass(frozen=True)
class ErEnsemble:
    n: int
    p: float
    seed: int
    m: np.ndarray
    lambda2: np.ndarray

    @property
    def mean_m(self) -> float:
        return float(self.m.mean())

    @property
    def mean_lambda2(self) -> float:
        return float(self.lambda2.mean())

    @property
    def fraction_disconnected(self) -> float:
        return float(np.mean(self.lambda2 == 0.0))

    def rows(self):
        return list(zip(self.m.tolist(), self.lambda2.tolist()))


def er_ensemble(n: int, p: float, trials: int, seed: int = 0) -> ErEnsemble:
    """``(m, lambda_2)`` for ``trials`` independent G(n, p) draws (lambda_2 = 0 if disconnected)."""
    if trials < 1:
        raise InvalidInputError("trials must be positive")
    m = np.empty(trials, dtype=np.int64)
    lam = np.empty(trials)
    for t in range(trials):
        g = er_sample(n, p, substream(seed, t))
        m[t], lam[t] = g.m, _lambda2(g)
    return ErEnsemble(n, p, seed, m, lam)


def synth_scores(g: MultiGraph, model: SyntheticModel, rng=None) -> PairwiseData:
    """Mean comparisons ``y_k ~ N(phi_j - phi_i, sigma2 / w_k)`` on the used pairs."""
    if model.phi_true.shape != (g.n,):
        raise DimensionError(f"phi_true has shape {model.phi_true.shape}, graph has n={g.n}")
    rng = np.random.default_rng(model.seed if rng is None else rng)
    mean = gradient(g, model.phi_true)
    noise = rng.standard_normal(g.m) * np.sqrt(model.sigma2 / g.w)
    return PairwiseData.from_arrays(g, mean + noise)


def increment_observation(data: PairwiseData, e, model: SyntheticModel, rng=None) -> PairwiseData:
    """Collect one more comparison on pair ``e`` and fold it into the running mean."""
    g = data.graph
    i, j, k = _as_key(e, g.n)
    rng = np.random.default_rng(model.seed if rng is None else rng)
    draw = model.phi_true[j] - model.phi_true[i] + np.sqrt(model.sigma2) * rng.standard_normal()
    w0 = g.weights.get(k, 0)
    y = dict(data.y)
    y[k] = (w0 * y.get(k, 0.0) + draw) / (w0 + 1)
    return PairwiseData(g.add_weight((i, j)), y)


class _Comparisons:
    """Dense per-pair accumulator used inside the simulation loop."""

    def __init__(self, data: PairwiseData, model: SyntheticModel):
        n = data.n
        self.n = n
        self.model = model
        self.w = np.zeros(num_pairs(n), dtype=np.int64)
        self.y = np.zeros(num_pairs(n))
        self.w[data.graph.keys] = data.graph.w
        self.y[data.graph.keys] = data.values
        self.tails, self.heads = pair_arrays(n)

    def add(self, k: int, rng) -> None:
        phi = self.model.phi_true
        draw = phi[self.heads[k]] - phi[self.tails[k]] + np.sqrt(self.model.sigma2) * rng.standard_normal()
        self.y[k] = (self.w[k] * self.y[k] + draw) / (self.w[k] + 1)
        self.w[k] += 1

    def graph(self) -> MultiGraph:
        return MultiGraph.from_weight_vector(self.n, self.w)

    def data(self) -> PairwiseData:
        g = self.graph()
        return PairwiseData.from_arrays(g, self.y[g.keys])


@dataclass
class ExperimentReport:
    """Long-format results: one row per (strategy, trial, checkpoint)."""

    config: dict
    rows: list = field(default_factory=list)

    COLUMNS = ("strategy", "trial", "xi", "l2", "ktau", "lambda2")

    def metric(self, strategy: str, name: str, xi: int) -> np.ndarray:
        """Per-trial values of ``name`` at checkpoint ``xi``, ordered by trial."""
        col = self.COLUMNS.index(name)
        sel = sorted((r[1], r[col]) for r in self.rows if r[0] == strategy and r[2] == xi)
        return np.array([v for _, v in sel])

    @property
    def checkpoints(self) -> list[int]:
        return sorted({r[2] for r in self.rows})

    def summary(self) -> dict:
        out = {}
        for s in STRATEGIES:
            per = {}
            for xi in self.checkpoints:
                stats = {}
                for name in ("l2", "ktau", "lambda2"):
                    v = self.metric(s, name, xi)
                    if v.size:
                        stats[name] = {"mean": float(v.mean()), "std": float(v.std(ddof=1)) if v.size > 1 else 0.0}
                per[str(xi)] = stats
            out[s] = per
        return out

    def to_csv(self, header: dict | None = None) -> str:
        buf = io.StringIO()
        for k, v in (header or {}).items():
            buf.write(f"# {k}: {v}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.COLUMNS)
        for s, t, xi, l2, kt, lam in self.rows:
            writer.writerow([s, t, xi, format(l2, ".12g"), format(kt, ".12g"), format(lam, ".12g")])
        return buf.getvalue()

    def to_json(self, meta: dict | None = None) -> str:
        doc = {"meta": meta or {}, "config": self.config, "summary": self.summary()}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def default_checkpoints(xi_max: int, count: int = 20) -> list[int]:
    step = max(1, xi_max // count)
    return sorted(set(range(0, xi_max + 1, step)) | {xi_max})


def active_vs_random(g0: MultiGraph, model: SyntheticModel, xi_max: int, trials: int,
                     checkpoints=None, regenerate: bool = False, workers: int = 1) -> ExperimentReport:
    """Grow the dataset by ``xi_max`` comparisons under greedy and random sampling.

    Each trial draws initial data on ``g0``; both strategies start from that
    same data.  The greedy pair sequence depends only on the graph, so it is
    computed once and shared.  At each checkpoint the ranking is re-estimated
    and compared with ``phi_true``.  With ``regenerate`` all comparisons are
    redrawn on the current graph at each checkpoint instead of accumulated.
    ``workers`` runs trials concurrently; rows are always ordered by trial.
    """
    comps = g0.components()
    if len(comps) > 1:
        raise NotIdentifiableError("initial graph must be connected", comps)
    if xi_max < 0 or trials < 1:
        raise InvalidInputError("need xi_max >= 0 and trials >= 1")
    checkpoints = default_checkpoints(xi_max) if checkpoints is None else sorted(set(map(int, checkpoints)))
    if checkpoints and (checkpoints[0] < 0 or checkpoints[-1] > xi_max):
        raise InvalidInputError("checkpoints must lie in [0, xi_max]")
    greedy = greedy_augment(g0, xi_max)
    config = {"n": g0.n, "m0": g0.m, "M0": g0.M, "sigma2": model.sigma2, "seed": model.seed,
              "xi_max": xi_max, "trials": trials, "checkpoints": checkpoints, "regenerate": regenerate}
    run = partial(_trial, g0, model, greedy, xi_max, frozenset(checkpoints), regenerate)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_trial = list(pool.map(run, range(trials)))
    else:
        per_trial = [run(t) for t in range(trials)]
    return ExperimentReport(config, [row for rows in per_trial for row in rows])


def _trial(g0, model, greedy, xi_max, marks, regenerate, t):
    truth, seed = model.phi_true, model.seed
    rows = []

    def record(strategy, xi, acc, lam, regen_rng):
        data = synth_scores(acc.graph(), model, regen_rng) if regenerate else acc.data()
        est = lsq_rank(data)
        rows.append((strategy, t, xi, l2_error(est.phi, truth), kendall_tau(est.phi, truth), lam))

    data0 = synth_scores(g0, model, substream(seed, t, 0))
    acc = _Comparisons(data0, model)
    noise = substream(seed, t, 1)
    for xi in range(xi_max + 1):
        if xi:
            acc.add(greedy.added[xi - 1][0].k, noise)
        if xi in marks:
            record("greedy", xi, acc, greedy.lambda2_trajectory[xi], substream(seed, t, 4, xi))

    acc = _Comparisons(data0, model)
    keys = [key.k for key in random_pairs(g0.n, xi_max, rng=substream(seed, t, 2))]
    noise = substream(seed, t, 3)
    prev = None
    for xi in range(xi_max + 1):
        if xi:
            acc.add(keys[xi - 1], noise)
        if xi in marks:
            pair = fiedler(acc.graph(), v0=prev)
            prev = pair.vector
            record("random", xi, acc, pair.value, substream(seed, t, 5, xi))
    return rows


def paired_one_sided(a, b) -> tuple[float, float]:
    """Paired t-test of ``mean(a - b) < 0``; returns ``(statistic, p-value)``."""
    from scipy import stats

    res = stats.ttest_rel(a, b, alternative="less")
    return float(res.statistic), float(res.pvalue)


def empirical_covariance(g: MultiGraph, sigma2: float, trials: int, seed: int = 0, chunk: int = 20_000):
    """Sample covariance of the estimator over noise draws, and ``sigma2 * pinv(L)``."""
    n = g.n
    phi = np.zeros(n)  # the estimator's covariance does not depend on the truth
    rng = substream(seed, 0xC0)
    mean = gradient(g, phi)
    total = np.zeros(n)
    outer = np.zeros((n, n))
    done = 0
    while done < trials:
        r = min(chunk, trials - done)
        Y = mean[:, None] + rng.standard_normal((g.m, r)) * np.sqrt(sigma2 / g.w)[:, None]
        est = lsq_rank_many(g, Y)
        total += est.sum(axis=1)
        outer += est @ est.T
        done += r
    mu = total / trials
    emp = (outer - trials * np.outer(mu, mu)) / (trials - 1)
    theory = sigma2 * np.linalg.pinv(g.laplacian_dense())
    return emp, theory


def covariance_check(g: MultiGraph, sigma2: float, trials: int, seed: int = 0) -> float:
    """Relative Frobenius error between the empirical and predicted covariance."""
    comps = g.components()
    if len(comps) > 1:
        raise NotIdentifiableError("graph must be connected", comps)
    emp, theory = empirical_covariance(g, sigma2, trials, seed)
    scale = np.linalg.norm(theory)
    if scale == 0:
        return float(np.linalg.norm(emp))
    return float(np.linalg.norm(emp - theory) / scale)


def greedy_growth(n: int, M_values, start: MultiGraph | None = None):
    """lambda_2 of greedy augmentations of ``start`` (default the path) at the given totals M."""
    g = start if start is not None else MultiGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    M_values = sorted(int(M) for M in M_values)
    if M_values[0] < g.M:
        raise InvalidInputError("targets must not be below the starting comparison count")
    res = greedy_augment(g, M_values[-1] - g.M)
    return {M: res.lambda2_trajectory[M - g.M] for M in M_values}, res
