"""Optimality criteria of the information matrix and edge-augmentation strategies."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ExhaustedError, InvalidInputError, NotIdentifiableError
from .graph import EdgeKey, LaplacianOperator, MultiGraph, _as_key, pair_arrays
from .spectral import (
    DEFAULT_TOL,
    MULTIPLICITY_GAP,
    _canonical_sign,
    _constant,
    fiedler,
    full_spectrum,
    smallest_eigenpair,
)


@dataclass(frozen=True)
class CriteriaReport:
    """E/A/D scalarizations of the Laplacian spectrum, plus T-type totals.

    ``j_a`` and ``j_d`` are ``None`` when the graph is disconnected.
    ``t`` is the number of comparisons M; ``trace`` is ``tr L = 2M``.
    """

    j_e: float
    j_a: float | None
    j_d: float | None
    t: int
    trace: int
    connected: bool

    def as_dict(self) -> dict:
        return {"j_e": self.j_e, "j_a": self.j_a, "j_d": self.j_d, "t": self.t,
                "trace": self.trace, "connected": self.connected}


@dataclass(frozen=True)
class DesignResult:
    added: list[tuple[EdgeKey, int]]
    lambda2_trajectory: list[float]
    criteria_before: CriteriaReport
    criteria_after: CriteriaReport
    strategy: str
    graph: MultiGraph = field(repr=False)

    @property
    def budget(self) -> int:
        return sum(c for _, c in self.added)


def criteria(g: MultiGraph) -> CriteriaReport:
    """Criteria from the dense spectrum (``n`` up to the dense cap)."""
    connected = g.is_connected()
    t = g.M
    if not connected:
        return CriteriaReport(0.0, None, None, t, 2 * t, False)
    lam = full_spectrum(g)[1:]
    n = g.n
    j_a = 1.0 / (np.sum(1.0 / lam) / n)
    j_d = float(np.sum(np.log(lam)) / n)
    return CriteriaReport(float(lam[0]), float(j_a), j_d, t, 2 * t, True)


def _admissible_mask(n: int, forbidden) -> np.ndarray:
    N = n * (n - 1) // 2
    mask = np.ones(N, dtype=bool)
    for e in forbidden or ():
        mask[_as_key(e, n).k] = False
    return mask


class _FiedlerTracker:
    """Fiedler pairs along a growing weight sequence, warm-started when safe."""

    def __init__(self, op: LaplacianOperator, tol: float, warm_start: bool):
        self.op = op
        self.tol = tol
        self.warm_start = warm_start
        self.prev = None
        self.step = 0

    def compute(self):
        op, n = self.op, self.op.n
        scale = 2.0 * float(op.degrees().max()) if op.weights.size else 1.0
        Q = _constant(n)
        if n == 2:
            v = np.array([-1.0, 1.0]) / np.sqrt(2.0)
            return 2.0 * float(op.weights.sum()), v
        lam, v, _, _ = smallest_eigenpair(op, n, Q, tol=self.tol, v0=self.prev, scale=scale,
                                          seed=self.step)
        v = _canonical_sign(v)
        self.step += 1
        if self.warm_start:
            lam3, *_ = smallest_eigenpair(op, n, np.column_stack([Q, v]), tol=self.tol,
                                          scale=scale, seed=self.step + 7919)
            self.prev = None if lam3 - lam < MULTIPLICITY_GAP else v
        return max(lam, 0.0) if lam > -self.tol else lam, v


def greedy_augment(g: MultiGraph, xi: int, forbidden=(), warm_start: bool = True,
                   tol: float = DEFAULT_TOL) -> DesignResult:
    """Add ``xi`` unit comparisons one at a time, each on the admissible pair
    maximizing ``(F_i - F_j)^2`` for the current Fiedler vector ``F``.

    Repeated pairs are allowed.  Ties go to the lowest edge index.  The
    returned trajectory holds lambda_2 before the first and after every step.
    """
    if xi < 0:
        raise InvalidInputError("budget must be nonnegative")
    comps = g.components()
    if len(comps) > 1:
        raise NotIdentifiableError("greedy augmentation needs a connected graph", comps)
    n = g.n
    mask = _admissible_mask(n, forbidden)
    if xi > 0 and not mask.any():
        raise ExhaustedError("every pair is forbidden")
    tails, heads = pair_arrays(n)
    op = g.operator()
    tracker = _FiedlerTracker(op, tol, warm_start)
    lam, F = tracker.compute()
    trajectory = [lam]
    added = []
    for _ in range(xi):
        score = (F[tails] - F[heads]) ** 2
        score[~mask] = -np.inf
        k = int(np.argmax(score))
        i, j = int(tails[k]), int(heads[k])
        op.increment(i, j)
        added.append((EdgeKey(i, j, k), 1))
        lam, F = tracker.compute()
        trajectory.append(lam)
    final = _apply_additions(g, added)
    return DesignResult(added, trajectory, criteria(g), criteria(final), "greedy", final)


def random_pairs(n: int, xi: int, forbidden=(), rng=None) -> list[EdgeKey]:
    """``xi`` admissible pairs drawn uniformly with replacement."""
    rng = np.random.default_rng(rng)
    mask = _admissible_mask(n, forbidden)
    allowed = np.flatnonzero(mask)
    if xi > 0 and allowed.size == 0:
        raise ExhaustedError("every pair is forbidden")
    if xi == 0:
        return []
    ks = allowed[rng.integers(0, allowed.size, size=xi)]
    tails, heads = pair_arrays(n)
    return [EdgeKey(int(tails[k]), int(heads[k]), int(k)) for k in ks]


def random_augment(g: MultiGraph, xi: int, forbidden=(), seed: int = 0,
                   tol: float = DEFAULT_TOL) -> DesignResult:
    """Add ``xi`` comparisons on pairs drawn uniformly from the admissible set."""
    if xi < 0:
        raise InvalidInputError("budget must be nonnegative")
    keys = random_pairs(g.n, xi, forbidden, np.random.default_rng(seed))
    added = [(key, 1) for key in keys]
    trajectory = [fiedler(g, tol).value]
    cur = g
    prev = None
    for key, c in added:
        cur = cur.add_weight(key, c)
        pair = fiedler(cur, tol, v0=prev)
        prev = pair.vector
        trajectory.append(pair.value)
    return DesignResult(added, trajectory, criteria(g), criteria(cur), "random", cur)


def _apply_additions(g: MultiGraph, added) -> MultiGraph:
    w = dict(g.weights)
    for key, c in added:
        w[key.k] = w.get(key.k, 0) + c
    return MultiGraph(g.n, w)


def best_single_edge(g: MultiGraph) -> tuple[EdgeKey, float]:
    """Exhaustive search for the single pair whose increment maximizes lambda_2."""
    best_key, best_val = None, -math.inf
    tails, heads = pair_arrays(g.n)
    for k in range(g.N):
        val = full_spectrum(g.add_weight((int(tails[k]), int(heads[k]))))[1]
        if val > best_val + 1e-12:
            best_key, best_val = EdgeKey(int(tails[k]), int(heads[k]), k), float(val)
    return best_key, best_val
