"""Least-squares ranking from cardinal pairwise comparisons, plus rank metrics."""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, NamedTuple

import numpy as np

from .errors import DimensionError, InvalidInputError, NotIdentifiableError, SolverFailure
from .graph import MultiGraph

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class PairwiseData:
    """A multigraph with a mean comparison ``y[k] ~ phi[j] - phi[i]`` on each used pair."""

    graph: MultiGraph
    y: Mapping[int, float]

    def __post_init__(self):
        y = {int(k): float(v) for k, v in self.y.items()}
        if set(y) != set(self.graph.weights):
            raise InvalidInputError("comparison values must be given exactly on positive-weight pairs")
        vals = np.fromiter(y.values(), dtype=np.float64, count=len(y))
        if not np.all(np.isfinite(vals)):
            raise InvalidInputError("comparison values must be finite")
        object.__setattr__(self, "y", MappingProxyType(dict(sorted(y.items()))))

    @classmethod
    def from_arrays(cls, graph: MultiGraph, y) -> "PairwiseData":
        """``y`` aligned with ``graph.keys``."""
        y = np.asarray(y, dtype=np.float64)
        if y.shape != (graph.m,):
            raise DimensionError(f"expected {graph.m} comparison values, got {y.shape}")
        return cls(graph, dict(zip(graph.keys.tolist(), y.tolist())))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def values(self) -> np.ndarray:
        """Comparison values aligned with ``graph.keys``."""
        return np.fromiter(self.y.values(), dtype=np.float64, count=len(self.y))


@dataclass(frozen=True)
class RankingEstimate:
    phi: np.ndarray
    relative_residual: float
    solver_iterations: int


class ResidualHistogram(NamedTuple):
    counts: np.ndarray
    bin_edges: np.ndarray
    residuals: np.ndarray
    weighted_norm: float


def gradient(g: MultiGraph, phi) -> np.ndarray:
    """``(B phi)_k = phi[head] - phi[tail]`` on the graph's used pairs."""
    phi = np.asarray(phi, dtype=np.float64)
    return phi[g.heads] - phi[g.tails]


def divergence(g: MultiGraph, flow) -> np.ndarray:
    """``B^t flow`` for a flow given on the graph's used pairs (rows may be stacked)."""
    flow = np.asarray(flow, dtype=np.float64)
    n = g.n
    if flow.ndim == 1:
        return np.bincount(g.heads, flow, n) - np.bincount(g.tails, flow, n)
    out = np.zeros((n,) + flow.shape[1:])
    np.add.at(out, g.heads, flow)
    np.add.at(out, g.tails, -flow)
    return out


def solve_laplacian(g: MultiGraph, b, tol: float = DEFAULT_TOL, maxiter: int | None = None):
    """Mean-zero solution of ``L x = b`` by Jacobi-preconditioned conjugate gradients.

    ``b`` may be a vector or an ``n x r`` block solved column by column in
    lock-step.  The preconditioned residual is projected onto mean-zero
    vectors each iteration so iterates never leave that subspace.  Returns
    ``(x, iterations)``.
    """
    op = g.operator()
    d = g.degrees.astype(np.float64)
    b = np.asarray(b, dtype=np.float64)
    b = b - b.mean(axis=0)
    maxiter = 10 * g.n if maxiter is None else maxiter

    def precondition(r):
        z = r / d if r.ndim == 1 else r / d[:, None]
        return z - z.mean(axis=0)

    bnorm = np.linalg.norm(b, axis=0)
    target = tol * np.where(bnorm > 0, bnorm, 1.0)
    x = np.zeros_like(b)
    r = b.copy()
    z = precondition(r)
    p = z.copy()
    rz = np.sum(r * z, axis=0)
    it = 0
    while True:
        active = np.linalg.norm(r, axis=0) > target
        if not np.any(active):
            break
        if it >= maxiter:
            raise SolverFailure(f"conjugate gradients did not converge in {it} iterations", best=x - x.mean(axis=0))
        Ap = op(p)
        pAp = np.sum(p * Ap, axis=0)
        alpha = np.where(active, rz / np.where(pAp > 0, pAp, 1.0), 0.0)
        x = x + alpha * p
        r = r - alpha * Ap
        z = precondition(r)
        rz_new = np.sum(r * z, axis=0)
        beta = np.where(active, rz_new / np.where(rz != 0, rz, 1.0), 0.0)
        p = z + beta * p
        rz = rz_new
        it += 1
    return x - x.mean(axis=0), it


def _require_connected(g: MultiGraph):
    comps = g.components()
    if len(comps) > 1:
        raise NotIdentifiableError(
            f"comparison graph has {len(comps)} components; scores are not identifiable", comps
        )


def weighted_norm(g: MultiGraph, flow) -> float:
    return float(np.sqrt(np.sum(g.w * np.asarray(flow) ** 2)))


def lsq_rank(data: PairwiseData, tol: float = DEFAULT_TOL, maxiter: int | None = None) -> RankingEstimate:
    """Mean-zero minimizer of the w-weighted residual ``||B phi - y||_w``.

    Solves the normal equations ``L_w phi = B^t W y``.
    """
    g = data.graph
    _require_connected(g)
    y = data.values
    phi, it = solve_laplacian(g, divergence(g, g.w * y), tol=tol, maxiter=maxiter)
    ynorm = weighted_norm(g, y)
    rel = weighted_norm(g, gradient(g, phi) - y) / ynorm if ynorm > 0 else 0.0
    return RankingEstimate(phi, rel, it)


def lsq_rank_many(g: MultiGraph, Y, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Estimates for many comparison vectors on one graph; ``Y`` is ``m x r``."""
    _require_connected(g)
    Y = np.asarray(Y, dtype=np.float64)
    phi, _ = solve_laplacian(g, divergence(g, g.w[:, None] * Y), tol=tol)
    return phi


def residuals(data: PairwiseData, est: RankingEstimate) -> np.ndarray:
    """``y - B phi`` on used pairs, in edge-index order."""
    return data.values - gradient(data.graph, est.phi)


def residual_histogram(data: PairwiseData, est: RankingEstimate, bins: int = 20,
                       atol: float = 1e-9) -> ResidualHistogram:
    """Histogram of residuals over a range symmetric about zero.

    Residuals smaller than ``atol * max(1, max|y|)`` are treated as exact zeros.
    """
    if bins < 1:
        raise InvalidInputError("bins must be positive")
    r = residuals(data, est)
    ymax = float(np.max(np.abs(data.values))) if data.graph.m else 0.0
    r = np.where(np.abs(r) <= atol * max(1.0, ymax), 0.0, r)
    R = float(np.max(np.abs(r))) if r.size else 0.0
    R = R if R > 0 else 1.0
    counts, edges = np.histogram(r, bins=bins, range=(-R, R))
    return ResidualHistogram(counts, edges, r, weighted_norm(data.graph, r))


def kendall_tau(phi1, phi2) -> float:
    """Fraction of vertex pairs that the two score vectors order oppositely.

    Only strict disagreements count: a pair tied in either vector adds nothing.
    """
    a = np.asarray(phi1, dtype=np.float64)
    b = np.asarray(phi2, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionError(f"score vectors differ in shape: {a.shape} vs {b.shape}")
    n = a.size
    if n < 2:
        raise DimensionError("need at least two alternatives")
    disagree = 0
    step = max(1, 2_000_000 // n)
    for s in range(0, n, step):
        da = np.sign(a[s : s + step, None] - a[None, :])
        db = np.sign(b[s : s + step, None] - b[None, :])
        disagree += int(np.count_nonzero(da * db < 0))
    return disagree / 2 / (n * (n - 1) / 2)


def l2_error(phi_hat, phi_true) -> float:
    """Euclidean distance after removing each vector's mean."""
    a = np.asarray(phi_hat, dtype=np.float64)
    b = np.asarray(phi_true, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"score vectors differ in shape: {a.shape} vs {b.shape}")
    return float(np.linalg.norm((a - a.mean()) - (b - b.mean())))
