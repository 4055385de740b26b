"""Eigenpairs of the weighted Laplacian.

The iterative path is a Krylov subspace method with full reorthogonalization,
explicit deflation against known eigenvectors (always the constant vector) and
thick restarts.  Only the operator action is needed, so a Laplacian with m
edges costs O(m) per step.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDegreeError, InvalidInputError, SizeError, SolverFailure
from .graph import MultiGraph

DENSE_SIZE_CAP = 2000
DEFAULT_TOL = 1e-8
KRYLOV_DIM = 100
# Fiedler pairs with a gap to the next eigenvalue below this are treated as degenerate.
MULTIPLICITY_GAP = 1e-6


@dataclass(frozen=True)
class SpectralPair:
    value: float
    vector: np.ndarray
    residual_norm: float


@dataclass(frozen=True)
class ClusterResult:
    assignments: np.ndarray
    within_cluster_sum: float
    embedding: np.ndarray
    disconnected: bool = False


def _orthogonalize(x, *bases):
    # two passes of classical Gram-Schmidt against every basis
    for _ in range(2):
        for Q in bases:
            if Q.shape[1]:
                x = x - Q @ (Q.T @ x)
    return x


def _canonical_sign(v):
    p = int(np.argmax(np.abs(v)))
    return -v if v[p] < 0 else v


def smallest_eigenpair(apply, n, deflate=None, *, tol=DEFAULT_TOL, v0=None, scale=1.0,
                       maxiter=None, seed=0, krylov_dim=KRYLOV_DIM):
    """Smallest eigenpair of a symmetric operator restricted to ``deflate``'s complement.

    ``deflate`` is an ``n x r`` matrix with orthonormal columns.  Convergence
    is declared when ``||A y - theta y|| <= max(tol, 1e3 * eps * scale)``.
    Raises :class:`SolverFailure` with the best Ritz pair after ``maxiter``
    operator applications (default ``50 n``).
    """
    Q = np.zeros((n, 0)) if deflate is None else np.asarray(deflate, dtype=np.float64)
    dim = n - Q.shape[1]
    if dim < 1:
        raise InvalidInputError("deflation space already spans the whole space")
    maxiter = 50 * n if maxiter is None else maxiter
    tol_eff = max(tol, 1e3 * np.finfo(float).eps * max(scale, 1.0))
    rng = np.random.default_rng(seed)

    x = rng.standard_normal(n)
    if v0 is not None:
        v0 = _orthogonalize(np.asarray(v0, dtype=np.float64), Q)
        nv = np.linalg.norm(v0)
        if nv > 0:
            x = v0 / nv + 1e-3 * x / np.linalg.norm(x)
    x = _orthogonalize(x, Q)
    x /= np.linalg.norm(x)

    m = min(dim, krylov_dim)
    keep = max(1, min(8, m // 3))
    V = x[:, None]
    AV = apply(x)[:, None]
    matvecs = 1
    best = None
    while True:
        while V.shape[1] < m:
            w = _orthogonalize(AV[:, -1], Q, V)
            nw = np.linalg.norm(w)
            if nw <= 1e-10 * max(scale, 1.0):
                # invariant subspace reached; continue from a fresh direction
                w = _orthogonalize(rng.standard_normal(n), Q, V)
                nw = np.linalg.norm(w)
                if nw <= 1e-12:
                    break
            v = w / nw
            V = np.column_stack([V, v])
            AV = np.column_stack([AV, apply(v)])
            matvecs += 1
        H = V.T @ AV
        H = 0.5 * (H + H.T)
        theta, S = np.linalg.eigh(H)
        Y = V @ S[:, :keep]
        AY = AV @ S[:, :keep]
        y, ay = Y[:, 0], AY[:, 0]
        res = float(np.linalg.norm(ay - theta[0] * y))
        if best is None or res < best[2]:
            best = (float(theta[0]), y, res)
        if res <= tol_eff or V.shape[1] >= dim:
            return float(theta[0]), y / np.linalg.norm(y), res, theta
        if matvecs >= maxiter:
            pair = SpectralPair(best[0], best[1], best[2])
            raise SolverFailure(f"eigensolver did not converge in {matvecs} products", best=pair)
        V, AV = Y, AY


def _constant(n):
    return np.full((n, 1), 1.0 / np.sqrt(n))


def _scale(g: MultiGraph) -> float:
    return float(2 * g.degrees.max()) if g.m else 1.0


def fiedler(g: MultiGraph, tol: float = DEFAULT_TOL, v0=None, maxiter=None, seed=0) -> SpectralPair:
    """Second-smallest Laplacian eigenvalue and a unit eigenvector orthogonal to 1.

    ``v0`` warm-starts the solver.  For a disconnected graph the value is 0
    and the vector is constant on components.
    """
    if g.n < 2:
        raise InvalidInputError("fiedler needs n >= 2")
    if g.n == 2:
        v = np.array([-1.0, 1.0]) / np.sqrt(2.0)
        lam = 2.0 * g.weights.get(0, 0)
        return SpectralPair(lam, _canonical_sign(v), 0.0)
    lam, v, res, _ = smallest_eigenpair(
        g.operator(), g.n, _constant(g.n), tol=tol, v0=v0, scale=_scale(g), maxiter=maxiter, seed=seed
    )
    return SpectralPair(max(lam, 0.0) if lam > -tol else lam, _canonical_sign(v), res)


def smallest_eigs(g: MultiGraph, count: int, tol: float = DEFAULT_TOL, seed=0) -> list[SpectralPair]:
    """The ``count`` smallest eigenpairs, found one at a time with deflation.

    Deflating each converged vector before the next solve recovers repeated
    eigenvalues, which a single Krylov sequence cannot see.
    """
    n = g.n
    if not 1 <= count <= n:
        raise InvalidInputError(f"count must lie in [1, {n}]")
    Q = _constant(n)
    pairs = [SpectralPair(0.0, Q[:, 0].copy(), float(np.linalg.norm(g.laplacian_apply(Q[:, 0]))))]
    op, scale = g.operator(), _scale(g)
    for t in range(1, count):
        if Q.shape[1] == n - 1:
            # last direction is fixed by orthogonality
            v = _orthogonalize(np.random.default_rng(seed).standard_normal(n), Q)
            v /= np.linalg.norm(v)
            av = op(v)
            lam = float(v @ av)
            res = float(np.linalg.norm(av - lam * v))
        else:
            lam, v, res, _ = smallest_eigenpair(op, n, Q, tol=tol, scale=scale, seed=seed + t)
        v = _canonical_sign(v)
        pairs.append(SpectralPair(lam, v, res))
        Q = np.column_stack([Q, v])
    return pairs


def full_spectrum(g: MultiGraph, cap: int = DENSE_SIZE_CAP) -> np.ndarray:
    """All Laplacian eigenvalues, ascending, by dense symmetric decomposition."""
    if g.n > cap:
        raise SizeError(f"n={g.n} exceeds the dense cap {cap}; use fiedler/smallest_eigs")
    return np.linalg.eigvalsh(g.laplacian_dense())


def spectral_cluster(g: MultiGraph, k: int, seed: int = 0, cap: int = DENSE_SIZE_CAP) -> ClusterResult:
    """Normalized spectral clustering (Ng-Jordan-Weiss flavour).

    Vertices are embedded by the eigenvectors of ``D^-1/2 L D^-1/2`` for its
    ``k`` smallest eigenvalues, rows are scaled to unit length and k-means
    (k-means++ seeding, one restart) assigns clusters.  When the k-th
    eigenvalue is repeated past position k the whole eigenspace is kept, so
    the embedding may have more than ``k`` columns; this keeps the result
    independent of the arbitrary basis chosen inside that eigenspace.
    """
    from sklearn.cluster import KMeans

    n = g.n
    if not 1 <= k <= n:
        raise InvalidInputError(f"k must lie in [1, {n}]")
    d = g.degrees.astype(np.float64)
    if np.any(d == 0):
        raise DegenerateDegreeError(f"isolated vertices: {np.flatnonzero(d == 0).tolist()}")
    disconnected = not g.is_connected()
    if disconnected:
        warnings.warn("graph is disconnected (lambda_2 = 0); clustering anyway", stacklevel=2)
    if n > cap:
        raise SizeError(f"n={n} exceeds the dense cap {cap}")
    s = 1.0 / np.sqrt(d)
    L = s[:, None] * g.laplacian_dense() * s[None, :]
    vals, vecs = np.linalg.eigh(L)
    width = k
    tol = 1e-8 * max(1.0, vals[-1])
    while width < n and vals[width] - vals[k - 1] <= tol:
        width += 1
    emb = vecs[:, :width]
    norms = np.linalg.norm(emb, axis=1, keepdims=True)
    emb = emb / np.where(norms > 0, norms, 1.0)
    if k == 1:
        labels = np.zeros(n, dtype=np.int64)
    else:
        km = KMeans(n_clusters=k, init="k-means++", n_init=1, max_iter=300, tol=1e-6,
                    random_state=seed, algorithm="lloyd")
        labels = km.fit_predict(emb).astype(np.int64)
        labels = _relabel_by_first_occurrence(labels)
    sums = []
    for c in range(k):
        pts = emb[labels == c]
        if len(pts):
            sums.append(float(((pts - pts.mean(axis=0)) ** 2).sum()))
    return ClusterResult(labels, float(np.mean(sums)), emb, disconnected)


def _relabel_by_first_occurrence(labels):
    mapping = {}
    for lab in labels.tolist():
        mapping.setdefault(lab, len(mapping))
    return np.array([mapping[lab] for lab in labels.tolist()], dtype=np.int64)
