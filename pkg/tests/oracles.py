"""Independent reference computations used by the tests.

Everything here is deliberately naive: dense matrices built entry by entry,
pseudoinverses, brute-force enumeration.  None of it shares code with the
package beyond the edge-index convention.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def dense_laplacian(n, edges):
    """``edges`` is an iterable of ``(i, j, w)``."""
    L = np.zeros((n, n))
    for i, j, w in edges:
        L[i, i] += w
        L[j, j] += w
        L[i, j] -= w
        L[j, i] -= w
    return L


def spectrum(n, edges):
    return np.linalg.eigvalsh(dense_laplacian(n, edges))


def lsq_pinv(n, edges, y):
    """Minimum-norm weighted least squares via the incidence pseudoinverse."""
    B = np.zeros((len(edges), n))
    for r, (i, j, _) in enumerate(edges):
        B[r, i], B[r, j] = -1.0, 1.0
    W = np.diag([w for _, _, w in edges])
    return np.linalg.pinv(B.T @ W @ B) @ B.T @ W @ np.asarray(y, dtype=float)


def brute_min_cut(n, edges):
    best = math.inf
    for r in range(1, n):
        for U in itertools.combinations(range(n), r):
            s = set(U)
            c = sum(w for i, j, w in edges if (i in s) != (j in s))
            best = min(best, c)
    return best


def brute_normalized_cut(n, edges):
    best, arg = math.inf, None
    for r in range(1, n):
        for U in itertools.combinations(range(n), r):
            s = set(U)
            c = sum(w for i, j, w in edges if (i in s) != (j in s))
            val = n * c / (r * (n - r))
            if val < best - 1e-12:
                best, arg = val, s
    return best, arg


def brute_kendall(a, b):
    """Fraction of pairs ordered strictly oppositely by the two score vectors."""
    n = len(a)
    bad = sum(1 for i, j in itertools.combinations(range(n), 2) if (a[i] - a[j]) * (b[i] - b[j]) < 0)
    return bad / (n * (n - 1) / 2)


def ratings_oracle(entries, min_reviews=0):
    """Dict ``{(item_a, item_b): (w, y)}`` with ``item_a < item_b`` from raw triplets."""
    counts = {}
    for _, item, _ in entries:
        counts[item] = counts.get(item, 0) + 1
    keep = {it for it, c in counts.items() if c >= min_reviews}
    by_user = {}
    for user, item, r in entries:
        if item in keep:
            by_user.setdefault(user, {})[item] = r
    out = {}
    for a, b in itertools.combinations(sorted(keep), 2):
        diffs = [rs[b] - rs[a] for rs in by_user.values() if a in rs and b in rs]
        if diffs:
            out[(a, b)] = (len(diffs), sum(diffs) / len(diffs))
    return out


def path_l2(n):
    return 2 - 2 * math.cos(math.pi / n)


def cycle_l2(n):
    return 2 - 2 * math.cos(2 * math.pi / n)
