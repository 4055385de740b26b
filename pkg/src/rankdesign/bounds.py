"""Closed-form upper bounds on the algebraic connectivity."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import HypothesisViolation, InvalidInputError, InvalidSubsetError, SizeError
from .graph import MultiGraph, global_min_cut

EXHAUSTIVE_CAP = 20


@dataclass(frozen=True)
class BoundReport:
    name: str
    value: float
    certificate: frozenset | None = None

    def as_dict(self) -> dict:
        cert = None if self.certificate is None else sorted(self.certificate)
        return {"name": self.name, "value": self.value, "certificate": cert}


def degree_bound(g: MultiGraph) -> tuple[float, float]:
    """``(n d_min / (n-1), 2M / (n-1))``; the first never exceeds the second."""
    n = g.n
    return n * float(g.degrees.min()) / (n - 1), 2.0 * g.M / (n - 1)


def cut_bound(g: MultiGraph, subset) -> BoundReport:
    """Normalized cut ``n cut(U, U^c) / (|U| |U^c|)`` for a proper nonempty ``U``."""
    U = frozenset(int(u) for u in subset)
    n = g.n
    if not U or len(U) >= n or min(U) < 0 or max(U) >= n:
        raise InvalidSubsetError("subset must be a proper, nonempty set of vertex ids")
    size = len(U)
    return BoundReport("cut", n * g.cut_weight(U) / (size * (n - size)), U)


def best_cut_bound_exhaustive(g: MultiGraph, cap: int = EXHAUSTIVE_CAP) -> BoundReport:
    """Smallest normalized cut over all bipartitions (``2^(n-1) - 1`` of them)."""
    n = g.n
    if n > cap:
        raise SizeError(f"exhaustive cut search is capped at n={cap}, got n={n}")
    # subsets never containing the last vertex cover each bipartition once
    masks = np.arange(1, 1 << (n - 1), dtype=np.int64)
    cut = np.zeros(masks.size, dtype=np.int64)
    for a, b, w in g.edges():
        cut += w * (((masks >> a) & 1) != ((masks >> b) & 1))
    sizes = np.zeros(masks.size, dtype=np.int64)
    for v in range(n - 1):
        sizes += (masks >> v) & 1
    values = n * cut / (sizes * (n - sizes))
    best = int(np.argmin(values))
    U = frozenset(v for v in range(n - 1) if (int(masks[best]) >> v) & 1)
    return BoundReport("cut", float(values[best]), U)


def er_bound(n: int, p: float, eps: float) -> float:
    """High-probability ceiling ``np + 4 n^-2 sqrt(2 log(1/eps))`` for G(n, p).

    Holds with probability at least ``1 - eps``; requires ``n`` even.
    """
    if n % 2:
        raise HypothesisViolation(f"the bound assumes an even vertex count, got n={n}")
    if not 0 < eps <= 1:
        raise InvalidInputError("eps must lie in (0, 1]")
    if not 0 <= p <= 1:
        raise InvalidInputError("p must lie in [0, 1]")
    return n * p + 4.0 * n**-2 * math.sqrt(2.0 * math.log(1.0 / eps))


def er_bound_edges(n: int, expected_edges: float, eps: float) -> float:
    """The same bound written in terms of the expected edge count ``pN``."""
    if n % 2:
        raise HypothesisViolation(f"the bound assumes an even vertex count, got n={n}")
    return 2.0 * expected_edges / (n - 1) + 4.0 * n**-2 * math.sqrt(2.0 * math.log(1.0 / eps))


def edge_connectivity_bound(g: MultiGraph) -> BoundReport:
    """Edge connectivity as a ceiling on lambda_2.

    Valid for simple, non-complete graphs.  On ``K_n`` lambda_2 = n exceeds
    the edge connectivity n - 1, so the value is not a bound there; a
    warning is emitted for that case and for weights above one.
    """
    if g.m and int(g.w.max()) > 1:
        warnings.warn("edge-connectivity bound is stated for unit weights", stacklevel=2)
    if g.m == g.N:
        warnings.warn("edge connectivity does not bound lambda_2 on a complete graph", stacklevel=2)
    cut = global_min_cut(g)
    return BoundReport("edge_connectivity", float(cut.value), cut.partition)
