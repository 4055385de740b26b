"""Weighted multigraphs on the complete graph's edge set.

Unordered vertex pairs ``{i, j}`` with ``i < j`` are numbered lexicographically,
``(0,1), (0,2), ..., (0,n-1), (1,2), ...``.  Each pair is oriented with tail ``i``
and head ``j``, so a comparison value stored on pair ``k`` estimates
``phi[j] - phi[i]``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .errors import DimensionError, InvalidEdgeError, InvalidInputError


class EdgeKey(NamedTuple):
    i: int
    j: int
    k: int


class DegreeStats(NamedTuple):
    d: np.ndarray
    d_plus: int
    d_minus: int
    M: int
    m: int


class MinCut(NamedTuple):
    value: int
    partition: frozenset


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


def _pair_offset(i: int, n: int) -> int:
    return i * (2 * n - i - 1) // 2


def edge_index(i: int, j: int, n: int) -> EdgeKey:
    """Canonical key of the unordered pair ``{i, j}`` in an ``n``-vertex graph."""
    i, j, n = int(i), int(j), int(n)
    if i == j:
        raise InvalidEdgeError(f"self-loop ({i}, {j}) is not an edge")
    if not (0 <= i < n and 0 <= j < n):
        raise InvalidEdgeError(f"vertex out of range for n={n}: ({i}, {j})")
    if i > j:
        i, j = j, i
    return EdgeKey(i, j, _pair_offset(i, n) + (j - i - 1))


def edge_pair(k: int, n: int) -> EdgeKey:
    """Inverse of :func:`edge_index`."""
    k, n = int(k), int(n)
    if not 0 <= k < num_pairs(n):
        raise InvalidEdgeError(f"edge index {k} out of range for n={n}")
    tails, heads = pair_arrays(n)
    return EdgeKey(int(tails[k]), int(heads[k]), k)


@lru_cache(maxsize=16)
def pair_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Tail and head arrays of all N pairs, indexed by edge index."""
    tails, heads = np.triu_indices(n, 1)
    tails.setflags(write=False)
    heads.setflags(write=False)
    return tails, heads


def _as_key(e, n: int) -> EdgeKey:
    if isinstance(e, EdgeKey):
        key = edge_index(e.i, e.j, n)
        if key.k != e.k:
            raise InvalidEdgeError(f"inconsistent edge key {e} for n={n}")
        return key
    i, j = e
    return edge_index(i, j, n)


def _check_weight(w) -> int:
    if isinstance(w, (bool, np.bool_)) or not isinstance(w, (int, np.integer)):
        raise InvalidInputError(f"edge weights must be integers, got {w!r}")
    w = int(w)
    if w < 0:
        raise InvalidInputError(f"edge weights must be nonnegative, got {w}")
    return w


class LaplacianOperator:
    """Matrix-free action of a weighted Laplacian held as edge arrays.

    Unlike :class:`MultiGraph` this object is mutable; :meth:`increment`
    lets sequential algorithms grow the weights without rebuilding.
    """

    def __init__(self, n, tails, heads, weights):
        self.n = int(n)
        self.tails = np.asarray(tails, dtype=np.intp).copy()
        self.heads = np.asarray(heads, dtype=np.intp).copy()
        self.weights = np.asarray(weights, dtype=np.float64).copy()
        self._pos = {(int(a), int(b)): p for p, (a, b) in enumerate(zip(self.tails, self.heads))}

    def increment(self, i: int, j: int, c: int = 1) -> None:
        if i > j:
            i, j = j, i
        p = self._pos.get((i, j))
        if p is None:
            self._pos[(i, j)] = len(self.weights)
            self.tails = np.append(self.tails, i)
            self.heads = np.append(self.heads, j)
            self.weights = np.append(self.weights, float(c))
        else:
            self.weights[p] += c

    def degrees(self) -> np.ndarray:
        return np.bincount(self.tails, self.weights, self.n) + np.bincount(
            self.heads, self.weights, self.n
        )

    def __call__(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        if v.shape[0] != self.n:
            raise DimensionError(f"vector has length {v.shape[0]}, expected {self.n}")
        diff = v[self.tails] - v[self.heads]
        if v.ndim == 1:
            flow = self.weights * diff
            return np.bincount(self.tails, flow, self.n) - np.bincount(self.heads, flow, self.n)
        flow = self.weights[:, None] * diff
        out = np.zeros_like(v)
        np.add.at(out, self.tails, flow)
        np.add.at(out, self.heads, -flow)
        return out


@dataclass(frozen=True)
class MultiGraph:
    """Immutable multigraph: ``n`` vertices and integer weights keyed by edge index."""

    n: int
    weights: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        n = self.n
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 2:
            raise InvalidInputError(f"a graph needs n >= 2 vertices, got {n!r}")
        object.__setattr__(self, "n", int(n))
        N = num_pairs(self.n)
        clean = {}
        for k, w in self.weights.items():
            k = int(k)
            if not 0 <= k < N:
                raise InvalidEdgeError(f"edge index {k} out of range for n={n}")
            w = _check_weight(w)
            if w:
                clean[k] = w
        object.__setattr__(self, "weights", MappingProxyType(dict(sorted(clean.items()))))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "MultiGraph":
        """Build from ``(i, j)`` or ``(i, j, w)`` tuples; repeated pairs accumulate."""
        acc: dict[int, int] = {}
        for e in edges:
            if len(e) == 2:
                i, j, w = e[0], e[1], 1
            else:
                i, j, w = e
            k = edge_index(i, j, n).k
            acc[k] = acc.get(k, 0) + _check_weight(w)
        return cls(n, acc)

    @classmethod
    def from_weight_vector(cls, n: int, w) -> "MultiGraph":
        w = np.asarray(w)
        if w.shape != (num_pairs(n),):
            raise DimensionError(f"weight vector must have length {num_pairs(n)}")
        if not np.issubdtype(w.dtype, np.integer):
            raise InvalidInputError("edge weights must be integers")
        nz = np.flatnonzero(w)
        return cls(n, {int(k): int(w[k]) for k in nz})

    # -- edge arrays -------------------------------------------------------

    @cached_property
    def keys(self) -> np.ndarray:
        return np.fromiter(self.weights.keys(), dtype=np.intp, count=len(self.weights))

    @cached_property
    def w(self) -> np.ndarray:
        return np.fromiter(self.weights.values(), dtype=np.int64, count=len(self.weights))

    @cached_property
    def tails(self) -> np.ndarray:
        return pair_arrays(self.n)[0][self.keys]

    @cached_property
    def heads(self) -> np.ndarray:
        return pair_arrays(self.n)[1][self.keys]

    @property
    def N(self) -> int:
        return num_pairs(self.n)

    @property
    def M(self) -> int:
        return int(self.w.sum())

    @property
    def m(self) -> int:
        return len(self.weights)

    def weight(self, i: int, j: int) -> int:
        return self.weights.get(edge_index(i, j, self.n).k, 0)

    def edges(self):
        """Iterate ``(i, j, w)`` over positive-weight pairs in index order."""
        for a, b, w in zip(self.tails, self.heads, self.w):
            yield int(a), int(b), int(w)

    def weight_vector(self) -> np.ndarray:
        out = np.zeros(self.N, dtype=np.int64)
        out[self.keys] = self.w
        return out

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.bincount(self.tails, self.w, self.n).astype(np.int64) + np.bincount(
            self.heads, self.w, self.n
        ).astype(np.int64)

    # -- linear algebra ----------------------------------------------------

    def operator(self) -> LaplacianOperator:
        return LaplacianOperator(self.n, self.tails, self.heads, self.w)

    def laplacian_apply(self, v) -> np.ndarray:
        return self.operator()(v)

    def adjacency_dense(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=np.int64)
        A[self.tails, self.heads] = self.w
        A[self.heads, self.tails] = self.w
        return A

    def laplacian_dense(self) -> np.ndarray:
        A = self.adjacency_dense().astype(np.float64)
        return np.diag(A.sum(axis=1)) - A

    def laplacian_sparse(self):
        import scipy.sparse as sp

        n = self.n
        rows = np.concatenate([self.tails, self.heads, np.arange(n)])
        cols = np.concatenate([self.heads, self.tails, np.arange(n)])
        vals = np.concatenate([-self.w, -self.w, self.degrees]).astype(np.float64)
        return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))

    # -- combinatorics -----------------------------------------------------

    def neighbors(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in zip(self.tails.tolist(), self.heads.tolist()):
            nbrs[a].append(b)
            nbrs[b].append(a)
        return nbrs

    def components(self) -> list[list[int]]:
        """Connected components by breadth-first search, each sorted."""
        nbrs = self.neighbors()
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [s], deque([s])
            while queue:
                u = queue.popleft()
                for v in nbrs[u]:
                    if not seen[v]:
                        seen[v] = True
                        comp.append(v)
                        queue.append(v)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def add_weight(self, e, c: int = 1) -> "MultiGraph":
        key = _as_key(e, self.n)
        c = _check_weight(c)
        if c == 0:
            raise InvalidInputError("increment must be a positive integer")
        new = dict(self.weights)
        new[key.k] = new.get(key.k, 0) + c
        return MultiGraph(self.n, new)

    def cut_weight(self, subset) -> int:
        mask = np.zeros(self.n, dtype=bool)
        mask[list(subset)] = True
        return int(self.w[mask[self.tails] != mask[self.heads]].sum())


# -- module-level operations -------------------------------------------------


def add_weight(g: MultiGraph, e, c: int = 1) -> MultiGraph:
    return g.add_weight(e, c)


def laplacian_apply(g: MultiGraph, v) -> np.ndarray:
    return g.laplacian_apply(v)


def degree_stats(g: MultiGraph) -> DegreeStats:
    d = g.degrees
    return DegreeStats(d, int(d.max()), int(d.min()), g.M, g.m)


def is_connected(g: MultiGraph) -> bool:
    return g.is_connected()


def global_min_cut(g: MultiGraph) -> MinCut:
    """Global minimum cut by Stoer-Wagner maximum-adjacency contraction.

    Ties in the adjacency ordering go to the lowest vertex id, so the
    returned partition is deterministic.  The partition is the side that
    does not contain vertex 0 at the time it was found.
    """
    n = g.n
    if n < 2:
        raise InvalidInputError("minimum cut needs n >= 2")
    comps = g.components()
    if len(comps) > 1:
        return MinCut(0, frozenset(comps[-1]))

    W = g.adjacency_dense()
    groups = {v: [v] for v in range(n)}
    alive = list(range(n))
    best_value, best_set = None, None
    while len(alive) > 1:
        idx = np.array(alive)
        in_set = np.zeros(n, dtype=bool)
        conn = np.zeros(n, dtype=np.int64)
        prev = last = alive[0]
        in_set[last] = True
        conn += W[last]
        for _ in range(len(alive) - 1):
            cand = idx[~in_set[idx]]
            nxt = int(cand[np.argmax(conn[cand])])
            prev, last = last, nxt
            phase_cut = int(conn[nxt])
            in_set[nxt] = True
            conn += W[nxt]
        if best_value is None or phase_cut < best_value:
            best_value, best_set = phase_cut, list(groups[last])
        # merge last into prev
        W[prev] += W[last]
        W[:, prev] += W[:, last]
        W[prev, prev] = 0
        W[last] = 0
        W[:, last] = 0
        groups[prev].extend(groups.pop(last))
        alive.remove(last)
    return MinCut(int(best_value), frozenset(best_set))


# -- standard graphs -----------------------------------------------------------


def empty_graph(n: int) -> MultiGraph:
    return MultiGraph(n, {})


def path_graph(n: int) -> MultiGraph:
    return MultiGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> MultiGraph:
    if n < 3:
        raise InvalidInputError("a cycle needs n >= 3")
    return MultiGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int, weight: int = 1) -> MultiGraph:
    return MultiGraph(n, {k: weight for k in range(num_pairs(n))})


def complete_bipartite(a: int, b: int) -> MultiGraph:
    """``K_{a,b}`` with parts ``0..a-1`` and ``a..a+b-1``."""
    return MultiGraph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def star_graph(leaves: int) -> MultiGraph:
    return complete_bipartite(1, leaves)


def bridged_cliques(clique_size: int, bridges: int = 1) -> MultiGraph:
    """Two disjoint cliques ``0..s-1`` and ``s..2s-1`` joined by ``bridges`` edges.

    Bridge ``t`` joins vertex ``t`` to vertex ``s + t``.
    """
    s = clique_size
    if not 1 <= bridges <= s:
        raise InvalidInputError(f"bridges must lie in [1, {s}]")
    edges = [(i, j) for i in range(s) for j in range(i + 1, s)]
    edges += [(s + i, s + j) for i in range(s) for j in range(i + 1, s)]
    edges += [(t, s + t) for t in range(bridges)]
    return MultiGraph.from_edges(2 * s, edges)
