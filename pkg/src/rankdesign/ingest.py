"""Readers and writers for comparison data, and ratings-to-comparisons conversion.

Edge lists are UTF-8, tab-separated ``label_i  label_j  w  y`` lines where
``y`` estimates ``score(label_j) - score(label_i)``.  Lines starting with
``#`` are comments.  Vertex ids follow the sorted order of the labels.
"""

from __future__ import annotations

import csv
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DegenerateDatasetError, InvalidInputError, ParseError
from .graph import MultiGraph, edge_index
from .ranking import PairwiseData

log = logging.getLogger(__name__)

NUMBER_FORMAT = ".12g"


def fmt(x: float) -> str:
    return format(float(x), NUMBER_FORMAT)


@dataclass(frozen=True)
class RatingTriplets:
    """User-item ratings with at most one rating per (user, item)."""

    entries: tuple[tuple[str, str, float], ...]

    @classmethod
    def from_entries(cls, entries: Iterable) -> "RatingTriplets":
        latest: dict[tuple[str, str], float] = {}
        for user, item, rating in entries:
            rating = float(rating)
            if not math.isfinite(rating):
                raise InvalidInputError(f"non-finite rating for ({user}, {item})")
            key = (str(user), str(item))
            if key in latest:
                log.warning("duplicate rating for user %s, item %s; keeping the last", *key)
            latest[key] = rating
        return cls(tuple((u, i, r) for (u, i), r in latest.items()))

    @property
    def users(self) -> list[str]:
        return sorted({u for u, _, _ in self.entries})

    @property
    def items(self) -> list[str]:
        return sorted({i for _, i, _ in self.entries})


@dataclass(frozen=True)
class LabeledPairwiseData:
    data: PairwiseData
    labels: tuple[str, ...]
    metadata: dict = field(default_factory=dict)
    comments: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.labels) != self.data.n or len(set(self.labels)) != len(self.labels):
            raise InvalidInputError("labels must be distinct and match the vertex count")

    def index(self) -> dict[str, int]:
        return {lab: v for v, lab in enumerate(self.labels)}


def ratings_to_pairwise(t: RatingTriplets, min_reviews: int = 0) -> LabeledPairwiseData:
    """Average rating differences over users who rated both items of a pair.

    Items with fewer than ``min_reviews`` ratings are dropped first.  For a
    surviving pair ``i < j``, ``w`` is the number of common raters and ``y`` the
    mean of ``r_j - r_i`` over them.
    """
    if min_reviews < 0:
        raise InvalidInputError("min_reviews must be nonnegative")
    counts = Counter(item for _, item, _ in t.entries)
    labels = sorted(item for item, c in counts.items() if c >= min_reviews)
    n = len(labels)
    if n < 2:
        raise DegenerateDatasetError(f"{n} item(s) survive the min_reviews={min_reviews} filter")
    ids = {lab: v for v, lab in enumerate(labels)}
    by_user: dict[str, list[tuple[int, float]]] = defaultdict(list)
    for user, item, rating in t.entries:
        if item in ids:
            by_user[user].append((ids[item], rating))

    N = n * (n - 1) // 2
    w = np.zeros(N, dtype=np.int64)
    ysum = np.zeros(N)
    for user in sorted(by_user):
        rated = sorted(by_user[user])
        if len(rated) < 2:
            continue
        vid = np.array([v for v, _ in rated])
        r = np.array([x for _, x in rated])
        a, b = np.triu_indices(len(rated), 1)
        i, j = vid[a], vid[b]
        k = i * (2 * n - i - 1) // 2 + (j - i - 1)
        np.add.at(w, k, 1)
        np.add.at(ysum, k, r[b] - r[a])
    used = np.flatnonzero(w)
    g = MultiGraph(n, dict(zip(used.tolist(), w[used].tolist())))
    data = PairwiseData(g, dict(zip(used.tolist(), (ysum[used] / w[used]).tolist())))
    meta = {"min_reviews": min_reviews, "items_dropped": len(counts) - n}
    return LabeledPairwiseData(data, tuple(labels), meta)


def read_ratings_csv(path) -> RatingTriplets:
    """``user,item,rating`` rows; ``#`` comments and a header row are skipped."""
    rows = []
    header_seen = False
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if len(row) != 3:
                raise ParseError(f"expected 3 fields, got {len(row)}", lineno)
            try:
                rating = float(row[2])
            except ValueError:
                if not rows and not header_seen:
                    header_seen = True  # first data-like row is a header
                    continue
                raise ParseError(f"bad rating {row[2]!r}", lineno) from None
            if not math.isfinite(rating):
                raise ParseError(f"non-finite rating {row[2]!r}", lineno)
            rows.append((row[0].strip(), row[1].strip(), rating))
    return RatingTriplets.from_entries(rows)


def _assemble(pairs: dict[tuple[str, str], tuple[int, float]], meta, comments=()) -> LabeledPairwiseData:
    """Turn ``{(a, b): (w, y)}`` with y ~ s(b) - s(a) into canonical pairwise data."""
    labels = sorted({x for ab in pairs for x in ab})
    if len(labels) < 2:
        raise DegenerateDatasetError("fewer than two alternatives")
    ids = {lab: v for v, lab in enumerate(labels)}
    n = len(labels)
    w, y = {}, {}
    for (a, b), (wk, yk) in pairs.items():
        key = edge_index(ids[a], ids[b], n)
        if ids[a] > ids[b]:
            yk = -yk
        w[key.k], y[key.k] = wk, yk
    return LabeledPairwiseData(PairwiseData(MultiGraph(n, w), y), tuple(labels), dict(meta), tuple(comments))


def _merge(pairs, a, b, wk, yk, where):
    """Fold ``(wk, yk)`` into the unordered pair ``{a, b}`` as a weighted mean."""
    if (b, a) in pairs:
        a, b, yk = b, a, -yk
    if (a, b) in pairs:
        w0, y0 = pairs[(a, b)]
        log.warning("%s: repeated pair (%s, %s); merging by weighted mean", where, a, b)
        pairs[(a, b)] = (w0 + wk, (w0 * y0 + wk * yk) / (w0 + wk))
    else:
        pairs[(a, b)] = (wk, yk)


def read_edge_list(path) -> LabeledPairwiseData:
    path = Path(path)
    pairs: dict[tuple[str, str], tuple[int, float]] = {}
    comments = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            if line.startswith("#"):
                comments.append(line)
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ParseError(f"expected 4 tab-separated fields, got {len(parts)}", lineno)
            a, b = parts[0], parts[1]
            if a == b:
                raise ParseError(f"self-comparison of {a!r}", lineno)
            try:
                wk = int(parts[2])
                yk = float(parts[3])
            except ValueError:
                raise ParseError(f"bad numeric field in {line!r}", lineno) from None
            if wk <= 0:
                raise ParseError(f"weight must be a positive integer, got {wk}", lineno)
            if not math.isfinite(yk):
                raise ParseError(f"non-finite comparison {parts[3]!r}", lineno)
            _merge(pairs, a, b, wk, yk, f"{path.name}:{lineno}")
    if not pairs:
        raise DegenerateDatasetError(f"{path} contains no comparisons")
    return _assemble(pairs, {"source": str(path)}, comments)


def write_edge_list(ld: LabeledPairwiseData, path, header: dict | None = None) -> None:
    """Write canonical lines sorted by ``(i, j)``.

    ``header`` entries become ``# key: value`` lines; without it the
    comments read from the source file are reproduced.
    """
    for lab in ld.labels:
        if any(c in lab for c in "\t\n\r") or lab.startswith("#"):
            raise InvalidInputError(f"label {lab!r} cannot be written to an edge list")
    if header is None:
        lines = list(ld.comments)
    else:
        lines = [f"# {k}: {v}" for k, v in header.items()]
    g = ld.data.graph
    for (i, j, w), y in zip(g.edges(), ld.data.values):
        lines.append(f"{ld.labels[i]}\t{ld.labels[j]}\t{w}\t{fmt(y)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_schedule(path) -> LabeledPairwiseData:
    """Game results ``team_a,team_b,score_a,score_b``; each game contributes
    ``score_b - score_a`` to the running mean for the pair."""
    path = Path(path)
    pairs: dict[tuple[str, str], tuple[int, float]] = {}
    header_seen = False
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if len(row) != 4:
                raise ParseError(f"expected 4 fields, got {len(row)}", lineno)
            a, b = row[0].strip(), row[1].strip()
            try:
                sa, sb = float(row[2]), float(row[3])
            except ValueError:
                if not pairs and not header_seen:
                    header_seen = True
                    continue
                raise ParseError(f"bad score in {row!r}", lineno) from None
            if not (math.isfinite(sa) and math.isfinite(sb)):
                raise ParseError("non-finite score", lineno)
            if a == b:
                raise ParseError(f"team {a!r} cannot play itself", lineno)
            if (b, a) in pairs:
                a, b, sa, sb = b, a, sb, sa
            w0, y0 = pairs.get((a, b), (0, 0.0))
            pairs[(a, b)] = (w0 + 1, y0 + (sb - sa - y0) / (w0 + 1))
    if not pairs:
        raise DegenerateDatasetError(f"{path} contains no games")
    return _assemble(pairs, {"source": str(path)})


def relabel(ld: LabeledPairwiseData, labels) -> LabeledPairwiseData:
    """Same comparisons under new vertex labels (re-sorted, orientations adjusted)."""
    pairs = {}
    for (i, j, w), y in zip(ld.data.graph.edges(), ld.data.values):
        pairs[(labels[i], labels[j])] = (w, y)
    return _assemble(pairs, ld.metadata, ld.comments)
