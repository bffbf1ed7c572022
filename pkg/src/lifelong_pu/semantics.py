"""Stage one: grouping target-related words by embedding similarity.

Pairwise similarities are computed block by block and never stored as a full
v x v matrix; the neighbor table keeps only the top-k entries per word.
Ranking is by score descending with ties broken by the word string, so every
list is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, Mapping, Sequence

import numpy as np

from .embeddings import EmbeddingMatrix, UnknownWordError

Metric = Literal["cosine", "dot"]
METRICS = ("cosine", "dot")
DEFAULT_NEIGHBORS = 10

_BLOCK_ROWS = 512


class UnknownTargetError(UnknownWordError):
    def __str__(self) -> str:
        return f"unknown target: {self.word!r}"


def _check_metric(metric: str) -> None:
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")


def _scoring_matrix(E: EmbeddingMatrix, metric: str) -> np.ndarray:
    _check_metric(metric)
    if metric == "dot":
        return E.vectors
    norms = np.linalg.norm(E.vectors, axis=1, keepdims=True)
    # zero vectors get zero similarity to everything
    return np.divide(E.vectors, norms, out=np.zeros_like(E.vectors), where=norms > 0)


def similarity(E: EmbeddingMatrix, w1: str, w2: str, metric: Metric = "cosine") -> float:
    """Dot product or cosine similarity between the vectors of two words."""
    _check_metric(metric)
    a, b = E.vector(w1), E.vector(w2)
    dot = float(np.dot(a, b))
    if metric == "dot":
        return dot
    denom = float(np.linalg.norm(a) * np.linalg.norm(b))
    return dot / denom if denom > 0 else 0.0


@dataclass(frozen=True)
class NeighborTable:
    """Top-k most similar words for every vocabulary word."""

    k: int
    metric: str
    entries: Mapping[str, tuple[tuple[str, float], ...]]

    def __getitem__(self, word: str) -> tuple[tuple[str, float], ...]:
        try:
            return self.entries[word]
        except KeyError:
            raise UnknownWordError(word) from None

    def __contains__(self, word: object) -> bool:
        return word in self.entries

    def __iter__(self) -> Iterator[str]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def neighbors(self, word: str) -> list[str]:
        """Neighbor words of ``word`` without scores (``H(w)``)."""
        return [w for w, _ in self[word]]


def _word_ranks(words: Sequence[str]) -> np.ndarray:
    order = sorted(range(len(words)), key=words.__getitem__)
    ranks = np.empty(len(words), dtype=np.intp)
    ranks[order] = np.arange(len(words))
    return ranks


def _top_k_row(scores: np.ndarray, k: int, ranks: np.ndarray) -> np.ndarray:
    """Indices of the k best entries of ``scores`` (``-inf`` marks excluded)."""
    k = min(k, int(np.count_nonzero(scores > -np.inf)))
    if k == 0:
        return np.empty(0, dtype=np.intp)
    if k < len(scores):
        kth = np.partition(scores, len(scores) - k)[len(scores) - k]
        cand = np.flatnonzero(scores >= kth)
    else:
        cand = np.flatnonzero(scores > -np.inf)
    # primary key: score descending, secondary: word ascending
    order = np.lexsort((ranks[cand], -scores[cand]))
    return cand[order[:k]]


def _ranked_neighbors(
    E: EmbeddingMatrix, rows: np.ndarray, k: int, metric: str, ranks: np.ndarray
) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    S = _scoring_matrix(E, metric)
    for start in range(0, len(rows), _BLOCK_ROWS):
        block = rows[start : start + _BLOCK_ROWS]
        scores = S[block] @ S.T
        for r, i in enumerate(block):
            row = scores[r]
            row[i] = -np.inf
            top = _top_k_row(row, k, ranks)
            yield i, top, row[top]


def build_neighbor_table(
    E: EmbeddingMatrix, k: int = DEFAULT_NEIGHBORS, metric: Metric = "cosine"
) -> NeighborTable:
    """Precompute the ``k`` nearest neighbors of every word in ``E``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(E) < 2:
        raise ValueError("need at least 2 words to build a neighbor table")
    ranks = _word_ranks(E.words)
    words = E.words
    entries = {}
    for i, top, scores in _ranked_neighbors(E, np.arange(len(E)), k, metric, ranks):
        entries[words[i]] = tuple((words[j], float(s)) for j, s in zip(top, scores))
    return NeighborTable(k=k, metric=metric, entries=entries)


@dataclass(frozen=True)
class TargetQueryResult:
    target: str
    t_words: tuple[tuple[str, float], ...]

    @property
    def words(self) -> list[str]:
        return [w for w, _ in self.t_words]

    def __len__(self) -> int:
        return len(self.t_words)


def query_target(
    E: EmbeddingMatrix, target: str, n: int, metric: Metric = "cosine"
) -> TargetQueryResult:
    """Return the ``n`` words most similar to ``target`` (its t-words)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if target not in E:
        raise UnknownTargetError(target)
    ranks = _word_ranks(E.words)
    (_, top, scores), = _ranked_neighbors(E, np.array([E.row(target)]), n, metric, ranks)
    return TargetQueryResult(
        target=target, t_words=tuple((E.words[j], float(s)) for j, s in zip(top, scores))
    )


def edit_distance(a: str, b: str) -> int:
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def closest_strings(query: str, words: Iterable[str], count: int = 5) -> list[str]:
    """Vocabulary strings nearest to ``query`` by edit distance (for error hints)."""
    return sorted(words, key=lambda w: (edit_distance(query, w), w))[:count]
