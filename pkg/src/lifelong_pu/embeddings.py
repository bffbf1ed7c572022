"""Per-domain word vectors.

Includes a small skip-gram trainer with negative sampling (numpy only, meant
for desk-scale corpora) and reader/writer for the plain-text word-vector
format::

    <vocab_size> <dim>
    <word> <f1> ... <fd>
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse
from scipy.special import expit, log_expit

from .corpus import Document, Vocabulary, iter_tokens

log = logging.getLogger(__name__)


class UnknownWordError(KeyError):
    """Raised when a word is looked up that is not in the vocabulary."""

    def __init__(self, word: str):
        super().__init__(word)
        self.word = word

    def __str__(self) -> str:
        return f"unknown word: {self.word!r}"


class EmbeddingFormatError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class DegenerateCorpusError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    """Dense word vectors, one row per word."""

    words: tuple[str, ...]
    vectors: np.ndarray
    # mean per-pair loss of each epoch, when produced by train_skipgram
    epoch_losses: tuple[float, ...] = ()
    index: Mapping[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        vectors = np.array(self.vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(self.words):
            raise ValueError(
                f"expected {len(self.words)} rows of vectors, got array of shape {vectors.shape}"
            )
        if not np.all(np.isfinite(vectors)):
            raise ValueError("embedding contains non-finite values")
        index = {w: i for i, w in enumerate(self.words)}
        if len(index) != len(self.words):
            raise ValueError("duplicate word in embedding")
        vectors.setflags(write=False)
        object.__setattr__(self, "words", tuple(self.words))
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "index", index)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: object) -> bool:
        return word in self.index

    def row(self, word: str) -> int:
        try:
            return self.index[word]
        except KeyError:
            raise UnknownWordError(word) from None

    def rows(self, words: Iterable[str]) -> np.ndarray:
        return np.array([self.row(w) for w in words], dtype=np.intp)

    def vector(self, word: str) -> np.ndarray:
        return self.vectors[self.row(word)]

    def mask(self, words: Iterable[str]) -> np.ndarray:
        """Boolean row mask selecting ``words`` (unknown words ignored)."""
        m = np.zeros(len(self.words), dtype=bool)
        idx = [self.index[w] for w in words if w in self.index]
        m[idx] = True
        return m


# ---------------------------------------------------------------------------
# plain-text format


def save_embeddings(E: EmbeddingMatrix, path: str | os.PathLike, precision: int = 6) -> None:
    fmt = f"%.{precision}f"
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write(f"{len(E)} {E.dim}\n")
        for word, vec in zip(E.words, E.vectors):
            fh.write(word + " " + " ".join(fmt % x for x in vec) + "\n")


def load_embeddings(path: str | os.PathLike) -> EmbeddingMatrix:
    """Read word vectors in the plain-text word2vec format.

    Raises :class:`EmbeddingFormatError` carrying the offending line number on
    malformed rows, a dimension mismatch or a duplicated word.
    """
    words: list[str] = []
    rows: list[list[float]] = []
    seen: set[str] = set()
    with Path(path).open(encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise EmbeddingFormatError("header must be '<vocab_size> <dim>'", 1)
        try:
            n_words, dim = int(header[0]), int(header[1])
        except ValueError:
            raise EmbeddingFormatError("header must hold two integers", 1) from None
        for lineno, line in enumerate(fh, 2):
            parts = line.rstrip("\n").rstrip(" ").split(" ")
            if parts == [""]:
                continue
            word, values = parts[0], parts[1:]
            if len(values) != dim:
                raise EmbeddingFormatError(f"expected {dim} values for {word!r}, got {len(values)}", lineno)
            if word in seen:
                raise EmbeddingFormatError(f"duplicate word {word!r}", lineno)
            try:
                rows.append([float(v) for v in values])
            except ValueError as exc:
                raise EmbeddingFormatError(str(exc), lineno) from None
            seen.add(word)
            words.append(word)
    if len(words) != n_words:
        raise EmbeddingFormatError(f"header declares {n_words} words, file has {len(words)}")
    vectors = np.array(rows, dtype=np.float64).reshape(len(words), dim)
    return EmbeddingMatrix(tuple(words), vectors)


# ---------------------------------------------------------------------------
# skip-gram with negative sampling


@dataclass(frozen=True)
class SkipGramConfig:
    dim: int = 200
    window: int = 5
    negative_samples: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_learning_rate: float = 1e-4
    batch_size: int = 64
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1 or self.window < 1 or self.negative_samples < 1 or self.epochs < 1:
            raise ValueError("dim, window, negative_samples and epochs must all be >= 1")
        if self.learning_rate <= 0 or self.batch_size < 1:
            raise ValueError("learning_rate must be > 0 and batch_size >= 1")


def _context_pairs(sentences: Sequence[np.ndarray], window: int) -> np.ndarray:
    centers, contexts = [], []
    for ids in sentences:
        n = len(ids)
        for offset in range(1, window + 1):
            if offset >= n:
                break
            # both directions of each in-window pair
            centers += [ids[:-offset], ids[offset:]]
            contexts += [ids[offset:], ids[:-offset]]
    if not centers:
        return np.empty((0, 2), dtype=np.intp)
    return np.stack([np.concatenate(centers), np.concatenate(contexts)], axis=1)


# below this many matrix entries a sparse one-hot product beats np.add.at
_DENSE_SCATTER_LIMIT = 1 << 18


def _scatter_add(W: np.ndarray, rows: np.ndarray, updates: np.ndarray) -> None:
    """``W[rows] += updates`` with repeated rows accumulated."""
    if W.size > _DENSE_SCATTER_LIMIT:
        np.add.at(W, rows, updates)
        return
    n = len(rows)
    onehot = sparse.csc_matrix((np.ones(n), rows, np.arange(n + 1)), shape=(W.shape[0], n))
    W += onehot @ updates


def train_skipgram(
    docs: Sequence[Document], vocab: Vocabulary, config: SkipGramConfig = SkipGramConfig()
) -> EmbeddingMatrix:
    """Train skip-gram vectors with negative sampling over ``docs``.

    Out-of-vocabulary tokens are dropped before windowing. Pairs are visited in
    a seeded shuffle and updated in small mini-batches; the learning rate
    decays linearly to ``min_learning_rate``. Negatives are drawn from the
    unigram distribution raised to 0.75. The same seed and inputs give a
    bit-identical result.

    Returns the input-side vectors; the mean per-pair loss of every epoch is
    kept in ``epoch_losses``.
    """
    if len(vocab) < 2:
        raise DegenerateCorpusError("degenerate corpus: fewer than 2 vocabulary words")
    index = vocab.index
    sentences = [
        np.fromiter((index[t] for t in toks if t in index), dtype=np.intp) for toks in iter_tokens(docs)
    ]
    pairs = _context_pairs(sentences, config.window)
    if len(pairs) == 0:
        raise DegenerateCorpusError("degenerate corpus: no in-window word pairs")

    rng = np.random.default_rng(config.seed)
    v, d = len(vocab), config.dim
    w_in = (rng.random((v, d)) - 0.5) / d
    w_out = np.zeros((v, d))

    freq = np.array([vocab.counts[w] for w in vocab.words], dtype=np.float64) ** 0.75
    cum = np.cumsum(freq / freq.sum())
    cum[-1] = 1.0

    k, bs = config.negative_samples, config.batch_size
    n_pairs = len(pairs)
    steps_per_epoch = -(-n_pairs // bs)
    total_steps = steps_per_epoch * config.epochs
    lr0, lr_min = config.learning_rate, config.min_learning_rate

    epoch_losses = []
    step = 0
    for epoch in range(config.epochs):
        order = rng.permutation(n_pairs)
        negatives = np.searchsorted(cum, rng.random((n_pairs, k)), side="right")
        total = 0.0
        for start in range(0, n_pairs, bs):
            lr = max(lr_min, lr0 * (1.0 - step / total_steps))
            step += 1
            sel = order[start : start + bs]
            c, o = pairs[sel, 0], pairs[sel, 1]
            neg = negatives[sel]
            vc = w_in[c]  # (b, d)
            vo = w_out[o]  # (b, d)
            vn = w_out[neg]  # (b, k, d)
            pos_score = np.einsum("bd,bd->b", vc, vo)
            neg_score = np.einsum("bkd,bd->bk", vn, vc)
            total -= log_expit(pos_score).sum() + log_expit(-neg_score).sum()
            g_pos = expit(pos_score) - 1.0  # d loss / d pos_score
            g_neg = expit(neg_score)  # d loss / d neg_score
            grad_c = g_pos[:, None] * vo + np.einsum("bk,bkd->bd", g_neg, vn)
            grad_o = g_pos[:, None] * vc
            grad_n = g_neg[:, :, None] * vc[:, None, :]
            _scatter_add(w_in, c, -lr * grad_c)
            out_rows = np.concatenate([o, neg.ravel()])
            _scatter_add(w_out, out_rows, -lr * np.concatenate([grad_o, grad_n.reshape(-1, d)]))
        epoch_losses.append(float(total / n_pairs))
        log.debug("skip-gram epoch %d: mean loss %.5f", epoch + 1, epoch_losses[-1])

    if not np.all(np.isfinite(w_in)):
        raise FloatingPointError("skip-gram training diverged; lower the learning rate")
    return EmbeddingMatrix(vocab.words, w_in, epoch_losses=tuple(epoch_losses))
