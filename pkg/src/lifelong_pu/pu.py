"""PU classification of words: lexicon words are positives, the rest unlabeled.

The classifier is an L2-regularized logistic regression over word vectors.
Unlabeled words are treated as negatives while fitting, the plain naive-PU
convention; its probability output is then read as the chance that a word is
an opinion word.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import AbstractSet, Iterable, Sequence

import numpy as np
from scipy.special import expit

from .embeddings import EmbeddingMatrix

log = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.5


class NoPositiveSeedsError(ValueError):
    pass


class TrainingError(RuntimeError):
    def __init__(self, message: str, iteration: int):
        super().__init__(f"iteration {iteration}: {message}")
        self.iteration = iteration


# ---------------------------------------------------------------------------
# lexicon and labels


@dataclass(frozen=True)
class Lexicon:
    """A general opinion lexicon.

    ``word in lexicon`` is an exact match; :meth:`contains_casefold` ignores
    case.
    """

    words: frozenset[str]
    _folded: frozenset[str] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        words = frozenset(self.words)
        if not words:
            raise ValueError("lexicon is empty")
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "_folded", frozenset(w.casefold() for w in words))

    def __contains__(self, word: object) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(sorted(self.words))

    def contains_casefold(self, word: str) -> bool:
        return word.casefold() in self._folded


def load_lexicon(path: str | os.PathLike) -> Lexicon:
    """Read one word per line, skipping blanks and ``#``/``;`` comment lines."""
    words = []
    with Path(path).open(encoding="utf-8", errors="replace") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith(("#", ";")):
                words.append(line)
    return Lexicon(frozenset(words))


def save_lexicon(lexicon: Lexicon, path: str | os.PathLike) -> None:
    Path(path).write_text("".join(w + "\n" for w in lexicon), encoding="utf-8")


@dataclass(frozen=True)
class LabelSplit:
    positives: frozenset[str]
    unlabeled: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "positives", frozenset(self.positives))
        object.__setattr__(self, "unlabeled", frozenset(self.unlabeled))
        if self.positives & self.unlabeled:
            raise ValueError("positives and unlabeled overlap")


def label_split(vocab: Iterable[str], lexicon: Lexicon | AbstractSet[str]) -> LabelSplit:
    """Partition ``vocab`` into lexicon words (P) and everything else (U)."""
    words = frozenset(vocab)
    lex = lexicon.words if isinstance(lexicon, Lexicon) else frozenset(lexicon)
    positives = words & lex
    if not positives:
        raise NoPositiveSeedsError("no positive seeds: no lexicon word occurs in the vocabulary")
    return LabelSplit(positives=positives, unlabeled=words - positives)


# ---------------------------------------------------------------------------
# logistic regression


@dataclass(frozen=True)
class PuOptions:
    l2: float = 1.0
    tol: float = 1e-5
    max_iter: int = 2000
    positive_weight: float = 1.0
    # random initialisation scale; 0 starts from the all-zero model
    init_scale: float = 0.0
    seed: int = 0


@dataclass(frozen=True, eq=False)
class PuClassifier:
    weights: np.ndarray
    bias: float = 0.0
    iterations: int = 0
    final_loss: float = float("nan")

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64).ravel()
        if not np.all(np.isfinite(w)) or not np.isfinite(self.bias):
            raise ValueError("classifier parameters must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", float(self.bias))

    @property
    def dim(self) -> int:
        return len(self.weights)

    @classmethod
    def zeros(cls, dim: int) -> PuClassifier:
        return cls(np.zeros(dim), 0.0)

    def decision(self, X: np.ndarray) -> np.ndarray:
        return X @ self.weights + self.bias

    def proba(self, X: np.ndarray) -> np.ndarray:
        return expit(self.decision(X))


def pu_loss(params: np.ndarray, X: np.ndarray, y: np.ndarray, l2: float = 1.0,
            positive_weight: float = 1.0) -> float:
    """Weighted negative log-likelihood plus ``l2/2 * |w|^2`` (bias unpenalised).

    ``params`` is ``[w_1, ..., w_d, b]``; the likelihood term is a sum over
    examples, not a mean.
    """
    w, b = params[:-1], params[-1]
    z = X @ w + b
    c = np.where(y > 0, positive_weight, 1.0)
    nll = np.sum(c * (np.logaddexp(0.0, z) - y * z))
    return float(nll + 0.5 * l2 * np.dot(w, w))


def pu_gradient(params: np.ndarray, X: np.ndarray, y: np.ndarray, l2: float = 1.0,
                positive_weight: float = 1.0) -> np.ndarray:
    w, b = params[:-1], params[-1]
    c = np.where(y > 0, positive_weight, 1.0)
    r = c * (expit(X @ w + b) - y)
    return np.append(X.T @ r + l2 * w, r.sum())


def fit_logistic(X: np.ndarray, y: np.ndarray, opts: PuOptions = PuOptions()) -> PuClassifier:
    """Gradient descent with Armijo backtracking on :func:`pu_loss`.

    Stops once the gradient's infinity norm drops below ``opts.tol`` or after
    ``opts.max_iter`` steps.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    d = X.shape[1]
    rng = np.random.default_rng(opts.seed)
    params = opts.init_scale * rng.standard_normal(d + 1) if opts.init_scale > 0 else np.zeros(d + 1)
    args = (X, y, opts.l2, opts.positive_weight)

    loss = pu_loss(params, *args)
    if not np.isfinite(loss):
        raise TrainingError("non-finite loss", 0)
    step = 1.0
    it = 0
    while it < opts.max_iter:
        grad = pu_gradient(params, *args)
        if not np.all(np.isfinite(grad)):
            raise TrainingError("non-finite gradient", it + 1)
        if np.max(np.abs(grad)) < opts.tol:
            break
        gnorm2 = float(np.dot(grad, grad))
        it += 1
        while True:
            candidate = params - step * grad
            new_loss = pu_loss(candidate, *args)
            if not np.isfinite(new_loss):
                raise TrainingError("non-finite loss", it)
            if new_loss <= loss - 0.5 * step * gnorm2:
                break
            step *= 0.5
            if step < 1e-20:
                raise TrainingError("line search failed to decrease the loss", it)
        params, loss = candidate, new_loss
        step *= 2.0
    else:
        log.debug("logistic regression hit max_iter=%d (loss %.6g)", opts.max_iter, loss)
    return PuClassifier(params[:-1], params[-1], iterations=it, final_loss=loss)


def train_pu(V: EmbeddingMatrix, split: LabelSplit, opts: PuOptions = PuOptions()) -> PuClassifier:
    """Fit the PU classifier: ``split.positives`` as class 1, ``split.unlabeled`` as class 0."""
    if len(split.positives) < 2 or len(split.unlabeled) < 2:
        raise ValueError("PU training needs at least 2 positive and 2 unlabeled words")
    pos = V.rows(sorted(split.positives))
    unl = V.rows(sorted(split.unlabeled))
    X = np.concatenate([V.vectors[pos], V.vectors[unl]])
    y = np.concatenate([np.ones(len(pos)), np.zeros(len(unl))])
    return fit_logistic(X, y, opts)


def predict_scores(clf: PuClassifier, V: EmbeddingMatrix, words: Sequence[str]) -> list[tuple[str, float]]:
    """Probability of each word being an opinion word, in input order."""
    words = list(words)
    if not words:
        return []
    probs = clf.proba(V.vectors[V.rows(words)])
    return [(w, float(p)) for w, p in zip(words, probs)]


def predict_positive(clf: PuClassifier, V: EmbeddingMatrix, candidates: Iterable[str],
                     threshold: float = DEFAULT_THRESHOLD) -> frozenset[str]:
    """Candidates whose score is strictly above ``threshold``."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must lie in [0, 1]")
    return frozenset(w for w, p in predict_scores(clf, V, sorted(set(candidates))) if p > threshold)


# ---------------------------------------------------------------------------
# persistence


def save_classifier(clf: PuClassifier, path: str | os.PathLike) -> None:
    body = f"{clf.dim}\n{clf.bias!r}\n" + " ".join(repr(float(x)) for x in clf.weights) + "\n"
    Path(path).write_text(body, encoding="utf-8")


def load_classifier(path: str | os.PathLike) -> PuClassifier:
    lines = Path(path).read_text(encoding="utf-8").split("\n")
    dim, bias = int(lines[0]), float(lines[1])
    weights = [float(x) for x in lines[2].split()] if dim else []
    if len(weights) != dim:
        raise ValueError(f"classifier file declares dim {dim} but has {len(weights)} weights")
    return PuClassifier(np.array(weights), bias)
