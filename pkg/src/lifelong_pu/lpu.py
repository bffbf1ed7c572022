"""Lifelong PU learning: separating opinion words from aspect words.

The engine grows a set of *reliable* opinion words on top of the lexicon
positives. A candidate is trusted only when it has evidence in the neighbor
table: it must neighbor words the current classifier already predicts as
opinion words, and it must either come from knowledge mined across past
domains or be a self-prediction. Everything the final classifier scores above
the threshold among the unlabeled words is returned as new opinion words.

Variants
--------
``lpu``         full restricted iterations.
``lpu-minor``   expands only from mined knowledge, never from self-predictions.
``nll``         one classifier on the lexicon positives, no lifelong knowledge.
``ablation-b``  each round's predictions (prob > threshold) become the next
                round's positives, unrestricted.
``ablation-c``  each round retrains on lexicon positives plus the current
                predictions, unrestricted.
"""

from __future__ import annotations

import csv
import enum
import logging
import os
from dataclasses import dataclass, field
from typing import AbstractSet, Iterable, Mapping, NamedTuple, Sequence

from .embeddings import EmbeddingMatrix
from .knowledge import DEFAULT_MIN_SUPPORT, KnowledgeBase, mine_reliable, retain
from .pu import (
    DEFAULT_THRESHOLD,
    LabelSplit,
    Lexicon,
    PuClassifier,
    PuOptions,
    label_split,
    predict_positive,
    train_pu,
)
from .semantics import DEFAULT_NEIGHBORS, NeighborTable, TargetQueryResult

log = logging.getLogger(__name__)


class Variant(str, enum.Enum):
    LPU = "lpu"
    LPU_MINOR = "lpu-minor"
    NLL = "nll"
    ABLATION_B = "ablation-b"
    ABLATION_C = "ablation-c"


class Label(str, enum.Enum):
    ASPECT = "ASPECT"
    OPINION = "OPINION"


@dataclass(frozen=True)
class LpuConfig:
    """Engine settings.

    ``prediction_scope`` selects which words the per-iteration prediction
    covers: ``"unlabeled_only"`` (default) or ``"all_words"``. ``loop_rule``
    ``"and"`` stops at ``max_iterations`` or when no new reliable words
    arrive; ``"or"`` keeps going past ``max_iterations`` while new words keep
    arriving.
    """

    max_iterations: int = 10
    words_per_iteration: int = 50
    neighbor_k: int = DEFAULT_NEIGHBORS
    min_support: int = DEFAULT_MIN_SUPPORT
    threshold: float = DEFAULT_THRESHOLD
    variant: Variant = Variant.LPU
    prediction_scope: str = "unlabeled_only"
    loop_rule: str = "and"
    exclude_current_domain: bool = True
    pu: PuOptions = field(default_factory=PuOptions)

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.max_iterations < 1 or self.words_per_iteration < 1 or self.neighbor_k < 1:
            raise ValueError("max_iterations, words_per_iteration and neighbor_k must be >= 1")
        if self.prediction_scope not in ("unlabeled_only", "all_words"):
            raise ValueError(f"unknown prediction_scope {self.prediction_scope!r}")
        if self.loop_rule not in ("and", "or"):
            raise ValueError(f"unknown loop_rule {self.loop_rule!r}")


@dataclass
class LpuState:
    reliable_neighbors: frozenset[str] = frozenset()
    domain_knowledge: frozenset[str] = frozenset()
    reliable_sentiment: set[str] = field(default_factory=set)
    current_predictions: frozenset[str] = frozenset()
    new_sentiment: frozenset[str] = frozenset()
    t: int = 0


@dataclass(frozen=True)
class IterationRecord:
    """What one pass of the loop did.

    ``added`` went into the reliable set at the start of the pass;
    ``selected`` was ranked during the pass against ``evidence`` (the previous
    predictions) and is added at the start of the next one.
    """

    t: int
    n_reliable: int
    n_predicted: int
    n_new: int
    added: tuple[str, ...]
    selected: tuple[str, ...]
    evidence: frozenset[str]


@dataclass(frozen=True, eq=False)
class DisentangleResult:
    variant: Variant
    new_opinion_words: frozenset[str]
    classifier: PuClassifier
    learned_positives: frozenset[str] = frozenset()
    seed: frozenset[str] = frozenset()
    reliable_neighbors: frozenset[str] = frozenset()
    domain_knowledge: frozenset[str] = frozenset()
    iteration_log: tuple[IterationRecord, ...] = ()

    @property
    def w_plus(self) -> frozenset[str]:
        return self.new_opinion_words

    @property
    def opinion_words(self) -> frozenset[str]:
        """Every non-lexicon word the run ended up treating as an opinion word."""
        return self.new_opinion_words | self.learned_positives


# ---------------------------------------------------------------------------
# reliability ranking


def reliable_neighbors(H: NeighborTable, positives: Iterable[str]) -> frozenset[str]:
    """Union of the positives' table neighbors, minus the positives themselves."""
    positives = frozenset(positives)
    found: set[str] = set()
    for p in positives:
        found.update(H.neighbors(p))
    return frozenset(found - positives)


def count_positive_neighbors(B: AbstractSet[str], neighbors: Iterable[str]) -> int:
    return len(set(neighbors) & B)


def reliable_opinion(
    A: Iterable[str],
    B: AbstractSet[str],
    H: NeighborTable,
    l: int,
    probability: Mapping[str, float] | None = None,
) -> list[str]:
    """Rank candidates ``A`` by how many of their neighbors lie in ``B``.

    Returns at most ``l`` words ordered by neighbor count (desc), then
    ``probability`` (desc, when given), then the word itself. Words with no
    positive neighbor are never returned.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    B = frozenset(B)
    if not B:
        return []
    probability = probability or {}
    scored = []
    for w in set(A):
        count = count_positive_neighbors(B, H.neighbors(w))
        if count > 0:
            scored.append((-count, -probability.get(w, 0.0), w))
    scored.sort()
    return [w for _, _, w in scored[:l]]


# ---------------------------------------------------------------------------
# engine


def _probabilities(clf: PuClassifier, V: EmbeddingMatrix) -> dict[str, float]:
    return dict(zip(V.words, clf.proba(V.vectors).tolist()))


def _above(probs: Mapping[str, float], words: Iterable[str], threshold: float) -> frozenset[str]:
    return frozenset(w for w in words if probs[w] > threshold)


def _fit(V: EmbeddingMatrix, positives: AbstractSet[str], vocab: frozenset[str],
         opts: PuOptions) -> PuClassifier:
    return train_pu(V, LabelSplit(frozenset(positives), vocab - positives), opts)


def run_nll(V: EmbeddingMatrix, split: LabelSplit, config: LpuConfig = LpuConfig()) -> DisentangleResult:
    """Non-lifelong baseline: a single classifier trained on the lexicon positives."""
    clf = train_pu(V, split, config.pu)
    w_plus = predict_positive(clf, V, split.unlabeled, config.threshold)
    return DisentangleResult(Variant.NLL, w_plus, clf)


def _keep_looping(t: int, new: AbstractSet[str], config: LpuConfig) -> bool:
    m = config.max_iterations
    if config.loop_rule == "or":
        return t < m or bool(new)
    # The first pass ranks against empty predictions and always selects
    # nothing, so an empty selection only ends the loop from the second pass on.
    return t < m and (bool(new) or t == 1)


def _run_restricted(V: EmbeddingMatrix, H: NeighborTable, split: LabelSplit, kb: KnowledgeBase,
                    config: LpuConfig, domain_id: str | None) -> DisentangleResult:
    P, U = split.positives, split.unlabeled
    vocab = frozenset(V.words)
    minor = config.variant is Variant.LPU_MINOR
    l = config.words_per_iteration
    scope = U if config.prediction_scope == "unlabeled_only" else vocab

    exclude = {domain_id} if domain_id is not None and config.exclude_current_domain else None
    mined = mine_reliable(kb, config.min_support, exclude)

    state = LpuState()
    state.reliable_neighbors = reliable_neighbors(H, P)
    state.domain_knowledge = vocab & mined.words
    state.new_sentiment = state.reliable_neighbors & state.domain_knowledge
    seed = state.new_sentiment

    clf = None
    history = []
    while _keep_looping(state.t, state.new_sentiment, config):
        added = state.new_sentiment - state.reliable_sentiment
        state.reliable_sentiment |= state.new_sentiment
        known = frozenset(state.reliable_sentiment) | P
        clf = _fit(V, known, vocab, config.pu)
        probs = _probabilities(clf, V)

        evidence = state.current_predictions
        new1 = reliable_opinion(state.domain_knowledge - known, evidence, H, l, probs)
        new2 = [] if minor else reliable_opinion(evidence - known, evidence, H, l, probs)
        state.new_sentiment = frozenset(new1) | frozenset(new2)
        state.current_predictions = _above(probs, scope, config.threshold)
        state.t += 1
        history.append(IterationRecord(
            t=state.t,
            n_reliable=len(state.reliable_sentiment),
            n_predicted=len(state.current_predictions),
            n_new=len(state.new_sentiment),
            added=tuple(sorted(added)),
            selected=tuple(sorted(state.new_sentiment)),
            evidence=evidence,
        ))
        log.debug("iteration %d: |RS|=%d |PP|=%d |NS|=%d", state.t, len(state.reliable_sentiment),
                  len(state.current_predictions), len(state.new_sentiment))

    if clf is None:
        log.info("no reliable seed words (reliable neighbors x mined knowledge is empty); "
                 "result equals the non-lifelong baseline")
        clf = train_pu(V, split, config.pu)
    w_plus = predict_positive(clf, V, U, config.threshold)
    return DisentangleResult(
        variant=config.variant,
        new_opinion_words=w_plus,
        classifier=clf,
        learned_positives=frozenset(state.reliable_sentiment),
        seed=seed,
        reliable_neighbors=state.reliable_neighbors,
        domain_knowledge=state.domain_knowledge,
        iteration_log=tuple(history),
    )


def _run_self_training(V: EmbeddingMatrix, split: LabelSplit, config: LpuConfig) -> DisentangleResult:
    P, U = split.positives, split.unlabeled
    vocab = frozenset(V.words)
    replace = config.variant is Variant.ABLATION_B
    positives, previous = P, P
    history = []
    for t in range(1, config.max_iterations + 1):
        clf = _fit(V, positives, vocab, config.pu)
        probs = _probabilities(clf, V)
        if replace:
            nxt = _above(probs, vocab, config.threshold)
        else:
            nxt = P | _above(probs, U, config.threshold)
        history.append(IterationRecord(
            t=t,
            n_reliable=len(positives - P),
            n_predicted=len(nxt),
            n_new=len(nxt - positives),
            added=tuple(sorted(positives - previous)),
            selected=tuple(sorted(nxt - positives)),
            evidence=frozenset(),
        ))
        if nxt == positives or len(nxt) < 2 or len(vocab - nxt) < 2:
            break
        previous, positives = positives, nxt
    w_plus = predict_positive(clf, V, U, config.threshold)
    return DisentangleResult(
        variant=config.variant,
        new_opinion_words=w_plus,
        classifier=clf,
        learned_positives=frozenset(positives - P),
        iteration_log=tuple(history),
    )


def run_lpu(
    V: EmbeddingMatrix,
    H: NeighborTable,
    split: LabelSplit,
    kb: KnowledgeBase = KnowledgeBase(),
    config: LpuConfig = LpuConfig(),
    domain_id: str | None = None,
) -> DisentangleResult:
    """Extract new opinion words for the current domain.

    Parameters
    ----------
    V : EmbeddingMatrix
        Word vectors of the current domain.
    H : NeighborTable
        Top-k neighbors of every word in ``V``.
    split : LabelSplit
        Lexicon positives and unlabeled words of the current domain.
    kb : KnowledgeBase
        Opinion words retained from past domains.
    config : LpuConfig
        Iteration limits, threshold, variant and classifier options.
    domain_id : str, optional
        Id of the current domain; its own record is left out of mining when
        ``config.exclude_current_domain`` is set.
    """
    variant = config.variant
    if variant is Variant.NLL:
        return run_nll(V, split, config)
    if variant in (Variant.ABLATION_B, Variant.ABLATION_C):
        return _run_self_training(V, split, config)
    return _run_restricted(V, H, split, kb, config, domain_id)


# ---------------------------------------------------------------------------
# knowledge accumulation and t-word separation


def domain_opinion_words(V: EmbeddingMatrix, lexicon: Lexicon, config: LpuConfig = LpuConfig()) -> frozenset[str]:
    """New opinion words of one domain predicted without lifelong knowledge."""
    return run_nll(V, label_split(V.words, lexicon), config).new_opinion_words


def accumulate(kb: KnowledgeBase, domain_id: str, V: EmbeddingMatrix, lexicon: Lexicon,
               config: LpuConfig = LpuConfig()) -> KnowledgeBase:
    """Classify one past domain and retain its predicted opinion words."""
    return retain(kb, domain_id, domain_opinion_words(V, lexicon, config))


class Disentanglement(NamedTuple):
    aspect: list[tuple[str, float]]
    opinion: list[tuple[str, float]]

    def labels(self) -> dict[str, Label]:
        out = {w: Label.ASPECT for w, _ in self.aspect}
        out.update({w: Label.OPINION for w, _ in self.opinion})
        return out


def disentangle(
    t_words: TargetQueryResult | Sequence[str],
    clf: PuClassifier,
    V: EmbeddingMatrix,
    lexicon_positives: AbstractSet[str],
    learned_positives: AbstractSet[str] = frozenset(),
    threshold: float = DEFAULT_THRESHOLD,
) -> Disentanglement:
    """Split t-words into aspect and opinion words, keeping their ranking order.

    A t-word is an opinion word if it is a lexicon word, a learned positive, or
    scores above ``threshold``; every other t-word is taken as an aspect word.
    Each output item is ``(word, probability)``.
    """
    words = t_words.words if isinstance(t_words, TargetQueryResult) else list(t_words)
    if not words:
        raise ValueError("no t-words to disentangle")
    probs = clf.proba(V.vectors[V.rows(words)])
    aspect, opinion = [], []
    for w, p in zip(words, probs.tolist()):
        if w in lexicon_positives or w in learned_positives or p > threshold:
            opinion.append((w, p))
        else:
            aspect.append((w, p))
    return Disentanglement(aspect, opinion)


def disentangle_result(t_words: TargetQueryResult | Sequence[str], result: DisentangleResult,
                       V: EmbeddingMatrix, lexicon_positives: AbstractSet[str],
                       threshold: float = DEFAULT_THRESHOLD) -> Disentanglement:
    return disentangle(t_words, result.classifier, V, lexicon_positives,
                       result.learned_positives, threshold)


def write_iteration_log(result: DisentangleResult, path: str | os.PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "n_reliable", "n_predicted", "n_new", "added_words"])
        for rec in result.iteration_log:
            writer.writerow([rec.t, rec.n_reliable, rec.n_predicted, rec.n_new, " ".join(rec.added)])
