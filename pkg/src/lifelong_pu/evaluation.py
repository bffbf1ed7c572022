"""acc@n evaluation and variant comparison.

Gold files are TSV, ``target<TAB>word<TAB>{ASPECT|OPINION}``, with each
target's rows in t-word rank order. Prediction files use the same layout.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import Document, Vocabulary, build_vocabulary
from .embeddings import EmbeddingMatrix, SkipGramConfig, train_skipgram
from .knowledge import KnowledgeBase
from .lpu import (
    DisentangleResult,
    Label,
    LpuConfig,
    Variant,
    accumulate,
    disentangle_result,
    run_lpu,
)
from .pu import LabelSplit, PuOptions, label_split
from .semantics import NeighborTable, build_neighbor_table, query_target
from .synthetic import SyntheticBenchmark

N_SWEEP = (50, 100, 150)

# Settings for the synthetic benchmark. Its corpora are small, so skip-gram
# needs more epochs and a larger step than the library defaults to separate
# the word groups, and the classifier up-weights the lexicon positives so
# that naive PU does not push every unlabeled opinion word below 0.5.
BENCHMARK_SKIPGRAM = SkipGramConfig(dim=50, epochs=10, learning_rate=0.1, batch_size=256)
BENCHMARK_CONFIG = LpuConfig(pu=PuOptions(positive_weight=3.0))


class InsufficientLabelsError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledTarget:
    """Gold labels over a prefix of a target's t-word ranking."""

    target: str
    labels: tuple[tuple[str, Label], ...]

    def __post_init__(self):
        labels = tuple((w, Label(lab)) for w, lab in self.labels)
        words = [w for w, _ in labels]
        if len(set(words)) != len(words):
            raise ValueError(f"word labeled twice for target {self.target!r}")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def words(self) -> list[str]:
        return [w for w, _ in self.labels]


def _label(value: Label | str) -> Label:
    return value if isinstance(value, Label) else Label(str(value).upper())


def acc_at_n(predictions: Mapping[str, Label | str], gold: LabeledTarget, n: int) -> float:
    """Fraction of the top-``n`` gold t-words whose predicted label matches.

    A t-word missing from ``predictions`` counts as wrong.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(gold) < n:
        raise InsufficientLabelsError(
            f"insufficient labels: target {gold.target!r} has {len(gold)} labeled t-words, need {n}")
    hits = 0
    for word, truth in gold.labels[:n]:
        pred = predictions.get(word)
        if pred is not None and _label(pred) is truth:
            hits += 1
    return hits / n


def gold_for_ranking(target: str, ranking: Sequence[str], labels: Mapping[str, Label]) -> LabeledTarget:
    return LabeledTarget(target, tuple((w, labels[w]) for w in ranking))


# ---------------------------------------------------------------------------
# TSV io


def _read_triples(path: str | os.PathLike) -> list[tuple[str, str, Label]]:
    rows = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'target<TAB>word<TAB>LABEL'")
            try:
                rows.append((parts[0], parts[1], _label(parts[2])))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: unknown label {parts[2]!r}") from None
    return rows


def read_gold(path: str | os.PathLike) -> dict[str, LabeledTarget]:
    grouped: dict[str, list[tuple[str, Label]]] = {}
    for target, word, lab in _read_triples(path):
        grouped.setdefault(target, []).append((word, lab))
    return {t: LabeledTarget(t, tuple(rows)) for t, rows in grouped.items()}


def read_predictions(path: str | os.PathLike) -> dict[str, dict[str, Label]]:
    out: dict[str, dict[str, Label]] = {}
    for target, word, lab in _read_triples(path):
        out.setdefault(target, {})[word] = lab
    return out


def write_labels(rows: Mapping[str, Iterable[tuple[str, Label]]], path: str | os.PathLike) -> None:
    """Write ``{target: [(word, label), ...]}`` as a gold/prediction TSV."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for target, items in rows.items():
            for word, lab in items:
                fh.write(f"{target}\t{word}\t{_label(lab).value}\n")


# ---------------------------------------------------------------------------
# variant comparison


@dataclass(frozen=True, eq=False)
class PreparedDomain:
    domain_id: str
    vocab: Vocabulary
    embedding: EmbeddingMatrix
    neighbors: NeighborTable
    split: LabelSplit


@dataclass(frozen=True, eq=False)
class PreparedBenchmark:
    """A benchmark with embeddings trained, neighbor tables built and past knowledge retained."""

    benchmark: SyntheticBenchmark
    domains: Mapping[str, PreparedDomain]
    kb: KnowledgeBase
    config: LpuConfig


def prepare_benchmark(
    bench: SyntheticBenchmark,
    skipgram: SkipGramConfig = BENCHMARK_SKIPGRAM,
    config: LpuConfig = BENCHMARK_CONFIG,
    min_count: int = 5,
) -> PreparedBenchmark:
    """Train each domain's vectors and accumulate a knowledge base over all domains.

    The domain under evaluation never sees its own record, because mining
    excludes the current domain id.
    """
    domains = {}
    kb = KnowledgeBase()
    for j, dom in enumerate(bench.domain_ids):
        docs: list[Document] = bench.corpora[dom]
        vocab = build_vocabulary(docs, min_count)
        cfg = dataclasses.replace(skipgram, seed=skipgram.seed + 1000 * bench.seed + j)
        E = train_skipgram(docs, vocab, cfg)
        H = build_neighbor_table(E, config.neighbor_k)
        domains[dom] = PreparedDomain(dom, vocab, E, H, label_split(vocab.words, bench.lexicon))
        kb = accumulate(kb, dom, E, bench.lexicon, config)
    return PreparedBenchmark(bench, domains, kb, config)


@dataclass(frozen=True)
class ReportRow:
    variant: str
    target: str
    domain: str
    accuracy: Mapping[int, float]


@dataclass(frozen=True, eq=False)
class ComparisonReport:
    ns: tuple[int, ...]
    rows: tuple[ReportRow, ...]
    results: Mapping[tuple[str, str], DisentangleResult] = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["variant", "target"] + [f"acc@{n}" for n in self.ns])
        for row in self.rows:
            writer.writerow([row.variant, row.target] + [f"{row.accuracy[n]:.4f}" for n in self.ns])
        return buf.getvalue()

    def mean(self, variant: str | Variant, n: int) -> float:
        vals = [r.accuracy[n] for r in self.rows if r.variant == Variant(variant).value]
        return sum(vals) / len(vals)


def compare_variants(
    benchmark: SyntheticBenchmark | PreparedBenchmark,
    variants: Sequence[Variant | str],
    ns: Sequence[int] = N_SWEEP,
    eval_domain: str | None = None,
    metric: str = "cosine",
) -> ComparisonReport:
    """acc@n of each variant on each target of one evaluation domain.

    ``eval_domain`` defaults to the last domain; all other domains act as the
    past domains. A plain :class:`SyntheticBenchmark` is prepared with default
    benchmark settings first.
    """
    prepared = benchmark if isinstance(benchmark, PreparedBenchmark) else prepare_benchmark(benchmark)
    bench = prepared.benchmark
    dom = eval_domain or bench.domain_ids[-1]
    pd = prepared.domains[dom]
    depth = max(ns)
    rows, results = [], {}
    for variant in variants:
        variant = Variant(variant)
        config = dataclasses.replace(prepared.config, variant=variant)
        result = run_lpu(pd.embedding, pd.neighbors, pd.split, prepared.kb, config, domain_id=dom)
        results[(variant.value, dom)] = result
        for target in bench.targets:
            t_words = query_target(pd.embedding, target, depth, metric)
            gold = gold_for_ranking(target, t_words.words, bench.word_labels)
            preds = disentangle_result(t_words, result, pd.embedding, pd.split.positives,
                                       config.threshold).labels()
            rows.append(ReportRow(variant.value, target, dom, {n: acc_at_n(preds, gold, n) for n in ns}))
    return ComparisonReport(tuple(ns), tuple(rows), results)
