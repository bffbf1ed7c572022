"""Synthetic multi-domain review corpora with planted aspect and opinion words.

Every domain is a bag of short pseudo-sentences built from word pools:

* lexicon seeds: opinion words that the general lexicon lists;
* planted opinion words: opinion words missing from the lexicon, used in
  exactly the same slots as the seeds in every domain where they occur;
* planted aspect words: per-target mentions that take the target's place as a
  sentence head, so they rank high among the target's t-words;
* confusable aspect words (optional): a tight group of aspect words that share
  sentences with the seeds and occasionally fill an opinion slot, sitting near
  the classifier's decision boundary;
* frame words: modifiers that accompany opinion words and determiners that
  accompany heads, giving each class a distinctive context;
* background words: filler.

Gold labels follow the planting: seeds, planted opinion words and lexicon
words absent from the corpora are OPINION, everything else is ASPECT.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from .corpus import Document, write_corpus
from .lpu import Label
from .pu import Lexicon, save_lexicon


@dataclass(frozen=True)
class SyntheticSpec:
    """Generator parameters; mixture weights are relative sentence frequencies."""

    n_domains: int = 6
    n_targets: int = 1
    n_seeds: int = 80
    n_absent_lexicon: int = 20
    n_planted_opinion: int = 20
    opinion_support: int = 6
    n_planted_aspect: int = 30
    n_confusable: int = 0
    n_background: int = 300
    # frame words: modifiers precede opinion words, determiners precede heads
    n_modifiers: int = 5
    n_determiners: int = 5
    docs_per_domain: int = 3000
    doc_length: int = 6
    min_support: int = 5
    # share of target sentences headed by the target itself
    target_rate: float = 0.5
    # chance that an opinion slot is filled by a confusable aspect word instead
    confusable_rate: float = 0.03
    mix_target: float = 0.45
    mix_opinion: float = 0.25
    mix_confusable: float = 0.10
    mix_background: float = 0.20

    def validate(self) -> None:
        counts = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)
                  if f.name.startswith("n_") or f.name in ("docs_per_domain", "doc_length")}
        for name, value in counts.items():
            if value < 0:
                raise ValueError(f"{name} must be non-negative")
        for name in ("n_domains", "n_targets", "n_seeds", "n_background", "docs_per_domain"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.doc_length < 6:
            raise ValueError("doc_length must be at least 6")
        for name in ("target_rate", "confusable_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        mix = (self.mix_target, self.mix_opinion, self.mix_confusable, self.mix_background)
        if min(mix) < 0 or sum(mix) <= 0:
            raise ValueError("mixture weights must be non-negative with a positive sum")
        if self.n_planted_opinion > 0:
            if not 1 <= self.opinion_support <= self.n_domains:
                raise ValueError(
                    f"opinion_support={self.opinion_support} must lie in [1, n_domains={self.n_domains}]")
            if self.min_support > self.opinion_support:
                raise ValueError(
                    f"min_support={self.min_support} exceeds opinion_support={self.opinion_support}: "
                    "planted opinion words could never be mined as frequent")


_INT_FIELDS = {f.name for f in dataclasses.fields(SyntheticSpec) if f.type in ("int", int)}


def parse_spec_text(text: str) -> SyntheticSpec:
    """Parse ``key = value`` lines (``#`` comments allowed) into a spec."""
    known = {f.name for f in dataclasses.fields(SyntheticSpec)}
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in known:
            raise ValueError(f"line {lineno}: expected '<field> = <value>' with a known field, got {raw!r}")
        value = value.strip().strip('"')
        values[key] = int(value) if key in _INT_FIELDS else float(value)
    spec = SyntheticSpec(**values)
    spec.validate()
    return spec


def load_spec(path: str | os.PathLike) -> SyntheticSpec:
    return parse_spec_text(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True, eq=False)
class SyntheticBenchmark:
    spec: SyntheticSpec
    seed: int
    domain_ids: tuple[str, ...]
    corpora: Mapping[str, list[Document]]
    lexicon: Lexicon
    targets: tuple[str, ...]
    lexicon_seeds: frozenset[str]
    planted_opinion: frozenset[str]
    planted_aspect: frozenset[str]
    aspects_by_target: Mapping[str, frozenset[str]]
    confusable: frozenset[str]
    background: frozenset[str]
    frame_words: frozenset[str]
    word_labels: Mapping[str, Label]

    @property
    def n_domains(self) -> int:
        return len(self.domain_ids)

    def label(self, word: str) -> Label:
        return self.word_labels.get(word, Label.ASPECT)


def _pool(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i:02d}" for i in range(n)]


def generate_synthetic(spec: SyntheticSpec = SyntheticSpec(), seed: int = 0) -> SyntheticBenchmark:
    """Build a deterministic multi-domain benchmark from ``spec`` and ``seed``."""
    spec.validate()
    rng = np.random.default_rng(seed)

    targets = [f"target{i}" for i in range(spec.n_targets)]
    seeds = _pool("good", spec.n_seeds)
    absent = _pool("rare", spec.n_absent_lexicon)
    opinion = _pool("opin", spec.n_planted_opinion)
    aspects = {t: _pool(f"asp{i}_", spec.n_planted_aspect) for i, t in enumerate(targets)}
    confusable = _pool("conf", spec.n_confusable)
    background = _pool("bg", spec.n_background)
    modifiers = _pool("very", spec.n_modifiers)
    determiners = _pool("the", spec.n_determiners)

    # which domains each planted opinion word appears in
    domain_ids = tuple(f"domain{j:02d}" for j in range(spec.n_domains))
    present = {w: set(rng.choice(spec.n_domains, size=spec.opinion_support, replace=False).tolist())
               for w in opinion}

    kinds = np.array(["target", "opinion", "confusable", "background"])
    weights = np.array([spec.mix_target, spec.mix_opinion,
                        spec.mix_confusable if confusable else 0.0, spec.mix_background])
    weights = weights / weights.sum()
    L = spec.doc_length

    def pick(pool, k):
        return list(rng.choice(pool, size=k)) if pool and k > 0 else []

    def opinion_slots(pool, k):
        words = pick(pool, k)
        if confusable and spec.confusable_rate > 0:
            words = [pick(confusable, 1)[0] if rng.random() < spec.confusable_rate else w for w in words]
        return words

    corpora = {}
    for j, dom in enumerate(domain_ids):
        # planted opinion words are used exactly like lexicon seeds
        opinion_pool = seeds + [w for w in opinion if j in present[w]]
        docs = []
        for i, kind in enumerate(rng.choice(kinds, size=spec.docs_per_domain, p=weights)):
            target = targets[rng.integers(len(targets))]
            if kind == "target":
                # the target and its aspects are interchangeable heads
                head = target if rng.random() < spec.target_rate else pick(aspects[target], 1)[0]
                toks = pick(determiners, 1) + [head] + pick(modifiers, 1) + opinion_slots(opinion_pool, 2)
            elif kind == "opinion":
                toks = pick(modifiers, 2) + opinion_slots(opinion_pool, 3)
            elif kind == "confusable":
                toks = pick(determiners, 1) + pick(confusable, 2) + pick(modifiers, 1) + pick(opinion_pool, 2)
            else:
                toks = []
            toks += pick(background, L - len(toks))
            rng.shuffle(toks)
            docs.append(Document(id=f"{dom}:{i}", text=" ".join(toks)))
        corpora[dom] = docs

    labels = {w: Label.OPINION for w in seeds + opinion + absent}
    for w in [a for pool in aspects.values() for a in pool] + confusable + background + modifiers + determiners:
        labels[w] = Label.ASPECT

    return SyntheticBenchmark(
        spec=spec,
        seed=seed,
        domain_ids=domain_ids,
        corpora=corpora,
        lexicon=Lexicon(frozenset(seeds + absent)),
        targets=tuple(targets),
        lexicon_seeds=frozenset(seeds),
        planted_opinion=frozenset(opinion),
        planted_aspect=frozenset(a for pool in aspects.values() for a in pool) | frozenset(confusable),
        aspects_by_target={t: frozenset(p) for t, p in aspects.items()},
        confusable=frozenset(confusable),
        background=frozenset(background),
        frame_words=frozenset(modifiers + determiners),
        word_labels=labels,
    )


def write_benchmark(bench: SyntheticBenchmark, out_dir: str | os.PathLike) -> Path:
    """Write corpora, lexicon and word-level gold labels under ``out_dir``.

    Layout: ``corpora/<domain_id>.txt`` (one document per line),
    ``lexicon.txt``, ``word_labels.tsv`` (``word<TAB>LABEL``), ``targets.txt``
    and ``spec.txt`` (the generator parameters plus the seed).
    """
    out = Path(out_dir)
    (out / "corpora").mkdir(parents=True, exist_ok=True)
    for dom in bench.domain_ids:
        write_corpus(bench.corpora[dom], out / "corpora" / f"{dom}.txt")
    save_lexicon(bench.lexicon, out / "lexicon.txt")
    with (out / "word_labels.tsv").open("w", encoding="utf-8") as fh:
        for w in sorted(bench.word_labels):
            fh.write(f"{w}\t{bench.word_labels[w].value}\n")
    (out / "targets.txt").write_text("".join(t + "\n" for t in bench.targets), encoding="utf-8")
    lines = [f"{f.name} = {getattr(bench.spec, f.name)}" for f in dataclasses.fields(bench.spec)]
    (out / "spec.txt").write_text("\n".join(lines) + f"\n# seed = {bench.seed}\n", encoding="utf-8")
    return out
