"""Corpus ingestion: tokenization and frequency-filtered vocabularies."""

from __future__ import annotations

import os
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

DEFAULT_MIN_COUNT = 5


@dataclass(frozen=True)
class Document:
    id: str
    text: str


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _strip_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and _is_punct(token[start]):
        start += 1
    while end > start and _is_punct(token[end - 1]):
        end -= 1
    return token[start:end]


def tokenize(text: str) -> list[str]:
    """Split ``text`` on whitespace and strip punctuation at token edges.

    Case is preserved and nothing is stemmed, so ``"Treble"`` and ``"treble"``
    stay distinct. Internal hyphens and apostrophes survive (``"don't"``).
    """
    tokens = []
    for raw in text.split():
        tok = _strip_punct(raw)
        if tok:
            tokens.append(tok)
    return tokens


def iter_tokens(docs: Iterable[Document]) -> Iterator[list[str]]:
    for doc in docs:
        yield tokenize(doc.text)


@dataclass(frozen=True)
class Vocabulary:
    """Ordered set of words with their corpus counts.

    Words are ordered by descending count, ties broken alphabetically, so the
    index assignment does not depend on document order.
    """

    words: tuple[str, ...]
    counts: Mapping[str, int]
    min_count: int = DEFAULT_MIN_COUNT
    index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {w: i for i, w in enumerate(self.words)}
        if len(index) != len(self.words):
            raise ValueError("vocabulary words must be distinct")
        for w in self.words:
            if self.counts[w] < self.min_count:
                raise ValueError(f"word {w!r} has count {self.counts[w]} < min_count {self.min_count}")
        object.__setattr__(self, "index", index)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: object) -> bool:
        return word in self.index

    def __iter__(self) -> Iterator[str]:
        return iter(self.words)

    def count(self, word: str) -> int:
        return self.counts.get(word, 0)

    @property
    def total(self) -> int:
        return sum(self.counts[w] for w in self.words)


def build_vocabulary(docs: Iterable[Document], min_count: int = DEFAULT_MIN_COUNT) -> Vocabulary:
    """Count tokens over ``docs`` and keep those seen at least ``min_count`` times."""
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    tally: Counter[str] = Counter()
    for tokens in iter_tokens(docs):
        tally.update(tokens)
    kept = sorted((w for w, c in tally.items() if c >= min_count), key=lambda w: (-tally[w], w))
    return Vocabulary(words=tuple(kept), counts={w: tally[w] for w in kept}, min_count=min_count)


def read_corpus(path: str | os.PathLike) -> list[Document]:
    """Load documents from a text file (one per line) or a directory of ``.txt`` files.

    Blank lines are skipped. Directory entries are read in sorted filename
    order and each file becomes a single document.
    """
    path = Path(path)
    if path.is_dir():
        return [
            Document(id=p.name, text=p.read_text(encoding="utf-8"))
            for p in sorted(path.glob("*.txt"))
        ]
    docs = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if line.strip():
                docs.append(Document(id=f"{path.name}:{lineno}", text=line.rstrip("\n")))
    return docs


def write_corpus(docs: Sequence[Document], path: str | os.PathLike) -> None:
    """Write one document per line; newlines inside a document become spaces."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(" ".join(doc.text.split()) + "\n")
