"""Sentiment knowledge base: opinion words retained per past domain.

Each record is one domain's predicted opinion words. Mining treats every
record as a transaction and returns the words predicted in at least
``min_support`` domains; only single-word itemsets are mined because the
engine consumes individual words.

File format, one record per line::

    <domain_id>\t<word1> <word2> ...
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import AbstractSet, Iterable, Iterator, Mapping

DEFAULT_MIN_SUPPORT = 5


class DuplicateDomainError(ValueError):
    pass


@dataclass(frozen=True)
class KnowledgeRecord:
    domain_id: str
    opinion_words: frozenset[str]


@dataclass(frozen=True)
class KnowledgeBase:
    records: tuple[KnowledgeRecord, ...] = ()

    def __post_init__(self):
        ids = [r.domain_id for r in self.records]
        if len(set(ids)) != len(ids):
            raise DuplicateDomainError("domain ids must be unique in a knowledge base")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[KnowledgeRecord]:
        return iter(self.records)

    def __contains__(self, domain_id: object) -> bool:
        return any(r.domain_id == domain_id for r in self.records)

    @property
    def domain_ids(self) -> list[str]:
        return [r.domain_id for r in self.records]


def _check_domain_id(domain_id: str) -> None:
    if not domain_id or any(ch in domain_id for ch in "\t\n\r"):
        raise ValueError(f"invalid domain id {domain_id!r}")


def retain(kb: KnowledgeBase, domain_id: str, words: Iterable[str]) -> KnowledgeBase:
    """Return a new knowledge base with one more record appended."""
    _check_domain_id(domain_id)
    if domain_id in kb:
        raise DuplicateDomainError(f"domain {domain_id!r} is already in the knowledge base")
    return KnowledgeBase(kb.records + (KnowledgeRecord(domain_id, frozenset(words)),))


@dataclass(frozen=True)
class ReliableKnowledge:
    words: frozenset[str]
    support: Mapping[str, int]
    min_support: int

    def __contains__(self, word: object) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)


def mine_reliable(kb: KnowledgeBase, min_support: int = DEFAULT_MIN_SUPPORT,
                  exclude: AbstractSet[str] | str | None = None) -> ReliableKnowledge:
    """Frequent single-word itemsets over the knowledge base.

    ``exclude`` drops the given domain id(s) from the transactions, e.g. the
    current domain when mining on its behalf.
    """
    if min_support < 1:
        raise ValueError("min_support must be >= 1")
    if isinstance(exclude, str):
        exclude = {exclude}
    exclude = exclude or set()
    tally: Counter[str] = Counter()
    for record in kb:
        if record.domain_id not in exclude:
            tally.update(record.opinion_words)
    support = {w: c for w, c in tally.items() if c >= min_support}
    return ReliableKnowledge(words=frozenset(support), support=support, min_support=min_support)


# ---------------------------------------------------------------------------
# persistence


def _format_record(record: KnowledgeRecord) -> str:
    return record.domain_id + "\t" + " ".join(sorted(record.opinion_words)) + "\n"


def load_kb(path: str | os.PathLike) -> KnowledgeBase:
    """Load a knowledge base file; a missing file is an empty knowledge base."""
    path = Path(path)
    kb = KnowledgeBase()
    if not path.exists():
        return kb
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            domain_id, sep, words = line.partition("\t")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected '<domain_id><TAB><words>'")
            kb = retain(kb, domain_id, words.split())
    return kb


def save_kb(kb: KnowledgeBase, path: str | os.PathLike) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.writelines(_format_record(r) for r in kb)


def append_record(path: str | os.PathLike, domain_id: str, words: Iterable[str]) -> KnowledgeBase:
    """Append one domain's record to the file and return the updated knowledge base."""
    kb = retain(load_kb(path), domain_id, words)
    with Path(path).open("a", encoding="utf-8") as fh:
        fh.write(_format_record(kb.records[-1]))
    return kb
