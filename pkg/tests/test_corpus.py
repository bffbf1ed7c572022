import random
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lifelong_pu.corpus import Document, Vocabulary, build_vocabulary, read_corpus, tokenize, write_corpus


def docs_of(*texts):
    return [Document(str(i), t) for i, t in enumerate(texts)]


@pytest.mark.parametrize("text, expected", [
    ("The screen is scratched.", ["The", "screen", "is", "scratched"]),
    ("", []),
    ("eq, conf", ["eq", "conf"]),
    ("don't  well-made!!", ["don't", "well-made"]),
    ("Treble treble", ["Treble", "treble"]),
    ("... -- !!", []),
    ("«quoted»\tand\nnext", ["quoted", "and", "next"]),
])
def test_tokenize(text, expected):
    assert tokenize(text) == expected


def test_vocabulary_threshold_boundary():
    vocab = build_vocabulary(docs_of("a a a a a b"), min_count=5)
    assert list(vocab) == ["a"]
    assert vocab.count("a") == 5
    assert "b" not in vocab


def test_vocabulary_below_threshold_is_empty():
    vocab = build_vocabulary(docs_of("a a a a b"), min_count=5)
    assert len(vocab) == 0


def test_empty_corpus_gives_empty_vocabulary():
    assert len(build_vocabulary([], min_count=1)) == 0


def test_min_count_must_be_positive():
    with pytest.raises(ValueError):
        build_vocabulary(docs_of("a"), min_count=0)


def test_vocabulary_rejects_low_counts_and_duplicates():
    with pytest.raises(ValueError):
        Vocabulary(("a",), {"a": 2}, min_count=5)
    with pytest.raises(ValueError):
        Vocabulary(("a", "a"), {"a": 9}, min_count=5)


def test_counts_match_tally_oracle():
    rng = random.Random(7)
    alphabet = [f"w{i}" for i in range(40)]
    texts = [" ".join(rng.choice(alphabet) for _ in range(rng.randint(1, 30))) for _ in range(60)]
    tally = {}
    for t in texts:
        for tok in t.split():
            tally[tok] = tally.get(tok, 0) + 1
    for min_count in (1, 3, 10, 30):
        vocab = build_vocabulary(docs_of(*texts), min_count)
        assert dict(vocab.counts) == {w: c for w, c in tally.items() if c >= min_count}


def test_index_is_a_bijection_and_ordering_is_by_count():
    vocab = build_vocabulary(docs_of("b b a a c c c"), min_count=1)
    assert vocab.words == ("c", "a", "b")
    assert [vocab.index[w] for w in vocab.words] == [0, 1, 2]


words = st.sampled_from(["alpha", "beta", "gamma", "delta", "eps", "zeta"])
corpora = st.lists(st.lists(words, max_size=15).map(" ".join), max_size=12)


@given(corpora, st.integers(1, 4))
def test_count_sum_bounded_by_token_total(texts, min_count):
    docs = docs_of(*texts)
    vocab = build_vocabulary(docs, min_count)
    total = sum(len(tokenize(t)) for t in texts)
    assert vocab.total <= total
    if min_count == 1:
        assert vocab.total == total


@given(corpora, st.randoms(use_true_random=False))
def test_permutation_invariance(texts, rnd):
    shuffled = list(texts)
    rnd.shuffle(shuffled)
    a = build_vocabulary(docs_of(*texts), 2)
    b = build_vocabulary(docs_of(*shuffled), 2)
    assert a.words == b.words and dict(a.counts) == dict(b.counts)


def test_read_corpus_file_and_directory(tmp_path):
    f = tmp_path / "reviews.txt"
    f.write_text("first doc\n\n  \nsecond doc\n", encoding="utf-8")
    docs = read_corpus(f)
    assert [d.text for d in docs] == ["first doc", "second doc"]
    assert len({d.id for d in docs}) == 2

    d = tmp_path / "dir"
    d.mkdir()
    (d / "b.txt").write_text("bee\nline", encoding="utf-8")
    (d / "a.txt").write_text("ay", encoding="utf-8")
    (d / "skip.md").write_text("no", encoding="utf-8")
    docs = read_corpus(d)
    assert [doc.id for doc in docs] == ["a.txt", "b.txt"]
    assert tokenize(docs[1].text) == ["bee", "line"]


def test_write_then_read_round_trip(tmp_path):
    docs = docs_of("one two", "three\nfour")
    write_corpus(docs, tmp_path / "c.txt")
    assert [d.text for d in read_corpus(tmp_path / "c.txt")] == ["one two", "three four"]
    counts = Counter(tok for d in read_corpus(tmp_path / "c.txt") for tok in tokenize(d.text))
    assert counts == Counter(["one", "two", "three", "four"])
