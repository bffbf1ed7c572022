import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from lifelong_pu.knowledge import (
    DuplicateDomainError,
    KnowledgeBase,
    KnowledgeRecord,
    append_record,
    load_kb,
    mine_reliable,
    retain,
    save_kb,
)


def kb_of(*word_sets):
    kb = KnowledgeBase()
    for i, words in enumerate(word_sets):
        kb = retain(kb, f"d{i}", words)
    return kb


def test_retain_adds_one_record():
    kb = retain(KnowledgeBase(), "d1", {"shrill"})
    assert len(kb) == 1
    assert kb.records[0] == KnowledgeRecord("d1", frozenset({"shrill"}))


def test_retain_rejects_a_repeated_domain():
    kb = retain(KnowledgeBase(), "d1", {"shrill"})
    with pytest.raises(DuplicateDomainError):
        retain(kb, "d1", {"other"})


def test_retain_keeps_insertion_order_and_prior_records():
    kb = KnowledgeBase()
    snapshots = []
    for i in range(20):
        snapshots.append(kb)
        kb = retain(kb, f"dom{19 - i}", {f"w{i}"})
    assert kb.domain_ids == [f"dom{19 - i}" for i in range(20)]
    for i, old in enumerate(snapshots):
        assert kb.records[: len(old)] == old.records


@pytest.mark.parametrize("bad", ["", "a\tb", "a\nb"])
def test_invalid_domain_ids(bad):
    with pytest.raises(ValueError):
        retain(KnowledgeBase(), bad, {"x"})


def test_support_at_the_boundary():
    mined = mine_reliable(kb_of(*[{"great", f"only{i}"} for i in range(5)]), 5)
    assert mined.words == {"great"}
    assert dict(mined.support) == {"great": 5}


def test_below_support_is_excluded():
    kb = kb_of(*([{"hissy"}] * 4 + [{"quiet"}]))
    assert "hissy" not in mine_reliable(kb, 5)
    assert mine_reliable(KnowledgeBase(), 1).words == frozenset()


def test_min_support_must_be_positive():
    with pytest.raises(ValueError):
        mine_reliable(KnowledgeBase(), 0)


def random_kb(rng, max_transactions=30, alphabet_size=100):
    alphabet = [f"w{i}" for i in range(alphabet_size)]
    n = rng.randint(0, max_transactions)
    return [set(rng.sample(alphabet, rng.randint(0, 40))) for _ in range(n)]


def test_mining_matches_tally_oracle():
    rng = random.Random(1)
    for _ in range(20):
        transactions = random_kb(rng, 20, 50)
        kb = kb_of(*transactions)
        for s in range(1, 7):
            mined = mine_reliable(kb, s)
            assert dict(mined.support) == oracles.tally_support(transactions, s)
            assert mined.min_support == s


def test_anti_monotone_in_min_support():
    rng = random.Random(2)
    kb = kb_of(*random_kb(rng))
    sweep = [mine_reliable(kb, s).words for s in range(1, 10)]
    for looser, stricter in zip(sweep, sweep[1:]):
        assert stricter <= looser


@given(st.lists(st.sets(st.sampled_from("abcdefg")), max_size=12), st.randoms(use_true_random=False),
       st.integers(1, 5))
def test_transaction_order_does_not_matter(transactions, rnd, s):
    shuffled = list(transactions)
    rnd.shuffle(shuffled)
    assert mine_reliable(kb_of(*transactions), s) == mine_reliable(kb_of(*shuffled), s)


def test_excluding_the_current_domain():
    kb = kb_of({"a", "b"}, {"a"}, {"a", "b"})
    assert mine_reliable(kb, 2).words == {"a", "b"}
    assert mine_reliable(kb, 2, exclude="d0").words == {"a"}
    assert mine_reliable(kb, 1, exclude={"d0", "d2"}).words == {"a"}


# ---------------------------------------------------------------------------
# files


def test_file_round_trip(tmp_path):
    kb = kb_of({"good", "hissy"}, set(), {"crisp"})
    path = tmp_path / "kb.tsv"
    save_kb(kb, path)
    assert path.read_text(encoding="utf-8").splitlines() == ["d0\tgood hissy", "d1\t", "d2\tcrisp"]
    assert load_kb(path) == kb


def test_missing_file_is_empty(tmp_path):
    assert len(load_kb(tmp_path / "none.tsv")) == 0


def test_append_is_incremental(tmp_path):
    path = tmp_path / "kb.tsv"
    append_record(path, "phones", {"crisp", "sharp"})
    kb = append_record(path, "books", {"gripping"})
    assert kb.domain_ids == ["phones", "books"]
    assert load_kb(path) == kb
    with pytest.raises(DuplicateDomainError):
        append_record(path, "phones", {"x"})
    assert len(load_kb(path)) == 2


def test_malformed_line_names_its_number(tmp_path):
    path = tmp_path / "kb.tsv"
    path.write_text("d0\ta b\nno tab here\n", encoding="utf-8")
    with pytest.raises(ValueError, match=":2:"):
        load_kb(path)


def test_duplicate_ids_in_file(tmp_path):
    path = tmp_path / "kb.tsv"
    path.write_text("d0\ta\nd0\tb\n", encoding="utf-8")
    with pytest.raises(DuplicateDomainError):
        load_kb(path)
