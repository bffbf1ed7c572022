import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from lifelong_pu.embeddings import EmbeddingMatrix, UnknownWordError
from lifelong_pu.semantics import (
    UnknownTargetError,
    build_neighbor_table,
    closest_strings,
    edit_distance,
    query_target,
    similarity,
)


def matrix(vectors, words=None):
    vectors = np.asarray(vectors, dtype=float)
    words = words or [f"w{i:03d}" for i in range(len(vectors))]
    return EmbeddingMatrix(tuple(words), vectors)


@pytest.mark.parametrize("v1, v2, metric, expected", [
    ([1, 0], [1, 0], "dot", 1.0),
    ([1, 0], [0, 1], "dot", 0.0),
    ([3, 4], [3, 4], "cosine", 1.0),
    ([3, 4], [3, 4], "dot", 25.0),
    ([1, 0], [0, 0], "cosine", 0.0),
])
def test_similarity(v1, v2, metric, expected):
    E = matrix([v1, v2], ["x", "y"])
    assert similarity(E, "x", "y", metric) == pytest.approx(expected)
    assert similarity(E, "y", "x", metric) == similarity(E, "x", "y", metric)


def test_similarity_unknown_word_and_metric():
    E = matrix([[1, 0], [0, 1]], ["x", "y"])
    with pytest.raises(UnknownWordError, match="nope"):
        similarity(E, "x", "nope")
    with pytest.raises(ValueError):
        similarity(E, "x", "y", "euclid")


def test_three_word_table():
    E = matrix([[1, 0], [0.9, 0.1], [0, 1]], ["a", "b", "c"])
    H = build_neighbor_table(E, k=1)
    assert H.neighbors("a") == ["b"]
    assert H.neighbors("b") == ["a"]
    # cos(c, a) = 0, cos(c, b) = 0.1 / |b|
    assert H.neighbors("c") == ["b"]
    assert H["c"][0][1] == pytest.approx(0.1 / np.hypot(0.9, 0.1))


def test_saturated_k_lists_every_other_word():
    E = matrix(np.random.default_rng(0).standard_normal((7, 3)))
    H = build_neighbor_table(E, k=50)
    for w in E.words:
        assert len(H[w]) == 6
        assert w not in H.neighbors(w)


def test_ties_are_broken_by_word():
    E = matrix([[1, 0], [1, 0], [1, 0], [0, 1]], ["q", "c", "a", "z"])
    H = build_neighbor_table(E, k=3)
    assert H.neighbors("q") == ["a", "c", "z"]
    assert H.neighbors("z") == ["a", "c", "q"]


@pytest.mark.parametrize("metric", ["cosine", "dot"])
def test_random_table_matches_brute_force(metric):
    rng = np.random.default_rng(11)
    E = matrix(rng.standard_normal((50, 5)))
    H = build_neighbor_table(E, k=10, metric=metric)
    expected = oracles.neighbors(E.words, E.vectors, 10, metric)
    for w in E.words:
        assert H.neighbors(w) == [u for _, u in expected[w]]
        assert [s for _, s in H[w]] == pytest.approx([s for s, _ in expected[w]], abs=1e-12)


@pytest.mark.parametrize("metric", ["cosine", "dot"])
def test_tie_heavy_table_matches_brute_force(metric):
    rng = np.random.default_rng(5)
    E = matrix(oracles.dyadic_matrix(rng, 60, 16))
    H = build_neighbor_table(E, k=8, metric=metric)
    expected = oracles.neighbors(E.words, E.vectors, 8, metric)
    for w in E.words:
        assert list(H[w]) == [(u, s) for s, u in expected[w]]


def test_block_boundaries_do_not_matter(monkeypatch):
    import lifelong_pu.semantics as sem
    E = matrix(np.random.default_rng(2).standard_normal((23, 4)))
    full = build_neighbor_table(E, 5)
    monkeypatch.setattr(sem, "_BLOCK_ROWS", 4)
    assert build_neighbor_table(E, 5).entries == full.entries


def test_zero_vector_has_zero_cosine():
    E = matrix([[0, 0], [1, 0], [0, 1]], ["o", "x", "y"])
    H = build_neighbor_table(E, k=2)
    assert H["o"] == (("x", 0.0), ("y", 0.0))


def test_table_arguments():
    E = matrix([[1.0]], ["solo"])
    with pytest.raises(ValueError):
        build_neighbor_table(E, 1)
    E = matrix([[1.0], [2.0]])
    with pytest.raises(ValueError):
        build_neighbor_table(E, 0)


vectors = st.integers(4, 25).flatmap(
    lambda v: st.lists(st.lists(st.floats(-10, 10, allow_nan=False, width=32), min_size=3, max_size=3),
                       min_size=v, max_size=v))


@settings(max_examples=40, deadline=None)
@given(vectors, st.integers(1, 5), st.sampled_from(["cosine", "dot"]))
def test_table_k_is_a_prefix_of_k_plus_one(rows, k, metric):
    E = matrix(rows)
    small = build_neighbor_table(E, k, metric)
    large = build_neighbor_table(E, k + 1, metric)
    for w in E.words:
        assert large[w][: len(small[w])] == small[w]
        scores = [s for _, s in small[w]]
        assert scores == sorted(scores, reverse=True)


@settings(max_examples=40, deadline=None)
@given(vectors, st.sampled_from([0.25, 2.0, 8.0]))
def test_power_of_two_scaling_keeps_cosine_order(rows, scale):
    E = matrix(rows)
    scaled = matrix(np.asarray(rows, dtype=float) * scale)
    a, b = build_neighbor_table(E, 4), build_neighbor_table(scaled, 4)
    for w in E.words:
        assert a.neighbors(w) == b.neighbors(w)


def test_generic_scaling_keeps_cosine_order():
    rng = np.random.default_rng(9)
    E = matrix(rng.standard_normal((80, 6)))
    for scale in (0.3, 7.1, 1e3):
        scaled = matrix(E.vectors * scale)
        assert build_neighbor_table(E, 10).entries.keys() == build_neighbor_table(scaled, 10).entries.keys()
        for w in E.words:
            assert build_neighbor_table(E, 10).neighbors(w) == build_neighbor_table(scaled, 10).neighbors(w)


# ---------------------------------------------------------------------------
# target queries


def planted_cluster(seed=0):
    """A target, ten near-duplicates of it and 100 unrelated words."""
    rng = np.random.default_rng(seed)
    d = 20
    base = rng.standard_normal(d)
    base /= np.linalg.norm(base)
    planted = [base + 0.05 * rng.standard_normal(d) for _ in range(10)]
    background = []
    while len(background) < 100:
        v = rng.standard_normal(d)
        if abs(v @ base) / np.linalg.norm(v) < 0.5:
            background.append(v)
    words = ["target"] + [f"near{i}" for i in range(10)] + [f"bg{i:03d}" for i in range(100)]
    return matrix([base] + planted + background, words)


def test_planted_near_duplicates_fill_the_top_ten():
    E = planted_cluster()
    for i in range(10):
        assert similarity(E, "target", f"near{i}") > 0.95
    result = query_target(E, "target", 10)
    assert set(result.words) == {f"near{i}" for i in range(10)}


def test_query_excludes_target_and_descends():
    E = planted_cluster(1)
    result = query_target(E, "target", 40)
    assert "target" not in result.words
    assert len(result) == 40
    scores = [s for _, s in result.t_words]
    assert scores == sorted(scores, reverse=True)


def test_query_n_one_is_the_best_match():
    E = planted_cluster(2)
    best = max((w for w in E.words if w != "target"), key=lambda w: similarity(E, "target", w))
    assert query_target(E, "target", 1).words == [best]


@pytest.mark.parametrize("metric", ["cosine", "dot"])
def test_query_prefix_property(metric):
    E = planted_cluster(3)
    for n in (1, 5, 30):
        assert query_target(E, "target", n + 1, metric).t_words[:n] == query_target(E, "target", n, metric).t_words


def test_query_agrees_with_table():
    E = planted_cluster(4)
    H = build_neighbor_table(E, 10)
    # block matmuls may differ in the last ulp, so compare scores loosely
    got = query_target(E, "target", 10)
    assert got.words == H.neighbors("target")
    assert [s for _, s in got.t_words] == pytest.approx([s for _, s in H["target"]], abs=1e-12)


def test_unknown_target():
    E = planted_cluster()
    with pytest.raises(UnknownTargetError, match="unknown target"):
        query_target(E, "targte", 5)
    with pytest.raises(ValueError):
        query_target(E, "target", 0)


def test_edit_distance_and_hints():
    assert edit_distance("kitten", "sitting") == 3
    assert edit_distance("", "abc") == 3
    assert edit_distance("same", "same") == 0
    assert closest_strings("scren", ["screen", "scream", "green", "cat", "screens", "sc"], 3) == [
        "screen", "scream", "screens"]
