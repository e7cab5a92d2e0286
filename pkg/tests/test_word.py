import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sgbraid.generate import random_word
from sgbraid.graph import graphs_equal_labeled
from sgbraid.sliced import Max, Min, validate_sliced
from sgbraid.smoothing import mu
from sgbraid.word import (
    GraphBraidWord,
    VLetter,
    WordError,
    XLetter,
    b_tilde,
    closure,
    parse_word,
    serialize_word,
    validate_word,
    word_from_json,
    word_to_json,
)

LOOP_WORD = """\
braidword loop
strands0 1
labels e1
v v 1 in=(e1) out=(e1)
"""


def test_parse_and_serialize_round_trip():
    W = parse_word(LOOP_WORD)
    assert W.strands0 == 1 and W.labels == ("e1",)
    assert W.letters == (VLetter("v", 1, ("e1",), ("e1",)),)
    assert parse_word(serialize_word(W)) == W


def test_parse_rejects_garbage():
    with pytest.raises(WordError, match="line 4"):
        parse_word(LOOP_WORD.replace("v v 1", "vv 1"))
    with pytest.raises(WordError, match="strands0"):
        parse_word("braidword w\nlabels a\n")
    with pytest.raises(WordError, match="labels"):
        parse_word("braidword w\nstrands0 1\n")


def test_one_strand_empty_word():
    W = GraphBraidWord(1, ("k",), ())
    assert b_tilde(W) == 1
    S = closure(W)
    assert S.events == (Max(1, "k", "left"), Min(1, "k"))
    assert S.graph.circles == frozenset({"k"})


def test_b_tilde_arithmetic():
    # three strands, merge two into one, split it back
    W = GraphBraidWord(3, ("a", "b", "c"), (
        VLetter("u", 1, ("a", "b"), ("d",)),
        VLetter("w", 1, ("d",), ("a", "b")),
    ))
    assert validate_word(W).ok
    assert W.counts() == [3, 2, 3]
    assert b_tilde(W) == 3


def test_seam_count_mismatch():
    W = GraphBraidWord(2, ("a", "b"), (VLetter("u", 1, ("a", "b"), ("a",)),))
    rep = validate_word(W)
    assert not rep.ok
    with pytest.raises(WordError):
        closure(W)
    with pytest.raises(WordError):
        b_tilde(W)


def test_label_discontinuity():
    W = GraphBraidWord(2, ("a", "b"), (VLetter("u", 1, ("b",), ("b",)),))
    rep = validate_word(W)
    assert not rep.ok and rep.letter == 1
    assert "discontinuity" in rep.message


def test_index_out_of_range():
    rep = validate_word(GraphBraidWord(2, ("a", "b"), (XLetter(2, 1),)))
    assert not rep.ok and rep.letter == 1 and "out of range" in rep.message


def test_json_round_trip():
    W = parse_word(LOOP_WORD)
    data = word_to_json(W)
    assert data["letters"][0]["in"] == ["e1"]
    assert word_from_json(json.dumps(data)) == W


def test_closure_graph_of_loop():
    S = closure(parse_word(LOOP_WORD))
    assert validate_sliced(S).ok
    g = S.graph
    assert set(g.vertices) == {"v"}
    assert [(e.id, e.tail, e.head) for e in g.edges] == [("e1", "v", "v")]


def test_bundled_example_word(data_dir):
    W = parse_word((data_dir / "example1-g.gbw").read_text())
    assert validate_word(W).ok
    assert b_tilde(W) == 7
    assert mu(closure(W)) == 1


@given(st.integers(0, 10**6), st.booleans())
def test_random_words(seed, circulating):
    W = random_word(random.Random(seed), circulating=circulating)
    S = closure(W)
    assert validate_sliced(S).ok
    assert graphs_equal_labeled(S.graph, W.graph())
    assert parse_word(serialize_word(W)) == W
    counts = W.counts()
    assert counts[0] == counts[-1] == W.strands0
    # the count changes only at vertex letters, by outs minus ins
    for L, before, after in zip(W.letters, counts, counts[1:]):
        delta = len(L.outs) - len(L.ins) if isinstance(L, VLetter) else 0
        assert after - before == delta


def _link_word(letters, n=4):
    """A vertex-free word whose seam labels name the cycles of its permutation."""
    row = list(range(n))
    for i, _ in letters:
        row[i - 1], row[i] = row[i], row[i - 1]
    where = {s: p for p, s in enumerate(row)}
    label = [None] * n
    for start in range(n):
        p = start
        while label[p] is None:
            label[p] = f"k{start}"
            p = where[p]
    return GraphBraidWord(n, tuple(label), tuple(XLetter(i, s) for i, s in letters))


@given(st.lists(st.tuples(st.integers(1, 3), st.sampled_from((1, -1))), max_size=12))
def test_link_words_keep_strand_count(letters):
    W = _link_word(letters)
    assert validate_word(W).ok
    assert set(W.counts()) == {4}
    assert mu(closure(W)) == 4
