import pytest
from hypothesis import given, strategies as st

from gridfloer.braid import (
    BraidWord,
    closure_permutation,
    component_count,
    format_braid,
    markov_stabilize,
    parse_braid,
    reverse_orientation,
    self_linking,
    writhe,
)
from gridfloer.errors import InvalidBraid, MultiComponentClosure, ParseError


@st.composite
def braids(draw, max_strands=5, max_len=8):
    n = draw(st.integers(1, max_strands))
    if n == 1:
        return BraidWord(1, ())
    letters = draw(st.lists(
        st.integers(1, n - 1).flatmap(lambda i: st.sampled_from([i, -i])), max_size=max_len))
    return BraidWord(n, tuple(letters))


def test_parse_and_format_roundtrip():
    b = parse_braid("3: 1 -2 1 -2")
    assert b == BraidWord(3, (1, -2, 1, -2))
    assert format_braid(b) == "3: 1 -2 1 -2"
    assert parse_braid("1:") == BraidWord(1, ())


@pytest.mark.parametrize("text", ["", "2 1 1", "x: 1", "2: 1 a", "2: 0", "2: 2", "0:"])
def test_parse_rejects(text):
    with pytest.raises((ParseError, InvalidBraid)):
        parse_braid(text)


def test_letters_validated():
    with pytest.raises(InvalidBraid):
        BraidWord(2, (2,))
    with pytest.raises(InvalidBraid):
        BraidWord(0, ())


@pytest.mark.parametrize("word,w", [("1:", 0), ("2: 1 1 1", 3), ("3: 1 -2 -1 2", 0)])
def test_writhe(word, w):
    assert writhe(parse_braid(word)) == w


@pytest.mark.parametrize("word,sl", [("1:", -1), ("2: 1 1 1", 1), ("2: -1 -1 -1", -5)])
def test_self_linking(word, sl):
    assert self_linking(parse_braid(word)) == sl


def test_self_linking_needs_knot():
    with pytest.raises(MultiComponentClosure) as e:
        self_linking(parse_braid("2: 1 1"))
    assert e.value.components == 2


def test_closure_permutation_examples():
    assert closure_permutation(parse_braid("2: 1 1 1")) == (2, 1)
    assert closure_permutation(parse_braid("2: 1 1")) == (1, 2)
    assert component_count(parse_braid("2: 1 1")) == 2
    assert component_count(parse_braid("3: 1 2")) == 1


def test_markov_examples():
    assert markov_stabilize(BraidWord(1, ()), 1) == BraidWord(2, (1,))
    assert markov_stabilize(parse_braid("2: 1 1 1"), -1) == parse_braid("3: 1 1 1 -2")
    assert self_linking(markov_stabilize(parse_braid("2: 1 1 1"), -1)) == -1
    with pytest.raises(InvalidBraid):
        markov_stabilize(BraidWord(1, ()), 0)


@given(braids(), st.sampled_from([1, -1]))
def test_markov_properties(b, s):
    m = markov_stabilize(b, s)
    assert m.strands == b.strands + 1
    assert writhe(m) == writhe(b) + s
    assert component_count(m) == component_count(b)
    if component_count(b) == 1:
        assert self_linking(m) == self_linking(b) + (0 if s == 1 else -2)


@given(braids())
def test_reverse_orientation_keeps_counts(b):
    r = reverse_orientation(b)
    assert writhe(r) == writhe(b)
    assert component_count(r) == component_count(b)
