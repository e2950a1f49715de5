"""Tokenization: punctuation stripping, asides, hyphens, idempotence."""

from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from corpusdiff.tokenizer import TokenizerConfig, tokenize


def test_hand_counted_passage():
    text = (
        'So, last year — I mean 2019 — my mother said: "Think about it." '
        "(Laughter) And I did; I really did. We talked for ten hours!"
    )
    assert tokenize(text) == [
        "so", "last", "year", "i", "mean", "2019", "my", "mother", "said",
        "think", "about", "it", "and", "i", "did", "i", "really", "did",
        "we", "talked", "for", "ten", "hours",
    ]


def test_lowercases_and_strips_edge_punctuation():
    assert tokenize("Hello, WORLD!!!") == ["hello", "world"]
    assert tokenize("“Curly quotes” and …ellipses…") == [
        "curly", "quotes", "and", "ellipses",
    ]


def test_interior_punctuation_survives():
    assert tokenize("don't stop") == ["don't", "stop"]
    assert tokenize("3.14 is pi") == ["3.14", "is", "pi"]


def test_stage_directions_removed_by_default():
    assert tokenize("we won (Applause) at last (Laughter)") == ["we", "won", "at", "last"]


def test_nested_stage_directions_removed_completely():
    assert tokenize("so (and then (Laughter) applause) we left") == ["so", "we", "left"]


def test_stage_directions_kept_when_disabled():
    config = TokenizerConfig(strip_stage_directions=False)
    assert tokenize("we won (Applause) today", config) == [
        "we", "won", "applause", "today",
    ]


def test_hyphenated_words():
    assert tokenize("a well-known state-of-the-art idea") == [
        "a", "well-known", "state-of-the-art", "idea",
    ]
    config = TokenizerConfig(keep_hyphenated=False)
    assert tokenize("a well-known idea", config) == ["a", "well", "known", "idea"]


def test_empty_and_whitespace_inputs():
    assert tokenize("") == []
    assert tokenize("   \n\t ") == []
    assert tokenize("(Applause)") == []


def test_pure_punctuation_tokens_vanish():
    assert tokenize("yes -- and ... no !?") == ["yes", "and", "no"]


_TEXT_ALPHABET = st.text(
    alphabet='abc XY.,!?()-\'"“”—\n\t',
    max_size=120,
)


@given(text=_TEXT_ALPHABET)
@settings(max_examples=300, deadline=None)
def test_tokenize_is_idempotent(text):
    once = tokenize(text)
    again = tokenize(" ".join(once))
    assert again == once


@given(text=_TEXT_ALPHABET)
@settings(max_examples=300, deadline=None)
def test_tokens_are_lowercase_and_nonempty(text):
    for token in tokenize(text):
        assert token
        assert token == token.lower()
        assert " " not in token


@given(text=_TEXT_ALPHABET)
@settings(max_examples=300, deadline=None)
def test_config_without_stripping_is_also_idempotent(text):
    config = TokenizerConfig(strip_stage_directions=False, keep_hyphenated=False)
    once = tokenize(text, config)
    assert tokenize(" ".join(once), config) == once
