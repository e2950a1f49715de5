"""Category lexicon parsing and token matching."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from corpusdiff.errors import LexiconFormatError
from corpusdiff.lexicon import Lexicon, LexiconEntry, categorize_counts, load_lexicon

BUNDLED = Path(__file__).resolve().parents[1] / "src" / "corpusdiff" / "data" / "demo_lexicon.dic"


def _write(path, content):
    path.write_text(content, encoding="utf-8")
    return path


SMALL = """%
1\tsweet
2\tsour
%
sugar\t1
sugar*\t1\t2
lemon\t2
sweet*\t1
sweetly\t2
"""


def test_parse_small_lexicon(tmp_path):
    lex = load_lexicon(_write(tmp_path / "small.dic", SMALL))
    assert lex.categories == {1: "sweet", 2: "sour"}
    assert len(lex.entries) == 5


def test_literal_beats_stem(tmp_path):
    lex = load_lexicon(_write(tmp_path / "small.dic", SMALL))
    # "sugar" has both a literal entry (category 1) and a stem entry
    # (categories 1 and 2); the literal wins on an exact hit.
    assert lex.match("sugar") == (1,)
    assert lex.match("sugary") == (1, 2)


def test_longest_stem_wins(tmp_path):
    lex = load_lexicon(_write(tmp_path / "small.dic", SMALL))
    # "sweetness" is prefixed by "sweet*" only; "sweetly" hits its literal
    # even though the shorter stem also matches.
    assert lex.match("sweetness") == (1,)
    assert lex.match("sweetly") == (2,)


def test_match_misses(tmp_path):
    lex = load_lexicon(_write(tmp_path / "small.dic", SMALL))
    assert lex.match("salt") == ()
    assert lex.match("suga") == ()  # prefixes shorter than the stem do not hit


def test_parse_errors_name_file_and_line(tmp_path):
    missing_header = _write(tmp_path / "a.dic", "1\tcat\n%\nword\t1\n")
    with pytest.raises(LexiconFormatError, match=r"a\.dic:line 1"):
        load_lexicon(missing_header)

    undeclared = _write(tmp_path / "b.dic", "%\n1\tcat\n%\nword\t9\n")
    with pytest.raises(LexiconFormatError, match=r"b\.dic:line 4"):
        load_lexicon(undeclared)

    bad_star = _write(tmp_path / "c.dic", "%\n1\tcat\n%\nwo*rd\t1\n")
    with pytest.raises(LexiconFormatError, match=r"c\.dic:line 4"):
        load_lexicon(bad_star)

    empty_pattern = _write(tmp_path / "d.dic", "%\n1\tcat\n%\n\t1\n")
    with pytest.raises(LexiconFormatError, match=r"d\.dic:line 4"):
        load_lexicon(empty_pattern)

    bad_header_row = _write(tmp_path / "e.dic", "%\nnot_an_id\tcat\n%\nword\t1\n")
    with pytest.raises(LexiconFormatError, match=r"e\.dic:line 2"):
        load_lexicon(bad_header_row)

    no_categories_listed = _write(tmp_path / "f.dic", "%\n1\tcat\n%\nword\n")
    with pytest.raises(LexiconFormatError, match=r"f\.dic:line 4"):
        load_lexicon(no_categories_listed)


def test_duplicate_pattern_merges_categories():
    lex = Lexicon(
        categories={1: "a", 2: "b"},
        entries=[
            LexiconEntry(pattern="word", category_ids=(1,)),
            LexiconEntry(pattern="word", category_ids=(2,)),
        ],
    )
    assert lex.match("word") == (1, 2)


def test_categorize_counts_includes_empty_categories(tmp_path):
    lex = load_lexicon(_write(tmp_path / "small.dic", SMALL))
    counts = categorize_counts(["sugar", "lemon", "sugary", "plain"], lex)
    assert counts == {1: 2, 2: 2}
    counts_none = categorize_counts(["plain", "water"], lex)
    assert counts_none == {1: 0, 2: 0}


def test_example_patterns_are_stable(tmp_path):
    lex = load_lexicon(_write(tmp_path / "small.dic", SMALL))
    examples = lex.example_patterns(limit=2)
    assert examples[1] == ["sugar", "sugar*"]
    assert examples[2] == ["sugar*", "lemon"]


def test_scan_matches_brute_force_oracle(tmp_path):
    content = "%\n" + "\n".join(f"{i}\tc{i}" for i in range(1, 6)) + "\n%\n"
    entries = [
        ("run", (1,)),
        ("run*", (2,)),
        ("runn*", (3,)),
        ("walk*", (4,)),
        ("walking", (5,)),
        ("talk", (1, 4)),
        ("ta*", (2,)),
        ("s*", (5,)),
        ("stop", (3,)),
        ("sto*", (4,)),
    ]
    content += "\n".join(p + "\t" + "\t".join(map(str, ids)) for p, ids in entries) + "\n"
    lex = load_lexicon(_write(tmp_path / "brute.dic", content))

    def oracle(token: str) -> tuple[int, ...]:
        literal = [ids for p, ids in entries if p == token]
        if literal:
            merged: set[int] = set()
            for ids in literal:
                merged.update(ids)
            return tuple(sorted(merged))
        stems = [
            (len(p) - 1, ids)
            for p, ids in entries
            if p.endswith("*") and token.startswith(p[:-1])
        ]
        if not stems:
            return ()
        best = max(length for length, _ in stems)
        merged = set()
        for length, ids in stems:
            if length == best:
                merged.update(ids)
        return tuple(sorted(merged))

    vocab = [
        "run", "runs", "running", "runner", "walk", "walking", "walked",
        "talk", "talks", "tar", "stop", "stopped", "stone", "sun", "s",
        "ta", "jump", "runnable", "w", "st",
    ]
    rng = np.random.default_rng(99)
    tokens = [vocab[int(i)] for i in rng.integers(0, len(vocab), size=200)]
    for token in set(tokens):
        assert lex.match(token) == oracle(token), token
    counts = categorize_counts(tokens, lex)
    expected = {cid: 0 for cid in lex.categories}
    for token in tokens:
        for cid in oracle(token):
            expected[cid] += 1
    assert counts == expected


def test_bundled_lexicon_loads():
    lex = load_lexicon(BUNDLED)
    assert len(lex.categories) == 12
    assert lex.categories[1] == "pronoun"
    # A literal entry shadows the stem spelled the same way.
    assert lex.match("happy") == (20,)
    assert lex.match("happiness") == (20,)
    # The longest matching stem decides between overlapping stems.
    assert lex.match("friendless") == (10,)
    assert lex.match("friends") == (10, 12)
    # Multi-category entries keep every category, sorted.
    assert lex.match("love") == (10, 20)
    assert lex.match("second") == (40, 41)
