"""Shared fixture builders for the test suite.

Provides three families of synthetic data:

* marker corpora for the classifier probe (separable or label-shuffled),
* two-group count matrices for the screening/MANOVA workflow, and
* an on-disk demo dataset (transcripts, speaker metadata, part-of-speech
  annotations) exercising the full CLI pipeline end to end.

All builders are deterministic given their seeds so tests can freeze
expectations against them.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
import pytest

from corpusdiff.corpus import (
    AnnotatedCorpus,
    AnnotatedDoc,
    Gender,
    SpeakerRecord,
    Transcript,
)
from corpusdiff.features import CountMatrix

# ---------------------------------------------------------------------------
# Marker corpora for the classifier probe
# ---------------------------------------------------------------------------

_FILLER = ["the", "and", "of", "to", "we", "in", "that", "for", "it", "on"]


def make_marker_corpus(
    n_per: int = 20,
    text_seed: int = 5,
    shuffle_seed: int | None = None,
) -> AnnotatedCorpus:
    """Two-group corpus where group membership is encoded by a marker token.

    The first ``n_per`` documents sprinkle "alpha", the rest "beta", each at
    a 25% rate over 60 tokens, on top of shared filler words.  With intact
    labels the groups are linearly separable from token frequencies alone.
    Passing ``shuffle_seed`` permutes the gender labels (breaking the
    label/marker link) while leaving the texts untouched.
    """
    rng = np.random.default_rng(text_seed)
    genders = [Gender.MALE] * n_per + [Gender.FEMALE] * n_per
    if shuffle_seed is not None:
        perm = np.random.default_rng(shuffle_seed).permutation(2 * n_per)
        genders = [genders[i] for i in perm]
    documents = []
    for i in range(2 * n_per):
        marker = "alpha" if i < n_per else "beta"
        words = [
            marker if rng.random() < 0.25 else _FILLER[int(rng.integers(len(_FILLER)))]
            for _ in range(60)
        ]
        transcript = Transcript(
            talk_id=f"t{i}", speaker_name=f"spk {i}", text=" ".join(words)
        )
        speaker = SpeakerRecord(speaker_name=f"spk {i}", gender=genders[i])
        documents.append(AnnotatedDoc(transcript=transcript, speaker=speaker))
    return AnnotatedCorpus(documents=documents)


# ---------------------------------------------------------------------------
# Two-group count matrices for the workflow
# ---------------------------------------------------------------------------


def make_groups_matrix(
    seed: int = 0,
    shift_sd: float = 0.0,
    shift_var: int = 2,
    n_per_group: int = 60,
    n_vars: int = 6,
) -> CountMatrix:
    """Seeded two-group count matrix with optional single-variable shift.

    Both groups draw every variable from Normal(50, 8) rounded to counts.
    With ``shift_sd`` nonzero, group "b" redraws variable ``shift_var`` from
    a mean shifted by that many standard deviations, giving a matrix whose
    only true group difference is that one column.
    """
    rng = np.random.default_rng(seed)
    a = np.clip(np.rint(rng.normal(50, 8, (n_per_group, n_vars))), 0, None)
    b = np.clip(np.rint(rng.normal(50, 8, (n_per_group, n_vars))), 0, None)
    if shift_sd:
        shifted = rng.normal(50 + shift_sd * 8, 8, n_per_group)
        b[:, shift_var] = np.clip(np.rint(shifted), 0, None)
    rows = np.vstack([a, b]).astype(np.int64)
    return CountMatrix(
        variables=[f"v{i}" for i in range(n_vars)],
        rows=rows,
        labels=["a"] * n_per_group + ["b"] * n_per_group,
        doc_ids=[f"d{i}" for i in range(2 * n_per_group)],
    )


# ---------------------------------------------------------------------------
# On-disk demo dataset for CLI end-to-end tests
# ---------------------------------------------------------------------------

# Word pools aligned with the bundled category lexicon; each pool maps to a
# single universal part-of-speech tag so the POS annotation file can be
# generated alongside the text.
_POOLS: dict[str, tuple[list[str], str]] = {
    "pronoun_first": (["i", "me", "my", "we", "us", "our"], "PRON"),
    "pronoun_other": (["you", "your", "they", "them"], "PRON"),
    "family": (["family", "mother", "father", "brother", "sister", "parents"], "NOUN"),
    "social_verb": (["talking", "share", "love"], "VERB"),
    "social_noun": (["friends", "people"], "NOUN"),
    "social_adv": (["together"], "ADV"),
    "positive_adj": (["happy", "good", "great", "wonderful"], "ADJ"),
    "positive_noun": (["joy", "happiness"], "NOUN"),
    "cognition_verb": (["think", "know", "believe", "understand"], "VERB"),
    "cognition_noun": (["reason", "ideas"], "NOUN"),
    "numbers": (["one", "two", "three", "ten", "hundred", "first"], "NUM"),
    "negative": (["sad", "afraid", "worried"], "ADJ"),
    "certainty": (["always", "never", "definitely"], "ADV"),
    "time": (["today", "yesterday", "time", "moment"], "NOUN"),
    "det": (["the", "a", "this", "that"], "DET"),
    "adp": (["of", "in", "on", "with", "about"], "ADP"),
    "cconj": (["and", "but", "or"], "CCONJ"),
    "verb": (["is", "was", "went", "made", "found", "started"], "VERB"),
    "noun": (["world", "story", "school", "city", "work", "stage"], "NOUN"),
    "adv": (["really", "very", "often"], "ADV"),
    "adj": (["new", "small", "important"], "ADJ"),
}

# Per-token sampling rates by gender.  Social, positive-emotion and
# first-person pools lean female; number and cognition pools lean male.
# Pools absent from a mapping share the remaining probability mass via the
# filler weights below.
_GENDER_RATES = {
    "Male": {
        "pronoun_first": 0.075,
        "pronoun_other": 0.035,
        "family": 0.065,
        "social_verb": 0.028,
        "social_noun": 0.018,
        "social_adv": 0.009,
        "positive_adj": 0.037,
        "positive_noun": 0.018,
        "cognition_verb": 0.067,
        "cognition_noun": 0.033,
        "numbers": 0.090,
        "negative": 0.020,
        "certainty": 0.030,
        "time": 0.030,
    },
    "Female": {
        "pronoun_first": 0.085,
        "pronoun_other": 0.035,
        "family": 0.085,
        "social_verb": 0.038,
        "social_noun": 0.025,
        "social_adv": 0.012,
        "positive_adj": 0.053,
        "positive_noun": 0.027,
        "cognition_verb": 0.053,
        "cognition_noun": 0.027,
        "numbers": 0.055,
        "negative": 0.020,
        "certainty": 0.030,
        "time": 0.030,
    },
}

_FILLER_WEIGHTS = {
    "det": 0.22,
    "adp": 0.22,
    "cconj": 0.13,
    "verb": 0.18,
    "noun": 0.14,
    "adv": 0.055,
    "adj": 0.055,
}


def _doc_tokens(rng: np.random.Generator, gender: str, length: int) -> list[str]:
    rates = _GENDER_RATES[gender]
    names = list(rates) + list(_FILLER_WEIGHTS)
    filler_mass = 1.0 - sum(rates.values())
    probs = np.array(
        [rates[n] for n in rates]
        + [filler_mass * w / sum(_FILLER_WEIGHTS.values()) for w in _FILLER_WEIGHTS.values()]
    )
    probs = probs / probs.sum()
    pool_picks = rng.choice(len(names), size=length, p=probs)
    tokens = []
    for pick in pool_picks:
        pool, _tag = _POOLS[names[pick]]
        tokens.append(pool[int(rng.integers(len(pool)))])
    return tokens


def _decorate_text(rng: np.random.Generator, tokens: list[str], stage_noise: bool) -> str:
    """Render clean tokens as messy raw text the tokenizer must undo."""
    pieces = []
    for i, token in enumerate(tokens):
        word = token
        if i % 17 == 0:
            word = word.capitalize()
        if i % 11 == 10:
            word = word + ("." if i % 2 else ",")
        pieces.append(word)
        if stage_noise and i == 40:
            pieces.append("(Laughter)")
        if stage_noise and i == 120:
            pieces.append("(Applause)")
    return " ".join(pieces)


_TOKEN_TAGS = {
    word: tag for pool, tag in _POOLS.values() for word in pool
}


def write_demo_dataset(root: Path) -> dict[str, object]:
    """Write a small but full-featured dataset under ``root``.

    Returns the file paths plus per-document expectations:

    * ``transcripts``/``speakers``/``pos`` — input file paths,
    * ``token_counts`` — clean token count per surviving talk_id,
    * ``labels`` — gender label per surviving talk_id.

    The transcript file contains, beyond the 54 surviving talks
    (28 male / 26 female speakers), six repeat talks by existing speakers
    (dropped by one-per-speaker dedup), three talks whose speakers have
    unrecognized gender metadata, and one talk whose speaker is missing
    from the metadata file entirely.
    """
    rng = np.random.default_rng(20230817)
    male_speakers = [f"Speaker M{i:02d}" for i in range(28)]
    female_speakers = [f"Speaker F{i:02d}" for i in range(26)]
    # NFC join check: transcript uses a decomposed accent, metadata the
    # precomposed form.  Both normalize to the same key.
    decomposed = "José Tester"
    precomposed = "José Tester"
    male_speakers[0] = decomposed

    rows: list[dict[str, str]] = []
    token_counts: dict[str, int] = {}
    labels: dict[str, str] = {}
    pos_docs: dict[str, list[str]] = {}

    def add_talk(talk_id: str, speaker: str, gender: str | None, *,
                 published: str = "", duration: str = "",
                 length: int | None = None, stage_noise: bool = False) -> None:
        n = length if length is not None else int(rng.integers(280, 361))
        tokens = _doc_tokens(rng, gender or "Male", n)
        rows.append(
            {
                "talk_id": talk_id,
                "speaker_name": speaker,
                "text": _decorate_text(rng, tokens, stage_noise),
                "published": published,
                "duration_seconds": duration,
            }
        )
        pos_docs[talk_id] = tokens
        if gender is not None:
            token_counts[talk_id] = n
            labels[talk_id] = gender

    for i, speaker in enumerate(male_speakers):
        add_talk(
            f"t{i:03d}", speaker, "Male",
            published=f"2023-01-{(i % 27) + 1:02d}",
            duration=str(600 + 10 * i) if i % 3 else "",
            stage_noise=i % 2 == 0,
        )
    for i, speaker in enumerate(female_speakers):
        add_talk(
            f"t{i + 100:03d}", speaker, "Female",
            published=f"2023-02-{(i % 27) + 1:02d}",
            duration=str(540 + 12 * i) if i % 4 else "",
            stage_noise=i % 2 == 1,
        )
    # Repeat talks by known speakers: removed by dedup (default keeps the
    # first talk in corpus order), so they must not affect any counts.
    for j, speaker in enumerate(male_speakers[:3] + female_speakers[:3]):
        add_talk(
            f"t{j + 900:03d}", speaker, None,
            published=f"2024-03-{j + 1:02d}", length=120,
        )
    # Speakers with unusable gender metadata plus one with no metadata row.
    for j in range(3):
        add_talk(f"t{j + 950:03d}", f"Speaker U{j:02d}", None, length=150)
    add_talk("t999", "Speaker X99", None, length=150)

    transcripts_path = root / "transcripts.csv"
    with transcripts_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(
            handle,
            fieldnames=["talk_id", "speaker_name", "text", "published", "duration_seconds"],
        )
        writer.writeheader()
        writer.writerows(rows)

    speakers_path = root / "speakers.csv"
    with speakers_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["speaker_name", "gender", "origin"])
        for speaker in male_speakers:
            name = precomposed if speaker == decomposed else speaker
            writer.writerow([name, "Male", "somewhere"])
        for i, speaker in enumerate(female_speakers):
            writer.writerow([speaker, "female" if i % 2 else "Female", ""])
        # Duplicate metadata row with the same gender: allowed, not a conflict.
        writer.writerow([male_speakers[1], "m", "elsewhere"])
        # Unknown row later upgraded by a known row for the same speaker.
        writer.writerow([female_speakers[0], "", ""])
        for j in range(3):
            writer.writerow([f"Speaker U{j:02d}", "unspecified", ""])

    pos_path = root / "pos_annotations.txt"
    with pos_path.open("w", encoding="utf-8") as handle:
        for talk_id, tokens in pos_docs.items():
            handle.write(f"# doc {talk_id}\n")
            for token in tokens:
                handle.write(f"{token}\t{_TOKEN_TAGS[token]}\n")
            handle.write("\n")

    return {
        "transcripts": transcripts_path,
        "speakers": speakers_path,
        "pos": pos_path,
        "token_counts": token_counts,
        "labels": labels,
    }


@pytest.fixture(scope="session")
def demo_dataset(tmp_path_factory: pytest.TempPathFactory) -> dict[str, object]:
    root = tmp_path_factory.mktemp("demo_data")
    return write_demo_dataset(root)


def write_demo_config(path: Path, dataset: dict[str, object], **extra: object) -> Path:
    """Write a key=value config file pointing at the demo dataset files."""
    lines = [
        f"ingest.transcripts = {dataset['transcripts']}",
        f"ingest.metadata = {dataset['speakers']}",
        f"features.pos_annotations = {dataset['pos']}",
    ]
    for key, value in extra.items():
        lines.append(f"{key} = {value}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
