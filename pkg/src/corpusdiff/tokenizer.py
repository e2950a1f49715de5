"""Deterministic word tokenizer for transcript text.

Lowercases, optionally removes parenthetical stage directions such as
"(Laughter)", splits on whitespace, and strips leading/trailing Unicode
punctuation while keeping word-internal apostrophes and hyphens.  The
output is stable under re-tokenization: tokenizing the space-joined token
list returns the same list.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

__all__ = ["TokenizerConfig", "DEFAULT_TOKENIZER", "tokenize"]

_STAGE_DIRECTION_RE = re.compile(r"\([^()]*\)")


@dataclass(frozen=True)
class TokenizerConfig:
    """Switches for transcript tokenization.

    strip_stage_directions: drop parenthesized asides entirely.
    keep_hyphenated: keep e.g. "well-being" as one token; when False the
    token is split at ASCII hyphens.
    """

    strip_stage_directions: bool = True
    keep_hyphenated: bool = True


DEFAULT_TOKENIZER = TokenizerConfig()


def _is_strippable(char: str) -> bool:
    return unicodedata.category(char).startswith("P")


def _strip_punctuation(token: str) -> str:
    start = 0
    end = len(token)
    while start < end and _is_strippable(token[start]):
        start += 1
    while end > start and _is_strippable(token[end - 1]):
        end -= 1
    return token[start:end]


def tokenize(text: str, config: TokenizerConfig = DEFAULT_TOKENIZER) -> list[str]:
    """Split text into lowercase word tokens.

    Returns an empty list for empty or punctuation-only input.
    """
    lowered = text.lower()
    if config.strip_stage_directions:
        # Innermost-first so nested "((applause))" collapses completely.
        previous = None
        while previous != lowered:
            previous = lowered
            lowered = _STAGE_DIRECTION_RE.sub(" ", lowered)
    tokens: list[str] = []
    for raw in lowered.split():
        pieces = [raw] if config.keep_hyphenated else raw.split("-")
        for piece in pieces:
            stripped = _strip_punctuation(piece)
            if stripped:
                tokens.append(stripped)
    return tokens
