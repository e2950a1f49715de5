"""Category lexicon loading and token categorization.

Reads percent-delimited dictionary files: a header block between two
lines containing only '%' declares "<id><TAB><category name>" pairs, and
each body line maps a word or stem pattern to one or more category ids.
A trailing '*' (only in final position) marks a stem that matches any
token with that prefix.  Matching gives literal entries priority over
stems, and longer stems priority over shorter ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import LexiconFormatError

__all__ = ["LexiconEntry", "Lexicon", "load_lexicon", "categorize_counts"]


@dataclass(frozen=True)
class LexiconEntry:
    """One pattern -> category-ids mapping from a lexicon file."""

    pattern: str
    category_ids: tuple[int, ...]

    @property
    def is_stem(self) -> bool:
        return self.pattern.endswith("*")


@dataclass
class Lexicon:
    """Category id -> name table plus the pattern entries.

    Builds prefix-match indexes lazily on first use.
    """

    categories: dict[int, str]
    entries: list[LexiconEntry]
    _literal: dict[str, tuple[int, ...]] = field(default_factory=dict, repr=False)
    _stems: dict[str, tuple[int, ...]] = field(default_factory=dict, repr=False)
    _stem_lengths: tuple[int, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        literal: dict[str, tuple[int, ...]] = {}
        stems: dict[str, tuple[int, ...]] = {}
        for entry in self.entries:
            target = stems if entry.is_stem else literal
            key = entry.pattern[:-1] if entry.is_stem else entry.pattern
            # Duplicate patterns merge; ids always come out sorted so that
            # match results do not depend on file order.
            merged = set(target.get(key, ())) | set(entry.category_ids)
            target[key] = tuple(sorted(merged))
        self._literal = literal
        self._stems = stems
        self._stem_lengths = tuple(sorted({len(k) for k in stems}, reverse=True))

    @property
    def category_ids(self) -> list[int]:
        return sorted(self.categories)

    def match(self, token: str) -> tuple[int, ...]:
        """Category ids for one token; empty tuple when nothing matches."""
        hit = self._literal.get(token)
        if hit is not None:
            return hit
        for length in self._stem_lengths:
            if length > len(token):
                continue
            hit = self._stems.get(token[:length])
            if hit is not None:
                return hit
        return ()

    def example_patterns(self, limit: int = 3) -> dict[int, list[str]]:
        """First few patterns per category, in file order (for reports)."""
        examples: dict[int, list[str]] = {cid: [] for cid in self.categories}
        for entry in self.entries:
            for cid in entry.category_ids:
                bucket = examples[cid]
                if len(bucket) < limit and entry.pattern not in bucket:
                    bucket.append(entry.pattern)
        return examples


def load_lexicon(path: str | Path) -> Lexicon:
    """Parse a percent-delimited dictionary file into a :class:`Lexicon`."""
    path = Path(path)
    categories: dict[int, str] = {}
    entries: list[LexiconEntry] = []
    in_header = False
    header_done = False
    with path.open(encoding="utf-8") as handle:
        for line_num, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            where = f"{path}:line {line_num}"
            if not line.strip():
                continue
            if line.strip() == "%":
                if header_done:
                    raise LexiconFormatError(f"{where}: unexpected third '%' delimiter")
                if in_header:
                    header_done = True
                    in_header = False
                else:
                    in_header = True
                continue
            fields = [f for f in line.split("\t") if f.strip()]
            if in_header:
                if len(fields) != 2:
                    raise LexiconFormatError(
                        f"{where}: header line must be '<id><TAB><name>', got {line!r}"
                    )
                try:
                    cid = int(fields[0])
                except ValueError as exc:
                    raise LexiconFormatError(
                        f"{where}: category id must be an integer, got {fields[0]!r}"
                    ) from exc
                if cid in categories:
                    raise LexiconFormatError(f"{where}: duplicate category id {cid}")
                categories[cid] = fields[1].strip()
            else:
                if not header_done:
                    raise LexiconFormatError(
                        f"{where}: entry line before the '%'-delimited header block"
                    )
                if len(fields) < 2:
                    raise LexiconFormatError(
                        f"{where}: entry line needs a pattern and at least one id"
                    )
                pattern = fields[0].strip().lower()
                if "*" in pattern[:-1]:
                    raise LexiconFormatError(
                        f"{where}: '*' is only allowed as the final character, got {pattern!r}"
                    )
                if pattern in ("", "*"):
                    raise LexiconFormatError(f"{where}: empty pattern")
                ids = []
                for fld in fields[1:]:
                    try:
                        cid = int(fld)
                    except ValueError as exc:
                        raise LexiconFormatError(
                            f"{where}: category id must be an integer, got {fld!r}"
                        ) from exc
                    if cid not in categories:
                        raise LexiconFormatError(
                            f"{where}: category id {cid} not declared in the header"
                        )
                    if cid not in ids:
                        ids.append(cid)
                entries.append(LexiconEntry(pattern=pattern, category_ids=tuple(ids)))
    if not header_done:
        raise LexiconFormatError(f"{path}: missing '%'-delimited header block")
    if not categories:
        raise LexiconFormatError(f"{path}: header declares no categories")
    if not entries:
        raise LexiconFormatError(f"{path}: no pattern entries after the header")
    return Lexicon(categories=categories, entries=entries)


def categorize_counts(tokens: Sequence[str], lexicon: Lexicon) -> dict[int, int]:
    """Count token hits per category id.

    Every declared category appears in the result (zero when unmatched);
    a token increments every category its matching entry lists.
    """
    counts = {cid: 0 for cid in lexicon.categories}
    for token in tokens:
        for cid in lexicon.match(token):
            counts[cid] += 1
    return counts
