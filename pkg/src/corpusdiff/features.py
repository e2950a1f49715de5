"""Feature extraction: word counts, n-gram tables, count matrices, POS tallies.

Bridges the annotated corpus to the statistical layer: per-document token
counts, two-group n-gram frequency tables, document-by-variable count
matrices built from lexicon categories or part-of-speech annotations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import AnnotatedCorpus
from .errors import DegenerateDataError, ParseError
from .lexicon import Lexicon, categorize_counts
from .stats import Descriptives, descriptive_stats
from .tokenizer import DEFAULT_TOKENIZER, TokenizerConfig, tokenize

__all__ = [
    "POS_TAGS",
    "FrequencyTable",
    "CountMatrix",
    "word_count_stats",
    "document_token_counts",
    "ngram_frequencies",
    "frequency_pairs",
    "build_count_matrix",
    "lexicon_count_matrix",
    "ingest_pos_annotations",
    "pos_count_matrix",
]

# Universal part-of-speech tag inventory accepted in annotation files.
POS_TAGS = (
    "ADJ",
    "ADP",
    "ADV",
    "AUX",
    "CCONJ",
    "CONJ",
    "DET",
    "INTJ",
    "NOUN",
    "NUM",
    "PART",
    "PRON",
    "PROPN",
    "PUNCT",
    "SCONJ",
    "SPACE",
    "SYM",
    "VERB",
    "X",
)


@dataclass(eq=False)
class FrequencyTable:
    """Per-term counts for two groups of documents.

    ``counts`` maps each n-gram (space-joined for n > 1) to its
    (group_a, group_b) occurrence counts, where ``groups`` names the two
    groups in the same order.
    """

    order: int
    groups: tuple[str, str]
    counts: dict[str, tuple[int, int]]

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError(f"n-gram order must be >= 1, got {self.order}")
        if len(self.groups) != 2 or self.groups[0] == self.groups[1]:
            raise ValueError(f"groups must be two distinct names, got {self.groups}")
        for term, pair in self.counts.items():
            if len(pair) != 2 or any(c < 0 for c in pair):
                raise ValueError(f"counts for {term!r} must be two non-negative ints")
            if pair == (0, 0):
                raise ValueError(f"term {term!r} has zero count in both groups")

    @property
    def vocabulary(self) -> list[str]:
        return sorted(self.counts)

    @property
    def group_totals(self) -> tuple[int, int]:
        total_a = sum(pair[0] for pair in self.counts.values())
        total_b = sum(pair[1] for pair in self.counts.values())
        return (total_a, total_b)

    def pooled(self, term: str) -> int:
        pair = self.counts.get(term, (0, 0))
        return pair[0] + pair[1]


def _doc_tokens(corpus: AnnotatedCorpus, config: TokenizerConfig) -> list[list[str]]:
    return [tokenize(doc.transcript.text, config) for doc in corpus]


def document_token_counts(
    corpus: AnnotatedCorpus, config: TokenizerConfig = DEFAULT_TOKENIZER
) -> list[tuple[str, str, int]]:
    """(doc_id, group label, token count) per document, in corpus order."""
    return [
        (doc.transcript.talk_id, doc.speaker.gender.value, len(tokens))
        for doc, tokens in zip(corpus, _doc_tokens(corpus, config))
    ]


def word_count_stats(
    corpus: AnnotatedCorpus, config: TokenizerConfig = DEFAULT_TOKENIZER
) -> dict[str, Descriptives]:
    """Per-group summary statistics of document token counts."""
    per_group: dict[str, list[int]] = {}
    for _, label, count in document_token_counts(corpus, config):
        per_group.setdefault(label, []).append(count)
    return {label: descriptive_stats(counts) for label, counts in sorted(per_group.items())}


def _two_group_labels(corpus: AnnotatedCorpus) -> tuple[str, str]:
    labels = sorted(set(corpus.labels))
    if len(labels) != 2:
        raise DegenerateDataError(
            f"expected exactly two document groups, found {len(labels)}: {labels}"
        )
    return (labels[0], labels[1])


def ngram_frequencies(
    corpus: AnnotatedCorpus,
    n: int = 1,
    config: TokenizerConfig = DEFAULT_TOKENIZER,
) -> FrequencyTable:
    """Count n-grams per group over a two-group corpus.

    Each document contributes max(len(tokens) - n + 1, 0) n-grams, so the
    unigram totals equal the summed token counts.
    """
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    groups = _two_group_labels(corpus)
    group_index = {groups[0]: 0, groups[1]: 1}
    counts: dict[str, list[int]] = {}
    for doc, tokens in zip(corpus, _doc_tokens(corpus, config)):
        gidx = group_index[doc.speaker.gender.value]
        for i in range(len(tokens) - n + 1):
            term = " ".join(tokens[i : i + n])
            pair = counts.get(term)
            if pair is None:
                pair = [0, 0]
                counts[term] = pair
            pair[gidx] += 1
    return FrequencyTable(
        order=n,
        groups=groups,
        counts={term: (pair[0], pair[1]) for term, pair in counts.items()},
    )


def frequency_pairs(
    table: FrequencyTable, shared_only: bool = False
) -> tuple[list[str], np.ndarray, np.ndarray]:
    """Aligned per-term count vectors for the two groups.

    Terms are sorted; with ``shared_only`` terms absent from either group
    are dropped, otherwise absences contribute zeros.
    """
    terms = [
        t
        for t in table.vocabulary
        if not shared_only or (table.counts[t][0] > 0 and table.counts[t][1] > 0)
    ]
    x = np.array([table.counts[t][0] for t in terms], dtype=float)
    y = np.array([table.counts[t][1] for t in terms], dtype=float)
    return terms, x, y


@dataclass(eq=False)
class CountMatrix:
    """Documents-by-variables count matrix with group labels.

    Rows align with ``doc_ids`` and ``labels``; columns with ``variables``.
    """

    variables: list[str]
    rows: np.ndarray
    labels: list[str]
    doc_ids: list[str]

    def __post_init__(self) -> None:
        self.rows = np.asarray(self.rows)
        if self.rows.ndim != 2:
            raise ValueError(f"rows must be 2-D, got shape {self.rows.shape}")
        n, p = self.rows.shape
        if len(self.variables) != p:
            raise ValueError(f"{len(self.variables)} variable names for {p} columns")
        if len(self.labels) != n or len(self.doc_ids) != n:
            raise ValueError(
                f"rows={n} but labels={len(self.labels)}, doc_ids={len(self.doc_ids)}"
            )
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be unique")
        if len(set(self.doc_ids)) != len(self.doc_ids):
            raise ValueError("doc_ids must be unique")
        values = self.rows.astype(float, copy=False)
        if not np.all(np.isfinite(values)):
            raise ValueError("matrix entries must be finite")
        if values.size and values.min() < 0:
            raise ValueError("matrix entries must be non-negative")

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows.shape

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.variables.index(name)]

    def group_names(self) -> list[str]:
        return sorted(set(self.labels))

    def group_rows(self, label: str) -> np.ndarray:
        mask = np.asarray([lab == label for lab in self.labels])
        return self.rows[mask]

    def group_column(self, name: str, label: str) -> np.ndarray:
        return self.group_rows(label)[:, self.variables.index(name)]

    def column_means(self) -> dict[str, float]:
        means = self.rows.astype(float).mean(axis=0)
        return {var: float(m) for var, m in zip(self.variables, means)}

    def select_variables(self, names: Sequence[str]) -> "CountMatrix":
        index = [self.variables.index(name) for name in names]
        return CountMatrix(
            variables=list(names),
            rows=self.rows[:, index],
            labels=list(self.labels),
            doc_ids=list(self.doc_ids),
        )

    def drop_rows(self, indices: Iterable[int]) -> "CountMatrix":
        drop = set(int(i) for i in indices)
        keep = [i for i in range(self.rows.shape[0]) if i not in drop]
        return CountMatrix(
            variables=list(self.variables),
            rows=self.rows[keep],
            labels=[self.labels[i] for i in keep],
            doc_ids=[self.doc_ids[i] for i in keep],
        )


def build_count_matrix(
    corpus: AnnotatedCorpus,
    variables: Sequence[str],
    counts_by_doc: Mapping[str, Mapping[str, int]],
) -> CountMatrix:
    """Assemble a CountMatrix from per-document variable counts.

    Rows follow corpus order; a document missing from ``counts_by_doc``
    is an error, while variables absent from a document's mapping count
    as zero and unlisted variables are ignored.
    """
    variables = list(variables)
    rows = np.zeros((len(corpus), len(variables)), dtype=np.int64)
    for r, doc in enumerate(corpus):
        doc_id = doc.transcript.talk_id
        doc_counts = counts_by_doc.get(doc_id)
        if doc_counts is None:
            raise ValueError(f"no counts supplied for document {doc_id!r}")
        for c, var in enumerate(variables):
            rows[r, c] = int(doc_counts.get(var, 0))
    return CountMatrix(
        variables=variables,
        rows=rows,
        labels=list(corpus.labels),
        doc_ids=list(corpus.doc_ids),
    )


def lexicon_count_matrix(
    corpus: AnnotatedCorpus,
    lexicon: Lexicon,
    config: TokenizerConfig = DEFAULT_TOKENIZER,
) -> CountMatrix:
    """Tokenize every document and count lexicon-category hits.

    Columns are category names in ascending id order; a duplicated name
    gets its id appended to stay unique.
    """
    ids = lexicon.category_ids
    tally: dict[str, int] = {}
    for cid in ids:
        name = lexicon.categories[cid]
        tally[name] = tally.get(name, 0) + 1
    # Every occurrence of a duplicated name carries its id, so no column
    # is left ambiguous about which category it counts.
    names = [
        f"{lexicon.categories[cid]}_{cid}"
        if tally[lexicon.categories[cid]] > 1
        else lexicon.categories[cid]
        for cid in ids
    ]
    by_name = dict(zip(ids, names))
    counts_by_doc: dict[str, dict[str, int]] = {}
    for doc, tokens in zip(corpus, _doc_tokens(corpus, config)):
        cat_counts = categorize_counts(tokens, lexicon)
        counts_by_doc[doc.transcript.talk_id] = {
            by_name[cid]: count for cid, count in cat_counts.items()
        }
    return build_count_matrix(corpus, names, counts_by_doc)


def ingest_pos_annotations(path: str | Path) -> dict[str, dict[str, int]]:
    """Read token/part-of-speech annotation files into per-document tag counts.

    Format: a ``# doc <id>`` line starts a document, followed by one
    ``<token><TAB><TAG>`` line per token; a blank line (or the next
    header) ends the document.  Tags must belong to :data:`POS_TAGS`.
    Every document gets a count for all tags, zeros included.
    """
    path = Path(path)
    results: dict[str, dict[str, int]] = {}
    current: dict[str, int] | None = None
    with path.open(encoding="utf-8") as handle:
        for line_num, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            where = f"{path}:line {line_num}"
            if not line.strip():
                current = None
                continue
            if line.startswith("# doc"):
                doc_id = line[len("# doc") :].strip()
                if not doc_id:
                    raise ParseError(f"{where}: document header is missing an id")
                if doc_id in results:
                    raise ParseError(f"{where}: duplicate document id {doc_id!r}")
                current = {tag: 0 for tag in POS_TAGS}
                results[doc_id] = current
                continue
            if current is None:
                raise ParseError(f"{where}: token line outside any '# doc' block")
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0]:
                raise ParseError(
                    f"{where}: expected '<token><TAB><TAG>', got {line!r}"
                )
            tag = parts[1].strip()
            if tag not in POS_TAGS:
                raise ParseError(f"{where}: unknown part-of-speech tag {tag!r}")
            current[tag] += 1
    return results


def pos_count_matrix(
    corpus: AnnotatedCorpus, pos_counts: Mapping[str, Mapping[str, int]]
) -> CountMatrix:
    """CountMatrix over the full tag inventory for an annotated corpus.

    Every corpus document must have an annotation entry; annotation ids
    without a corpus document are ignored.
    """
    missing = [doc_id for doc_id in corpus.doc_ids if doc_id not in pos_counts]
    if missing:
        raise ValueError(
            "no part-of-speech annotations for document(s): " + ", ".join(missing[:5])
            + ("..." if len(missing) > 5 else "")
        )
    return build_count_matrix(corpus, list(POS_TAGS), pos_counts)
