"""Transcript and speaker-metadata ingestion.

Loads talk transcripts from CSV or JSONL, joins speaker gender metadata by
normalized speaker name, reduces the corpus to one talk per speaker, and
filters to documents whose speaker gender is known.  The joined corpus
round-trips through JSONL for use by downstream pipeline stages.
"""

from __future__ import annotations

import csv
import datetime as _dt
import json
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

from .errors import EmptyCorpusError, MetadataConflictError, ParseError

__all__ = [
    "Gender",
    "Transcript",
    "SpeakerRecord",
    "AnnotatedDoc",
    "AnnotatedCorpus",
    "parse_gender",
    "load_transcripts",
    "load_speaker_metadata",
    "join_speaker_metadata",
    "dedup_one_per_speaker",
    "filter_known_gender",
    "save_corpus",
    "load_corpus",
]


class Gender(Enum):
    MALE = "Male"
    FEMALE = "Female"
    UNKNOWN = "Unknown"


_GENDER_ALIASES = {
    "male": Gender.MALE,
    "m": Gender.MALE,
    "female": Gender.FEMALE,
    "f": Gender.FEMALE,
}


def parse_gender(value: str | None) -> Gender:
    """Map a free-text gender field to the three-way enum.

    Recognizes male/m and female/f case-insensitively; anything else,
    including blanks, becomes Unknown.
    """
    if value is None:
        return Gender.UNKNOWN
    return _GENDER_ALIASES.get(value.strip().lower(), Gender.UNKNOWN)


def normalize_name(name: str) -> str:
    """Join key for speaker names: NFC-normalized, trimmed, case preserved."""
    return unicodedata.normalize("NFC", name).strip()


@dataclass(frozen=True)
class Transcript:
    """One talk: identifier, speaker display name, and full transcript text."""

    talk_id: str
    speaker_name: str
    text: str
    published: _dt.date | None = None
    duration_seconds: float | None = None

    def __post_init__(self) -> None:
        if not self.talk_id.strip():
            raise ValueError("talk_id must be non-empty")
        if not self.speaker_name.strip():
            raise ValueError("speaker_name must be non-empty")
        if not self.text.strip():
            raise ValueError("transcript text must be non-empty")
        if self.duration_seconds is not None and self.duration_seconds < 0:
            raise ValueError(f"duration_seconds must be >= 0, got {self.duration_seconds}")


@dataclass(frozen=True)
class SpeakerRecord:
    """Speaker-level metadata; gender defaults to Unknown."""

    speaker_name: str
    gender: Gender = Gender.UNKNOWN
    origin: str | None = None

    def __post_init__(self) -> None:
        if not self.speaker_name.strip():
            raise ValueError("speaker_name must be non-empty")


class AnnotatedDoc(NamedTuple):
    """A transcript paired with its speaker's metadata."""

    transcript: Transcript
    speaker: SpeakerRecord


@dataclass
class AnnotatedCorpus:
    """An ordered collection of annotated documents."""

    documents: list[AnnotatedDoc] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[AnnotatedDoc]:
        return iter(self.documents)

    @property
    def doc_ids(self) -> list[str]:
        return [doc.transcript.talk_id for doc in self.documents]

    @property
    def labels(self) -> list[str]:
        """Group label (gender value) per document, in corpus order."""
        return [doc.speaker.gender.value for doc in self.documents]

    def group_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for doc in self.documents:
            key = doc.speaker.gender.value
            counts[key] = counts.get(key, 0) + 1
        return counts


def _parse_date(raw: str | None, where: str) -> _dt.date | None:
    if raw is None or not raw.strip():
        return None
    try:
        return _dt.date.fromisoformat(raw.strip())
    except ValueError as exc:
        raise ParseError(f"{where}: invalid ISO date {raw!r}") from exc


def _parse_duration(raw: str | float | int | None, where: str) -> float | None:
    if raw is None or (isinstance(raw, str) and not raw.strip()):
        return None
    try:
        value = float(raw)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: invalid duration {raw!r}") from exc
    if value < 0:
        raise ParseError(f"{where}: duration must be >= 0, got {value}")
    return value


def _build_transcript(
    record: dict[str, object], where: str, seen_ids: set[str]
) -> Transcript:
    missing = [k for k in ("talk_id", "speaker_name", "text") if not record.get(k)]
    if missing:
        raise ParseError(f"{where}: missing required field(s) {', '.join(missing)}")
    talk_id = str(record["talk_id"]).strip()
    if talk_id in seen_ids:
        raise ParseError(f"{where}: duplicate talk_id {talk_id!r}")
    try:
        transcript = Transcript(
            talk_id=talk_id,
            speaker_name=str(record["speaker_name"]),
            text=str(record["text"]),
            published=_parse_date(record.get("published"), where)
            if not isinstance(record.get("published"), _dt.date)
            else record.get("published"),
            duration_seconds=_parse_duration(record.get("duration_seconds"), where),
        )
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from exc
    seen_ids.add(talk_id)
    return transcript


def load_transcripts(path: str | Path, format: str = "csv") -> list[Transcript]:
    """Read transcripts from a CSV or JSONL file.

    CSV requires a header with talk_id, speaker_name and text columns;
    published (ISO date) and duration_seconds are optional.  JSONL uses one
    object per line with the same field names.  Errors name the file and
    the offending row or line; an empty file yields an empty list.
    """
    path = Path(path)
    if format not in ("csv", "jsonl"):
        raise ValueError(f"format must be 'csv' or 'jsonl', got {format!r}")
    transcripts: list[Transcript] = []
    seen_ids: set[str] = set()
    if format == "csv":
        with path.open(newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None:
                return []
            required = {"talk_id", "speaker_name", "text"}
            missing_cols = required - set(reader.fieldnames)
            if missing_cols:
                raise ParseError(
                    f"{path}: missing required column(s) {', '.join(sorted(missing_cols))}"
                )
            for row_num, row in enumerate(reader, start=2):
                where = f"{path}:row {row_num}"
                transcripts.append(_build_transcript(dict(row), where, seen_ids))
    else:
        with path.open(encoding="utf-8") as handle:
            for line_num, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                where = f"{path}:line {line_num}"
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"{where}: invalid JSON ({exc.msg})") from exc
                if not isinstance(record, dict):
                    raise ParseError(f"{where}: expected a JSON object")
                transcripts.append(_build_transcript(record, where, seen_ids))
    return transcripts


def load_speaker_metadata(path: str | Path) -> list[SpeakerRecord]:
    """Read speaker metadata CSV with columns speaker_name, gender, origin.

    Only speaker_name is required; a missing gender column or blank value
    maps to Unknown.
    """
    path = Path(path)
    records: list[SpeakerRecord] = []
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            return []
        if "speaker_name" not in reader.fieldnames:
            raise ParseError(f"{path}: missing required column speaker_name")
        for row_num, row in enumerate(reader, start=2):
            name = (row.get("speaker_name") or "").strip()
            if not name:
                raise ParseError(f"{path}:row {row_num}: speaker_name must be non-empty")
            origin = (row.get("origin") or "").strip() or None
            records.append(
                SpeakerRecord(
                    speaker_name=name,
                    gender=parse_gender(row.get("gender")),
                    origin=origin,
                )
            )
    return records


def join_speaker_metadata(
    transcripts: Iterable[Transcript], metadata: Iterable[SpeakerRecord]
) -> AnnotatedCorpus:
    """Attach speaker metadata to transcripts by normalized speaker name.

    Transcripts without a metadata match get an Unknown-gender record.
    Metadata rows that assign two different known genders to one speaker
    raise MetadataConflictError listing every conflicted name.
    """
    by_name: dict[str, SpeakerRecord] = {}
    conflicts: set[str] = set()
    for record in metadata:
        key = normalize_name(record.speaker_name)
        existing = by_name.get(key)
        if existing is None:
            by_name[key] = record
        elif (
            existing.gender is not Gender.UNKNOWN
            and record.gender is not Gender.UNKNOWN
            and existing.gender is not record.gender
        ):
            conflicts.add(key)
        elif existing.gender is Gender.UNKNOWN and record.gender is not Gender.UNKNOWN:
            by_name[key] = record
    if conflicts:
        raise MetadataConflictError(
            "conflicting gender metadata for speaker(s): "
            + ", ".join(sorted(conflicts))
        )
    documents = []
    for transcript in transcripts:
        key = normalize_name(transcript.speaker_name)
        speaker = by_name.get(key, SpeakerRecord(speaker_name=transcript.speaker_name))
        documents.append(AnnotatedDoc(transcript=transcript, speaker=speaker))
    return AnnotatedCorpus(documents=documents)


def _doc_length(doc: AnnotatedDoc) -> int:
    return len(doc.transcript.text.split())


def dedup_one_per_speaker(corpus: AnnotatedCorpus, policy: str = "first") -> AnnotatedCorpus:
    """Keep a single document per (normalized) speaker name.

    Policies: "first" keeps the earliest document in corpus order,
    "longest" the one with the most whitespace-delimited words, and
    "earliest_published" the one with the earliest published date
    (undated documents lose to dated ones).  Ties fall back to corpus
    order, so the result is deterministic and the operation idempotent.
    """
    if policy not in ("first", "longest", "earliest_published"):
        raise ValueError(f"unknown dedup policy {policy!r}")
    chosen: dict[str, AnnotatedDoc] = {}
    order: list[str] = []
    for doc in corpus:
        key = normalize_name(doc.transcript.speaker_name)
        if key not in chosen:
            chosen[key] = doc
            order.append(key)
            continue
        if policy == "first":
            continue
        current = chosen[key]
        if policy == "longest":
            if _doc_length(doc) > _doc_length(current):
                chosen[key] = doc
        else:  # earliest_published
            new_date = doc.transcript.published
            cur_date = current.transcript.published
            if new_date is not None and (cur_date is None or new_date < cur_date):
                chosen[key] = doc
    return AnnotatedCorpus(documents=[chosen[key] for key in order])


def filter_known_gender(corpus: AnnotatedCorpus) -> AnnotatedCorpus:
    """Drop documents whose speaker gender is Unknown.

    Raises EmptyCorpusError if nothing remains.
    """
    kept = [doc for doc in corpus if doc.speaker.gender is not Gender.UNKNOWN]
    if not kept:
        raise EmptyCorpusError("no documents with known speaker gender remain")
    return AnnotatedCorpus(documents=kept)


def _doc_to_record(doc: AnnotatedDoc) -> dict[str, object]:
    transcript, speaker = doc
    record: dict[str, object] = {
        "talk_id": transcript.talk_id,
        "speaker_name": transcript.speaker_name,
        "text": transcript.text,
        "gender": speaker.gender.value,
    }
    if transcript.published is not None:
        record["published"] = transcript.published.isoformat()
    if transcript.duration_seconds is not None:
        record["duration_seconds"] = transcript.duration_seconds
    if speaker.origin is not None:
        record["origin"] = speaker.origin
    return record


def save_corpus(corpus: AnnotatedCorpus, path: str | Path) -> None:
    """Write an annotated corpus as JSON Lines (UTF-8, sorted keys)."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for doc in corpus:
            handle.write(json.dumps(_doc_to_record(doc), sort_keys=True, ensure_ascii=False))
            handle.write("\n")


def load_corpus(path: str | Path) -> AnnotatedCorpus:
    """Read an annotated corpus previously written by :func:`save_corpus`."""
    path = Path(path)
    documents: list[AnnotatedDoc] = []
    seen_ids: set[str] = set()
    with path.open(encoding="utf-8") as handle:
        for line_num, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            where = f"{path}:line {line_num}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{where}: invalid JSON ({exc.msg})") from exc
            transcript = _build_transcript(record, where, seen_ids)
            speaker = SpeakerRecord(
                speaker_name=transcript.speaker_name,
                gender=parse_gender(record.get("gender")),
                origin=(record.get("origin") or None),
            )
            documents.append(AnnotatedDoc(transcript=transcript, speaker=speaker))
    if not documents:
        raise EmptyCorpusError(f"{path}: corpus file contains no documents")
    return AnnotatedCorpus(documents=documents)
