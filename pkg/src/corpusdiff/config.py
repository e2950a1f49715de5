"""Flat key=value run configuration with a typed defaults registry.

Configuration merges three layers, later winning: built-in defaults, an
optional config file of ``key = value`` lines, and command-line overrides.
Keys are namespaced by pipeline stage (``logodds.alpha0``); unknown keys
and unparsable values are errors, never silently ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping

from .errors import ConfigError

__all__ = ["ConfigField", "REGISTRY", "RunConfig", "load_config_file", "resolve_config"]


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_int(raw: str) -> int:
    return int(raw.strip())


def _parse_float(raw: str) -> float:
    return float(raw.strip())


def _parse_str(raw: str) -> str:
    return raw.strip()


def _parse_int_list(raw: str) -> tuple[int, ...]:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty list")
    return tuple(int(p) for p in parts)


@dataclass(frozen=True)
class ConfigField:
    """One registered key: its default, parser, and optional choices."""

    default: object
    parse: Callable[[str], object]
    choices: tuple[str, ...] | None = None
    help: str = ""


REGISTRY: dict[str, ConfigField] = {
    "seed": ConfigField(0, _parse_int, help="global random seed recorded in artifacts"),
    "out_dir": ConfigField("out", _parse_str, help="artifact output directory"),
    # corpus ingestion
    "ingest.transcripts": ConfigField("", _parse_str, help="transcript CSV/JSONL path"),
    "ingest.transcripts_format": ConfigField(
        "csv", _parse_str, choices=("csv", "jsonl"), help="transcript file format"
    ),
    "ingest.metadata": ConfigField("", _parse_str, help="speaker metadata CSV path"),
    "ingest.dedup_policy": ConfigField(
        "first",
        _parse_str,
        choices=("first", "longest", "earliest_published"),
        help="which talk to keep per speaker",
    ),
    # tokenizer
    "tokenizer.strip_stage_directions": ConfigField(
        True, _parse_bool, help="drop parenthetical asides like (Laughter)"
    ),
    "tokenizer.keep_hyphenated": ConfigField(
        True, _parse_bool, help="keep hyphenated words as one token"
    ),
    # feature extraction
    "features.lexicon": ConfigField(
        "", _parse_str, help="category lexicon path (empty = bundled demo lexicon)"
    ),
    "features.pos_annotations": ConfigField(
        "", _parse_str, help="part-of-speech annotation file (empty = skip POS matrix)"
    ),
    "features.ngram_orders": ConfigField(
        (1, 2), _parse_int_list, help="comma-separated n-gram orders to count"
    ),
    # weighted log odds
    "logodds.alpha0": ConfigField(1.0, _parse_float, help="total Dirichlet prior mass"),
    "logodds.min_count": ConfigField(0, _parse_int, help="minimum pooled count to report"),
    "logodds.top_k": ConfigField(10, _parse_int, help="terms per group in top-term lists"),
    # MANOVA workflow (shared across datasets except the low-mean threshold)
    "manova.liwc.low_mean_threshold": ConfigField(
        20.0, _parse_float, help="low-mean cutoff for the lexicon-category matrix"
    ),
    "manova.pos.low_mean_threshold": ConfigField(
        10.0, _parse_float, help="low-mean cutoff for the part-of-speech matrix"
    ),
    "manova.normality.skew_limit": ConfigField(2.0, _parse_float),
    "manova.normality.kurt_limit": ConfigField(7.0, _parse_float),
    "manova.collinearity_cutoff": ConfigField(0.9, _parse_float),
    "manova.mahalanobis_quantile": ConfigField(0.999, _parse_float),
    "manova.family_alpha": ConfigField(0.05, _parse_float),
    "manova.levene_center": ConfigField("median", _parse_str, choices=("median", "mean")),
    # classifier probe
    "classify.k": ConfigField(5, _parse_int),
    "classify.min_token_count": ConfigField(2, _parse_int),
    "classify.l2_lambda": ConfigField(1e-3, _parse_float),
    "classify.max_iters": ConfigField(2000, _parse_int),
    "classify.tolerance": ConfigField(1e-6, _parse_float),
    # report rendering
    "report.render_figures": ConfigField(True, _parse_bool, help="also render PNG figures"),
    "report.figure_dpi": ConfigField(100, _parse_int),
}


@dataclass
class RunConfig:
    """Fully-resolved configuration for one CLI invocation."""

    values: dict[str, object]
    source_file: str | None = None

    def __getitem__(self, key: str) -> object:
        try:
            return self.values[key]
        except KeyError:
            raise ConfigError(f"unknown config key {key!r}") from None

    @property
    def seed(self) -> int:
        return int(self.values["seed"])  # type: ignore[arg-type]

    @property
    def out_dir(self) -> Path:
        return Path(str(self.values["out_dir"]))

    def section(self, prefix: str) -> dict[str, object]:
        """Keys under ``prefix.`` with the prefix removed."""
        dot = prefix + "."
        return {k[len(dot):]: v for k, v in self.values.items() if k.startswith(dot)}

    def to_recorded(self) -> dict[str, object]:
        """JSON-safe view for manifests; out_dir excluded so that artifact
        content does not depend on where it is written."""
        recorded: dict[str, object] = {}
        for key, value in sorted(self.values.items()):
            if key == "out_dir":
                continue
            recorded[key] = list(value) if isinstance(value, tuple) else value
        return recorded


def _parse_value(key: str, raw: object, where: str) -> object:
    field = REGISTRY.get(key)
    if field is None:
        raise ConfigError(f"{where}: unknown config key {key!r}")
    if not isinstance(raw, str):
        return raw
    try:
        value = field.parse(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: bad value for {key!r}: {raw!r} ({exc})") from exc
    if field.choices is not None and value not in field.choices:
        raise ConfigError(
            f"{where}: {key!r} must be one of {', '.join(field.choices)}, got {value!r}"
        )
    return value


def load_config_file(path: str | Path) -> dict[str, str]:
    """Read ``key = value`` lines; '#' lines are comments, blanks skipped.

    Values stay raw strings here; typing happens against the registry in
    :func:`resolve_config`.  Duplicate keys are an error.
    """
    path = Path(path)
    values: dict[str, str] = {}
    with path.open(encoding="utf-8") as handle:
        for line_num, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(
                    f"{path}:line {line_num}: expected 'key = value', got {raw.rstrip()!r}"
                )
            key, _, value = line.partition("=")
            key = key.strip()
            if not key:
                raise ConfigError(f"{path}:line {line_num}: empty key")
            if key in values:
                raise ConfigError(f"{path}:line {line_num}: duplicate key {key!r}")
            values[key] = value.strip()
    return values


def resolve_config(
    config_file: str | Path | None = None,
    overrides: Mapping[str, str] | None = None,
    seed: int | None = None,
    out_dir: str | None = None,
) -> RunConfig:
    """Merge defaults, an optional config file, and CLI overrides."""
    values: dict[str, object] = {key: field.default for key, field in REGISTRY.items()}
    source = None
    if config_file is not None:
        source = str(config_file)
        for key, raw in load_config_file(config_file).items():
            values[key] = _parse_value(key, raw, source)
    for key, raw in (overrides or {}).items():
        values[key] = _parse_value(key, raw, "command line")
    if seed is not None:
        values["seed"] = int(seed)
    if out_dir is not None:
        values["out_dir"] = str(out_dir)
    return RunConfig(values=values, source_file=source)
