"""Command-line pipeline: ingest -> features -> logodds -> manova -> classify -> report.

Each subcommand reads the artifacts of earlier stages from the output
directory, writes its own artifacts plus a manifest with SHA-256 hashes,
and is deterministic for a fixed seed and configuration.  The ``report``
subcommand turns analysis artifacts into plot-data JSON, a delimited
per-variable summary table, and (by default) rendered PNG figures.

Exit codes: 0 success, 1 data/analysis error, 2 usage or configuration
error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .artifacts import StageManifest, canonical, write_csv_atomic, write_json_atomic
from .classify import CvConfig, cross_validate
from .config import REGISTRY, RunConfig, resolve_config
from .corpus import (
    dedup_one_per_speaker,
    filter_known_gender,
    join_speaker_metadata,
    load_corpus,
    load_speaker_metadata,
    load_transcripts,
    save_corpus,
)
from .errors import ConfigError, CorpusDiffError, MissingArtifactError
from .features import (
    CountMatrix,
    FrequencyTable,
    document_token_counts,
    frequency_pairs,
    ingest_pos_annotations,
    lexicon_count_matrix,
    ngram_frequencies,
    pos_count_matrix,
    word_count_stats,
)
from .lexicon import load_lexicon
from .logodds import LogOddsEntry, LogOddsTable, top_k_terms, weighted_log_odds
from .plots import build_barchart, build_boxplot, build_histogram_plot, build_scatter
from .stats import pearson_correlation
from .tokenizer import TokenizerConfig
from .workflow import HistogramData, WorkflowConfig, run_manova_workflow

log = logging.getLogger("corpusdiff")

_CORPUS_FILE = "corpus.jsonl"
_BUNDLED_LEXICON = Path(__file__).parent / "data" / "demo_lexicon.dic"

SUBCOMMANDS = ("ingest", "features", "logodds", "manova", "classify", "report")


def _meta(cfg: RunConfig, subcommand: str) -> dict[str, object]:
    return {"seed": cfg.seed, "subcommand": subcommand, "tool_version": __version__}


def _require_artifact(path: Path, stage: str) -> Path:
    if not path.exists():
        raise MissingArtifactError(
            f"missing artifact {path.name}; run the '{stage}' subcommand first"
        )
    return path


def _require_input(raw: object, key: str) -> Path:
    text = str(raw)
    if not text:
        raise ConfigError(f"config key {key!r} is required for this subcommand")
    path = Path(text)
    if not path.exists():
        raise ConfigError(f"{key} path does not exist: {path}")
    return path


def _tokenizer_config(cfg: RunConfig) -> TokenizerConfig:
    section = cfg.section("tokenizer")
    return TokenizerConfig(
        strip_stage_directions=bool(section["strip_stage_directions"]),
        keep_hyphenated=bool(section["keep_hyphenated"]),
    )


def cmd_ingest(cfg: RunConfig) -> int:
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    transcripts_path = _require_input(cfg["ingest.transcripts"], "ingest.transcripts")
    metadata_path = _require_input(cfg["ingest.metadata"], "ingest.metadata")
    manifest = StageManifest("ingest", cfg.seed, cfg.to_recorded())
    manifest.add_input(transcripts_path, out)
    manifest.add_input(metadata_path, out)

    transcripts = load_transcripts(
        transcripts_path, format=str(cfg["ingest.transcripts_format"])
    )
    metadata = load_speaker_metadata(metadata_path)
    log.info("loaded %d transcripts, %d speaker records", len(transcripts), len(metadata))
    joined = join_speaker_metadata(transcripts, metadata)
    deduped = dedup_one_per_speaker(joined, policy=str(cfg["ingest.dedup_policy"]))
    corpus = filter_known_gender(deduped)
    log.info(
        "corpus: %d unique speakers, %d with known gender %s",
        len(deduped),
        len(corpus),
        corpus.group_counts(),
    )

    corpus_path = out / _CORPUS_FILE
    save_corpus(corpus, corpus_path)
    manifest.add_output(corpus_path, out)
    summary_path = write_json_atomic(
        out / "ingest_summary.json",
        {
            "meta": _meta(cfg, "ingest"),
            "n_transcripts": len(transcripts),
            "n_speaker_records": len(metadata),
            "n_after_dedup": len(deduped),
            "n_final": len(corpus),
            "group_counts": corpus.group_counts(),
            "dedup_policy": cfg["ingest.dedup_policy"],
        },
    )
    manifest.add_output(summary_path, out)
    manifest.write(out)
    return 0


def _freq_header(groups: Sequence[str]) -> list[str]:
    return ["term", f"count_{groups[0]}", f"count_{groups[1]}"]


def cmd_features(cfg: RunConfig) -> int:
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    corpus_path = _require_artifact(out / _CORPUS_FILE, "ingest")
    manifest = StageManifest("features", cfg.seed, cfg.to_recorded())
    manifest.add_input(corpus_path, out)
    corpus = load_corpus(corpus_path)
    tok_cfg = _tokenizer_config(cfg)

    doc_counts = document_token_counts(corpus, tok_cfg)
    path = write_csv_atomic(
        out / "doc_word_counts.csv", ["doc_id", "label", "tokens"], doc_counts
    )
    manifest.add_output(path, out)

    stats = word_count_stats(corpus, tok_cfg)
    path = write_json_atomic(
        out / "word_stats.json",
        {"meta": _meta(cfg, "features"), "groups": stats},
    )
    manifest.add_output(path, out)

    orders = tuple(cfg["features.ngram_orders"])  # type: ignore[arg-type]
    groups: tuple[str, str] | None = None
    totals: dict[str, list[int]] = {}
    unigram_table: FrequencyTable | None = None
    for order in orders:
        table = ngram_frequencies(corpus, order, tok_cfg)
        groups = table.groups
        totals[str(order)] = list(table.group_totals)
        if order == 1:
            unigram_table = table
        rows = [
            (term, table.counts[term][0], table.counts[term][1])
            for term in table.vocabulary
        ]
        path = write_csv_atomic(out / f"freq_{order}.csv", _freq_header(table.groups), rows)
        manifest.add_output(path, out)
        log.info("order-%d table: %d terms, totals %s", order, len(rows), table.group_totals)
    assert groups is not None
    path = write_json_atomic(
        out / "freq_meta.json",
        {
            "meta": _meta(cfg, "features"),
            "groups": list(groups),
            "orders": [int(o) for o in orders],
            "totals": totals,
        },
    )
    manifest.add_output(path, out)

    correlation: dict[str, object]
    if unigram_table is None:
        correlation = {"error": "unigram order not requested"}
    else:
        try:
            _, x, y = frequency_pairs(unigram_table)
            correlation = canonical(pearson_correlation(x, y))  # type: ignore[assignment]
        except CorpusDiffError as exc:
            correlation = {"error": str(exc)}
    path = write_json_atomic(
        out / "correlation.json",
        {"meta": _meta(cfg, "features"), "unigram_frequency_correlation": correlation},
    )
    manifest.add_output(path, out)

    lexicon_setting = str(cfg["features.lexicon"])
    lexicon_path = Path(lexicon_setting) if lexicon_setting else _BUNDLED_LEXICON
    if not lexicon_path.exists():
        raise ConfigError(f"lexicon path does not exist: {lexicon_path}")
    manifest.add_input(lexicon_path, out)
    lexicon = load_lexicon(lexicon_path)
    liwc_matrix = lexicon_count_matrix(corpus, lexicon, tok_cfg)
    path = _write_matrix_csv(out / "matrix_liwc.csv", liwc_matrix)
    manifest.add_output(path, out)
    log.info(
        "lexicon matrix: %d docs x %d categories", *liwc_matrix.shape
    )

    pos_setting = str(cfg["features.pos_annotations"])
    pos_variables: list[str] = []
    if pos_setting:
        pos_path = _require_input(pos_setting, "features.pos_annotations")
        manifest.add_input(pos_path, out)
        pos_counts = ingest_pos_annotations(pos_path)
        extra = sorted(set(pos_counts) - set(corpus.doc_ids))
        if extra:
            log.warning(
                "%d annotated document(s) not in the corpus (e.g. %s); ignored",
                len(extra),
                extra[0],
            )
        pos_matrix = pos_count_matrix(corpus, pos_counts)
        path = _write_matrix_csv(out / "matrix_pos.csv", pos_matrix)
        manifest.add_output(path, out)
        pos_variables = list(pos_matrix.variables)
        log.info("part-of-speech matrix: %d docs x %d tags", *pos_matrix.shape)

    path = write_json_atomic(
        out / "features_meta.json",
        {
            "meta": _meta(cfg, "features"),
            "groups": list(groups),
            "tokenizer": canonical(tok_cfg),
            "lexicon": {
                "path": str(lexicon_path),
                "categories": {str(cid): name for cid, name in lexicon.categories.items()},
                "variables": list(liwc_matrix.variables),
                "examples": {
                    liwc_matrix.variables[i]: lexicon.example_patterns()[cid]
                    for i, cid in enumerate(lexicon.category_ids)
                },
            },
            "pos": {"available": bool(pos_setting), "variables": pos_variables},
        },
    )
    manifest.add_output(path, out)
    manifest.write(out)
    return 0


def _write_matrix_csv(path: Path, matrix: CountMatrix) -> Path:
    header = ["doc_id", "label"] + list(matrix.variables)
    rows = [
        [matrix.doc_ids[i], matrix.labels[i]] + [int(v) for v in matrix.rows[i]]
        for i in range(matrix.rows.shape[0])
    ]
    return write_csv_atomic(path, header, rows)


def _read_matrix_csv(path: Path) -> CountMatrix:
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or header[:2] != ["doc_id", "label"]:
            raise CorpusDiffError(f"{path}: expected header doc_id,label,<variables>")
        variables = header[2:]
        doc_ids, labels, rows = [], [], []
        for row in reader:
            doc_ids.append(row[0])
            labels.append(row[1])
            rows.append([int(cell) for cell in row[2:]])
    return CountMatrix(variables=variables, rows=rows, labels=labels, doc_ids=doc_ids)


def _read_freq_csv(path: Path, groups: tuple[str, str], order: int) -> FrequencyTable:
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != _freq_header(groups):
            raise CorpusDiffError(
                f"{path}: header {header} does not match groups {groups}"
            )
        counts = {row[0]: (int(row[1]), int(row[2])) for row in reader}
    return FrequencyTable(order=order, groups=groups, counts=counts)


def _read_json(path: Path) -> dict:
    with path.open(encoding="utf-8") as handle:
        return json.load(handle)


def cmd_logodds(cfg: RunConfig) -> int:
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    meta_path = _require_artifact(out / "freq_meta.json", "features")
    manifest = StageManifest("logodds", cfg.seed, cfg.to_recorded())
    manifest.add_input(meta_path, out)
    freq_meta = _read_json(meta_path)
    groups = tuple(freq_meta["groups"])
    alpha0 = float(cfg["logodds.alpha0"])  # type: ignore[arg-type]
    min_count = int(cfg["logodds.min_count"])  # type: ignore[arg-type]
    k = int(cfg["logodds.top_k"])  # type: ignore[arg-type]

    top_terms: dict[str, dict[str, list[dict[str, object]]]] = {}
    for order in freq_meta["orders"]:
        freq_path = _require_artifact(out / f"freq_{order}.csv", "features")
        manifest.add_input(freq_path, out)
        table = _read_freq_csv(freq_path, groups, int(order))
        result = weighted_log_odds(table, alpha0=alpha0, min_count=min_count)
        header = _freq_header(groups) + ["alpha_w", "delta", "variance", "z"]
        rows = [
            (e.term, e.count_a, e.count_b, e.alpha, e.delta, e.variance, e.z)
            for e in result.by_z(descending=True)
        ]
        path = write_csv_atomic(out / f"logodds_{order}.csv", header, rows)
        manifest.add_output(path, out)
        per_group: dict[str, list[dict[str, object]]] = {}
        for group in groups:
            terms = top_k_terms(result, k, group)
            per_group[group] = [
                {"term": t, "z": result.entry(t).z} for t in terms
            ]
        top_terms[str(order)] = per_group
        log.info("order-%d log odds: %d terms", order, len(result))

    path = write_json_atomic(
        out / "top_terms.json",
        {"meta": _meta(cfg, "logodds"), "k": k, "groups": list(groups), "orders": top_terms},
    )
    manifest.add_output(path, out)
    path = write_json_atomic(
        out / "logodds_meta.json",
        {
            "meta": _meta(cfg, "logodds"),
            "alpha0": alpha0,
            "min_count": min_count,
            "top_k": k,
            "groups": list(groups),
            "orders": [int(o) for o in freq_meta["orders"]],
        },
    )
    manifest.add_output(path, out)
    manifest.write(out)
    return 0


_DATASETS = ("liwc", "pos")


def _workflow_config(cfg: RunConfig, dataset: str) -> WorkflowConfig:
    section = cfg.section("manova")
    return WorkflowConfig(
        low_mean_threshold=float(section[f"{dataset}.low_mean_threshold"]),  # type: ignore[arg-type]
        skew_limit=float(section["normality.skew_limit"]),  # type: ignore[arg-type]
        kurt_limit=float(section["normality.kurt_limit"]),  # type: ignore[arg-type]
        collinearity_cutoff=float(section["collinearity_cutoff"]),  # type: ignore[arg-type]
        mahalanobis_quantile=float(section["mahalanobis_quantile"]),  # type: ignore[arg-type]
        family_alpha=float(section["family_alpha"]),  # type: ignore[arg-type]
        levene_center=str(section["levene_center"]),
        seed=cfg.seed,
    )


def _load_examples(out: Path, manifest: StageManifest | None = None) -> dict[str, str]:
    """Variable -> example-pattern text from the features stage, if present."""
    meta_path = out / "features_meta.json"
    if not meta_path.exists():
        return {}
    if manifest is not None:
        manifest.add_input(meta_path, out)
    raw = _read_json(meta_path).get("lexicon", {}).get("examples", {})
    return {var: "; ".join(patterns) for var, patterns in raw.items()}


def _variable_table_header(groups: Sequence[str], with_dataset: bool = False) -> list[str]:
    header = (["dataset"] if with_dataset else []) + ["variable", "example"]
    for label in groups:
        header += [f"n_{label}", f"mean_{label}", f"sd_{label}"]
    header += ["welch_f", "welch_df2", "welch_p", "adjusted_alpha", "significant"]
    return header


def cmd_manova(cfg: RunConfig) -> int:
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    manifest = StageManifest("manova", cfg.seed, cfg.to_recorded())
    examples = _load_examples(out, manifest)
    ran_any = False
    for dataset in _DATASETS:
        matrix_path = out / f"matrix_{dataset}.csv"
        if not matrix_path.exists():
            continue
        ran_any = True
        manifest.add_input(matrix_path, out)
        matrix = _read_matrix_csv(matrix_path)
        wf_cfg = _workflow_config(cfg, dataset)
        report = run_manova_workflow(matrix, wf_cfg, dataset=dataset)
        log.info(
            "%s: retained %d/%d variables; Pillai=%.4f F=%.3f (df=%d, %d); %d outliers",
            dataset,
            len(report.retained_variables),
            len(matrix.variables),
            report.manova_all.pillai,
            report.manova_all.f_approx,
            report.manova_all.df1,
            report.manova_all.df2,
            report.outliers.n_outliers,
        )
        path = write_json_atomic(
            out / f"workflow_{dataset}.json",
            {"meta": _meta(cfg, "manova"), "dataset": dataset, "report": canonical(report)},
        )
        manifest.add_output(path, out)
        path = _write_variable_table(
            out / f"variables_{dataset}.csv",
            report,
            examples if dataset == "liwc" else {},
        )
        manifest.add_output(path, out)
    if not ran_any:
        raise MissingArtifactError(
            "no count matrices found (matrix_liwc.csv / matrix_pos.csv); "
            "run the 'features' subcommand first"
        )
    manifest.write(out)
    return 0


def _variable_row(
    variable: str,
    groups: Sequence[str],
    group_stats: dict,
    posthoc: dict,
    adjusted_alpha: float,
    significant: bool,
    example: str,
) -> list[object]:
    """One appendix-style row; accepts dataclass or JSON-dict inputs."""

    def _get(obj, name):
        return obj[name] if isinstance(obj, dict) else getattr(obj, name)

    row: list[object] = [variable, example]
    for label in groups:
        stats = group_stats[label]
        sd = _get(stats, "sd")
        row += [_get(stats, "n"), _get(stats, "mean"), sd if sd is not None else ""]
    row += [
        _get(posthoc, "statistic"),
        _get(posthoc, "df2"),
        _get(posthoc, "p_value"),
        adjusted_alpha,
        significant,
    ]
    return row


def _write_variable_table(path: Path, report, examples: dict[str, str]) -> Path:
    groups = sorted(report.group_counts)
    rows = [
        _variable_row(
            variable,
            groups,
            report.group_stats[variable],
            report.posthoc[variable],
            report.posthoc_alpha,
            report.significant[variable],
            examples.get(variable, ""),
        )
        for variable in report.retained_variables
    ]
    return write_csv_atomic(path, _variable_table_header(groups), rows)


def cmd_classify(cfg: RunConfig) -> int:
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    corpus_path = _require_artifact(out / _CORPUS_FILE, "ingest")
    manifest = StageManifest("classify", cfg.seed, cfg.to_recorded())
    manifest.add_input(corpus_path, out)
    corpus = load_corpus(corpus_path)
    section = cfg.section("classify")
    section["seed"] = cfg.seed
    cv_cfg = CvConfig.from_mapping(section)
    report = cross_validate(corpus, cv_cfg, _tokenizer_config(cfg))
    log.info(
        "%d-fold probe: mean accuracy %.4f, mean macro-F1 %.4f",
        report.config.k,
        report.mean_accuracy,
        report.mean_macro_f1,
    )
    path = write_json_atomic(
        out / "cv_report.json",
        {"meta": _meta(cfg, "classify"), "report": canonical(report)},
    )
    manifest.add_output(path, out)
    manifest.write(out)
    return 0


def _read_doc_counts(path: Path) -> dict[str, list[float]]:
    values: dict[str, list[float]] = {}
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            values.setdefault(row["label"], []).append(float(row["tokens"]))
    return values


def _logodds_table_from_csv(
    path: Path, groups: tuple[str, str], order: int, alpha0: float
) -> LogOddsTable:
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        next(reader, None)
        entries = [
            LogOddsEntry(
                term=row[0],
                count_a=int(row[1]),
                count_b=int(row[2]),
                alpha=float(row[3]),
                delta=float(row[4]),
                variance=float(row[5]),
                z=float(row[6]),
            )
            for row in reader
        ]
    return LogOddsTable(order=order, groups=groups, alpha0=alpha0, entries=entries)


def cmd_report(cfg: RunConfig) -> int:
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    manifest = StageManifest("report", cfg.seed, cfg.to_recorded())
    plot_dir = out / "plot_data"
    payloads: dict[str, dict] = {}

    # Figure 1 source: per-group document lengths.
    counts_path = _require_artifact(out / "doc_word_counts.csv", "features")
    manifest.add_input(counts_path, out)
    payloads["word_count_boxplot"] = build_boxplot(_read_doc_counts(counts_path)).to_payload()

    # Figure 2 source: cross-group term frequency agreement.
    meta_path = _require_artifact(out / "freq_meta.json", "features")
    manifest.add_input(meta_path, out)
    freq_meta = _read_json(meta_path)
    groups = tuple(freq_meta["groups"])
    if 1 in freq_meta["orders"]:
        freq_path = _require_artifact(out / "freq_1.csv", "features")
        manifest.add_input(freq_path, out)
        table = _read_freq_csv(freq_path, groups, 1)
        payloads["frequency_scatter"] = build_scatter(table).to_payload()

    # Figures 3-4 source: weighted log odds per n-gram order.
    lo_meta_path = _require_artifact(out / "logodds_meta.json", "logodds")
    manifest.add_input(lo_meta_path, out)
    lo_meta = _read_json(lo_meta_path)
    for order in lo_meta["orders"]:
        lo_path = _require_artifact(out / f"logodds_{order}.csv", "logodds")
        manifest.add_input(lo_path, out)
        table = _logodds_table_from_csv(
            lo_path, groups, int(order), float(lo_meta["alpha0"])
        )
        payloads[f"top_terms_{order}"] = build_barchart(
            table, k=int(lo_meta["top_k"])
        ).to_payload()

    # Figures 5-6 and the delimited summary: screening workflows.
    summary_rows: list[list[object]] = []
    features_meta_path = _require_artifact(out / "features_meta.json", "features")
    manifest.add_input(features_meta_path, out)
    features_meta = _read_json(features_meta_path)
    examples = features_meta.get("lexicon", {}).get("examples", {})
    found_workflow = False
    for dataset in _DATASETS:
        wf_path = out / f"workflow_{dataset}.json"
        if not wf_path.exists():
            continue
        found_workflow = True
        manifest.add_input(wf_path, out)
        wf = _read_json(wf_path)["report"]
        histograms = [
            HistogramData(
                variable=h["variable"],
                bin_edges=h["bin_edges"],
                counts_by_group=h["counts_by_group"],
            )
            for h in wf["histograms"]
        ]
        payloads[f"histograms_{dataset}"] = build_histogram_plot(
            histograms, dataset
        ).to_payload()
        summary_rows.extend(_summary_rows(dataset, wf, examples))
    if not found_workflow:
        raise MissingArtifactError(
            "no workflow artifacts found (workflow_liwc.json / workflow_pos.json); "
            "run the 'manova' subcommand first"
        )

    for name, payload in payloads.items():
        path = write_json_atomic(plot_dir / f"{name}.json", payload)
        manifest.add_output(path, out)

    path = write_csv_atomic(
        out / "report_summary.csv",
        _variable_table_header(sorted(groups), with_dataset=True),
        summary_rows,
    )
    manifest.add_output(path, out)

    if bool(cfg["report.render_figures"]):
        from .figures import render_figure

        dpi = int(cfg["report.figure_dpi"])  # type: ignore[arg-type]
        for name, payload in payloads.items():
            fig_path = render_figure(payload, out / "figures" / f"{name}.png", dpi=dpi)
            manifest.add_output(fig_path, out)
        log.info("rendered %d figures", len(payloads))

    manifest.write(out)
    return 0


def _summary_rows(dataset: str, wf: dict, examples: dict) -> list[list[object]]:
    rows: list[list[object]] = []
    for variable in wf["screening"]["retained"]:
        groups = sorted(wf["group_stats"][variable])
        example = "; ".join(examples.get(variable, [])) if dataset == "liwc" else ""
        rows.append(
            [dataset]
            + _variable_row(
                variable,
                groups,
                wf["group_stats"][variable],
                wf["posthoc"][variable],
                wf["posthoc_alpha"],
                wf["significant"][variable],
                example,
            )
        )
    return rows


_COMMANDS = {
    "ingest": cmd_ingest,
    "features": cmd_features,
    "logodds": cmd_logodds,
    "manova": cmd_manova,
    "classify": cmd_classify,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corpusdiff",
        description="Two-group corpus comparison pipeline",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="subcommand", metavar="subcommand")
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name, help=f"run the {name} stage")
        sp.add_argument("--config", help="key = value configuration file")
        sp.add_argument("--seed", type=int, help="override the run seed")
        sp.add_argument("--out-dir", dest="out_dir", help="artifact directory")
    return parser


def _collect_overrides(extra: list[str]) -> dict[str, str]:
    overrides: dict[str, str] = {}
    i = 0
    while i < len(extra):
        token = extra[i]
        if not token.startswith("--"):
            raise ConfigError(f"unexpected argument {token!r}; overrides are --key value")
        key = token[2:]
        if "=" in key:
            key, _, value = key.partition("=")
        else:
            if i + 1 >= len(extra):
                raise ConfigError(f"missing value for override --{key}")
            i += 1
            value = extra[i]
        if key not in REGISTRY:
            raise ConfigError(f"unknown config key {key!r}")
        overrides[key] = value
        i += 1
    return overrides


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(
        level=logging.INFO, format="%(levelname)s %(message)s", stream=sys.stderr
    )
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    if args.subcommand is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        overrides = _collect_overrides(extra)
        cfg = resolve_config(
            config_file=args.config,
            overrides=overrides,
            seed=args.seed,
            out_dir=args.out_dir,
        )
        return _COMMANDS[args.subcommand](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CorpusDiffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
