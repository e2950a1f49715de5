"""End-to-end command-line pipeline behavior on the bundled demo dataset."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import pytest

from conftest import write_demo_config
from corpusdiff.artifacts import sha256_file
from corpusdiff.cli import SUBCOMMANDS, main
from corpusdiff.plots import PLOT_KINDS

_STAGES = ("ingest", "features", "logodds", "manova", "classify", "report")

_EXPECTED_FILES = {
    # ingest
    "corpus.jsonl",
    "ingest_summary.json",
    "manifest_ingest.json",
    # features
    "doc_word_counts.csv",
    "word_stats.json",
    "freq_1.csv",
    "freq_2.csv",
    "freq_meta.json",
    "correlation.json",
    "matrix_liwc.csv",
    "matrix_pos.csv",
    "features_meta.json",
    "manifest_features.json",
    # logodds
    "logodds_1.csv",
    "logodds_2.csv",
    "top_terms.json",
    "logodds_meta.json",
    "manifest_logodds.json",
    # manova
    "workflow_liwc.json",
    "workflow_pos.json",
    "variables_liwc.csv",
    "variables_pos.csv",
    "manifest_manova.json",
    # classify
    "cv_report.json",
    "manifest_classify.json",
    # report
    "plot_data/frequency_scatter.json",
    "plot_data/histograms_liwc.json",
    "plot_data/histograms_pos.json",
    "plot_data/top_terms_1.json",
    "plot_data/top_terms_2.json",
    "plot_data/word_count_boxplot.json",
    "report_summary.csv",
    "figures/frequency_scatter.png",
    "figures/histograms_liwc.png",
    "figures/histograms_pos.png",
    "figures/top_terms_1.png",
    "figures/top_terms_2.png",
    "figures/word_count_boxplot.png",
    "manifest_report.json",
}


@pytest.fixture(scope="module")
def pipeline_out(demo_dataset, tmp_path_factory):
    root = tmp_path_factory.mktemp("cli_run")
    conf = write_demo_config(root / "run.conf", demo_dataset)
    out = root / "out"
    for stage in _STAGES:
        rc = main([stage, "--config", str(conf), "--out-dir", str(out)])
        assert rc == 0, f"stage {stage} exited {rc}"
    return out


def _read_json(path: Path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


def _read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    with path.open(newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    return rows[0], rows[1:]


def test_subcommand_order_is_published():
    assert SUBCOMMANDS == _STAGES


def test_pipeline_produces_the_full_artifact_inventory(pipeline_out):
    found = {
        p.relative_to(pipeline_out).as_posix()
        for p in pipeline_out.rglob("*")
        if p.is_file()
    }
    assert found == _EXPECTED_FILES
    assert len(found) == 39


def test_ingest_summary_counts(pipeline_out):
    summary = _read_json(pipeline_out / "ingest_summary.json")
    assert summary["n_transcripts"] == 64
    assert summary["n_speaker_records"] == 59
    assert summary["n_after_dedup"] == 58
    assert summary["n_final"] == 54
    assert summary["group_counts"] == {"Female": 26, "Male": 28}
    assert summary["dedup_policy"] == "first"
    assert summary["meta"]["subcommand"] == "ingest"


def test_doc_word_counts_match_the_expected_tokenization(pipeline_out, demo_dataset):
    header, rows = _read_csv(pipeline_out / "doc_word_counts.csv")
    assert header == ["doc_id", "label", "tokens"]
    counts = {row[0]: int(row[2]) for row in rows}
    labels = {row[0]: row[1] for row in rows}
    assert counts == demo_dataset["token_counts"]
    assert labels == demo_dataset["labels"]


def test_frequency_tables_are_internally_consistent(pipeline_out):
    meta = _read_json(pipeline_out / "freq_meta.json")
    assert meta["groups"] == ["Female", "Male"]
    assert meta["orders"] == [1, 2]
    assert meta["totals"] == {"1": [8130, 9018], "2": [8104, 8990]}

    header, rows = _read_csv(pipeline_out / "freq_1.csv")
    assert header == ["term", "count_Female", "count_Male"]
    terms = [row[0] for row in rows]
    assert terms == sorted(terms)
    assert all(int(r[1]) + int(r[2]) > 0 for r in rows)
    # Order-1 totals are total tokens, so they equal the per-group sums
    # of the per-document counts.
    assert [sum(int(r[1]) for r in rows), sum(int(r[2]) for r in rows)] == [8130, 9018]
    _, doc_rows = _read_csv(pipeline_out / "doc_word_counts.csv")
    by_label = {"Female": 0, "Male": 0}
    for row in doc_rows:
        by_label[row[1]] += int(row[2])
    assert by_label == {"Female": 8130, "Male": 9018}


def test_unigram_correlation_artifact(pipeline_out):
    corr = _read_json(pipeline_out / "correlation.json")["unigram_frequency_correlation"]
    assert corr["method"] == "pearson"
    assert corr["n"] == 80
    assert corr["df"] == 78
    assert -1.0 <= corr["ci_low"] <= corr["r"] <= corr["ci_high"] <= 1.0


def test_logodds_table_columns_and_ordering(pipeline_out):
    header, rows = _read_csv(pipeline_out / "logodds_1.csv")
    assert header == [
        "term",
        "count_Female",
        "count_Male",
        "alpha_w",
        "delta",
        "variance",
        "z",
    ]
    zs = [float(r[6]) for r in rows]
    assert zs == sorted(zs, reverse=True)
    assert len(rows) == 80
    for row in rows[:3]:
        assert float(row[5]) > 0.0  # variance


def test_top_terms_artifact(pipeline_out):
    top = _read_json(pipeline_out / "top_terms.json")
    assert top["k"] == 10
    assert top["groups"] == ["Female", "Male"]
    assert set(top["orders"]) == {"1", "2"}
    _, rows = _read_csv(pipeline_out / "logodds_1.csv")
    vocabulary = {row[0] for row in rows}
    for group in ("Female", "Male"):
        entries = top["orders"]["1"][group]
        assert 1 <= len(entries) <= 10
        assert all(e["term"] in vocabulary for e in entries)
    # The first group's list leads with its most characteristic term
    # (largest z), the second group's with the most negative.
    assert top["orders"]["1"]["Female"][0]["z"] > 0
    assert top["orders"]["1"]["Male"][0]["z"] < 0


def test_screening_outcomes_for_the_demo_corpus(pipeline_out):
    # Frozen regression values for the seeded demo dataset.
    liwc = _read_json(pipeline_out / "workflow_liwc.json")["report"]
    assert liwc["screening"]["retained"] == [
        "pronoun",
        "first_person",
        "social",
        "family",
        "positive_emotion",
        "cognition",
        "number_words",
    ]
    assert sorted(v for v, sig in liwc["significant"].items() if sig) == [
        "cognition",
        "family",
        "number_words",
        "positive_emotion",
        "social",
    ]
    assert liwc["posthoc_alpha"] == pytest.approx(0.05 / 7, rel=1e-5)

    pos = _read_json(pipeline_out / "workflow_pos.json")["report"]
    assert pos["screening"]["retained"] == [
        "ADJ",
        "ADP",
        "ADV",
        "CCONJ",
        "DET",
        "NOUN",
        "NUM",
        "PRON",
        "VERB",
    ]
    assert sorted(v for v, sig in pos["significant"].items() if sig) == ["ADJ", "NOUN", "NUM"]
    assert pos["posthoc_alpha"] == pytest.approx(0.05 / 9, rel=1e-5)


def test_variable_table_layout(pipeline_out):
    header, rows = _read_csv(pipeline_out / "variables_liwc.csv")
    assert header == [
        "variable",
        "example",
        "n_Female",
        "mean_Female",
        "sd_Female",
        "n_Male",
        "mean_Male",
        "sd_Male",
        "welch_f",
        "welch_df2",
        "welch_p",
        "adjusted_alpha",
        "significant",
    ]
    assert [row[0] for row in rows] == [
        "pronoun",
        "first_person",
        "social",
        "family",
        "positive_emotion",
        "cognition",
        "number_words",
    ]
    for row in rows:
        assert row[1] != ""  # lexicon rows carry example patterns
        assert row[2] == "26" and row[5] == "28"
        assert row[12] in ("true", "false")
        assert float(row[8]) >= 0.0
        assert 0.0 <= float(row[10]) <= 1.0


def test_report_summary_combines_both_datasets(pipeline_out):
    header, rows = _read_csv(pipeline_out / "report_summary.csv")
    assert header[0] == "dataset"
    liwc_rows = [row[1:] for row in rows if row[0] == "liwc"]
    pos_rows = [row[1:] for row in rows if row[0] == "pos"]
    assert len(liwc_rows) == 7 and len(pos_rows) == 9
    assert len(rows) == len(liwc_rows) + len(pos_rows)
    # The per-dataset tables round-trip unchanged through the combined
    # summary, including the formatted numbers.
    _, expected_liwc = _read_csv(pipeline_out / "variables_liwc.csv")
    _, expected_pos = _read_csv(pipeline_out / "variables_pos.csv")
    assert liwc_rows == expected_liwc
    assert pos_rows == expected_pos


def test_cv_report_artifact(pipeline_out):
    report = _read_json(pipeline_out / "cv_report.json")["report"]
    assert report["classes"] == ["Female", "Male"]
    assert [f["eval_size"] for f in report["folds"]] == [11, 11, 11, 11, 10]
    for fold in report["folds"]:
        assert sum(sum(row) for row in fold["confusion"]) == fold["eval_size"]
        assert fold["train_size_upsampled"] >= fold["train_size"]
    accuracies = [f["accuracy"] for f in report["folds"]]
    assert report["mean_accuracy"] == pytest.approx(sum(accuracies) / 5, abs=1e-6)
    assert report["mean_accuracy"] >= 0.85  # groups are separable by design


def test_plot_payloads_and_figures(pipeline_out):
    names = [
        "word_count_boxplot",
        "frequency_scatter",
        "top_terms_1",
        "top_terms_2",
        "histograms_liwc",
        "histograms_pos",
    ]
    for name in names:
        payload = _read_json(pipeline_out / "plot_data" / f"{name}.json")
        assert payload["kind"] in PLOT_KINDS
        assert payload["series"]
        png = (pipeline_out / "figures" / f"{name}.png").read_bytes()
        assert png[:8] == b"\x89PNG\r\n\x1a\n"
        assert len(png) > 1000


def test_manifests_hash_every_input_and_output(pipeline_out):
    manifests = sorted(pipeline_out.glob("manifest_*.json"))
    assert [m.name.removeprefix("manifest_").removesuffix(".json") for m in manifests] == sorted(
        _STAGES
    )
    for manifest_path in manifests:
        manifest = _read_json(manifest_path)
        assert "out_dir" not in manifest["config"]
        for rel, digest in manifest["outputs"].items():
            assert not Path(rel).is_absolute()
            assert sha256_file(pipeline_out / rel) == digest
        for key, digest in manifest["inputs"].items():
            path = Path(key) if Path(key).is_absolute() else pipeline_out / key
            assert path.exists(), key
            assert sha256_file(path) == digest
        # Artifacts produced by earlier stages are referenced relatively,
        # so re-running elsewhere yields the same manifest bytes.
        if manifest_path.name == "manifest_logodds.json":
            assert "freq_meta.json" in manifest["inputs"]
            assert "freq_1.csv" in manifest["inputs"]


# ---------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------


def test_no_subcommand_is_a_usage_error(capsys):
    assert main([]) == 2
    assert "usage" in capsys.readouterr().err.lower()


def test_version_flag_prints_and_exits():
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0


def test_unknown_subcommand_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["transmogrify"])
    assert exc.value.code == 2


def test_missing_required_input_exits_2(tmp_path, capsys):
    assert main(["ingest", "--out-dir", str(tmp_path / "out")]) == 2
    assert "ingest.transcripts" in capsys.readouterr().err


def test_nonexistent_input_path_exits_2(tmp_path, capsys, demo_dataset):
    rc = main(
        [
            "ingest",
            "--out-dir",
            str(tmp_path / "out"),
            "--ingest.transcripts",
            str(tmp_path / "nope.csv"),
            "--ingest.metadata",
            str(demo_dataset["speakers"]),
        ]
    )
    assert rc == 2
    assert "does not exist" in capsys.readouterr().err


def test_unknown_override_key_exits_2(tmp_path, capsys):
    assert main(["features", "--out-dir", str(tmp_path), "--no.such.key", "1"]) == 2
    assert "no.such.key" in capsys.readouterr().err


def test_malformed_override_exits_2(tmp_path, capsys):
    assert main(["features", "--out-dir", str(tmp_path), "stray"]) == 2
    assert "overrides are --key value" in capsys.readouterr().err
    assert main(["features", "--out-dir", str(tmp_path), "--classify.k"]) == 2
    assert "missing value" in capsys.readouterr().err


def test_invalid_choice_exits_2(tmp_path, capsys, demo_dataset):
    rc = main(
        [
            "ingest",
            "--out-dir",
            str(tmp_path / "out"),
            "--ingest.transcripts",
            str(demo_dataset["transcripts"]),
            "--ingest.metadata",
            str(demo_dataset["speakers"]),
            "--ingest.dedup_policy",
            "newest",
        ]
    )
    assert rc == 2
    assert "first, longest, earliest_published" in capsys.readouterr().err


@pytest.mark.parametrize(
    "stage,needed",
    [
        ("features", "ingest"),
        ("logodds", "features"),
        ("manova", "features"),
        ("classify", "ingest"),
        ("report", "features"),
    ],
)
def test_stages_without_their_inputs_exit_1(tmp_path, capsys, stage, needed):
    rc = main([stage, "--out-dir", str(tmp_path / "empty")])
    assert rc == 1
    assert needed in capsys.readouterr().err
