"""corpusdiff: contrast word use between two groups of transcripts.

Library layers: corpus ingestion (:mod:`corpusdiff.corpus`), tokenization
and feature extraction (:mod:`corpusdiff.tokenizer`,
:mod:`corpusdiff.features`, :mod:`corpusdiff.lexicon`), weighted log odds
(:mod:`corpusdiff.logodds`), the statistical kernel
(:mod:`corpusdiff.stats`, :mod:`corpusdiff.special`), the screening
pipeline (:mod:`corpusdiff.workflow`), a classifier probe
(:mod:`corpusdiff.classify`), and plot-data/figure emission
(:mod:`corpusdiff.plots`, :mod:`corpusdiff.figures`).  The ``corpusdiff``
command in :mod:`corpusdiff.cli` chains them into a pipeline.
"""

__version__ = "0.1.0"

from .corpus import (
    AnnotatedCorpus,
    AnnotatedDoc,
    Gender,
    SpeakerRecord,
    Transcript,
    dedup_one_per_speaker,
    filter_known_gender,
    join_speaker_metadata,
    load_transcripts,
)
from .features import (
    POS_TAGS,
    CountMatrix,
    FrequencyTable,
    build_count_matrix,
    ingest_pos_annotations,
    ngram_frequencies,
    word_count_stats,
)
from .lexicon import Lexicon, categorize_counts, load_lexicon
from .logodds import LogOddsTable, top_k_terms, weighted_log_odds
from .stats import (
    ManovaResult,
    TestResult,
    bonferroni_adjust,
    box_m_test,
    descriptive_stats,
    levene_test,
    mahalanobis_outliers,
    manova_pillai,
    pearson_correlation,
    welch_anova,
)
from .tokenizer import TokenizerConfig, tokenize
from .workflow import (
    WorkflowConfig,
    WorkflowReport,
    filter_low_mean,
    multicollinearity_filter,
    normality_screen,
    run_manova_workflow,
)
from .classify import CvConfig, cross_validate, stratified_kfold_split, upsample_minority

__all__ = [
    "__version__",
    "AnnotatedCorpus",
    "AnnotatedDoc",
    "Gender",
    "SpeakerRecord",
    "Transcript",
    "dedup_one_per_speaker",
    "filter_known_gender",
    "join_speaker_metadata",
    "load_transcripts",
    "POS_TAGS",
    "CountMatrix",
    "FrequencyTable",
    "build_count_matrix",
    "ingest_pos_annotations",
    "ngram_frequencies",
    "word_count_stats",
    "Lexicon",
    "categorize_counts",
    "load_lexicon",
    "LogOddsTable",
    "top_k_terms",
    "weighted_log_odds",
    "ManovaResult",
    "TestResult",
    "bonferroni_adjust",
    "box_m_test",
    "descriptive_stats",
    "levene_test",
    "mahalanobis_outliers",
    "manova_pillai",
    "pearson_correlation",
    "welch_anova",
    "TokenizerConfig",
    "tokenize",
    "WorkflowConfig",
    "WorkflowReport",
    "filter_low_mean",
    "multicollinearity_filter",
    "normality_screen",
    "run_manova_workflow",
    "CvConfig",
    "cross_validate",
    "stratified_kfold_split",
    "upsample_minority",
]
