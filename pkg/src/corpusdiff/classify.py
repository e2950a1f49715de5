"""Classifier probe: how well does lexical form alone separate the groups?

Provides seed-deterministic stratified k-fold splitting, minority-class
upsampling for training folds only, an L2-regularized logistic regression
over length-normalized token counts trained by full-batch gradient descent,
and accuracy / macro-F1 evaluation.  The point is a reproducible reference
number, not a competitive classifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import AnnotatedCorpus
from .errors import ConfigError, DegenerateDataError, InsufficientDataError
from .tokenizer import DEFAULT_TOKENIZER, TokenizerConfig, tokenize

__all__ = [
    "CvConfig",
    "LabeledDoc",
    "FoldPlan",
    "EvalMetrics",
    "FoldMetrics",
    "CvReport",
    "LogisticTextClassifier",
    "logistic_loss_and_grad",
    "stratified_kfold_split",
    "upsample_minority",
    "evaluate_predictions",
    "evaluate",
    "cross_validate",
]

_CONFIG_KEYS = {
    "k": ("k", int),
    "seed": ("seed", int),
    "min_token_count": ("min_token_count", int),
    "l2_lambda": ("l2_lambda", float),
    "max_iters": ("max_iters", int),
    "tolerance": ("tolerance", float),
}


@dataclass(frozen=True)
class CvConfig:
    """Cross-validation and training hyperparameters."""

    k: int = 5
    seed: int = 0
    min_token_count: int = 2
    l2_lambda: float = 1e-3
    max_iters: int = 2000
    tolerance: float = 1e-6

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ConfigError(f"k must be >= 2, got {self.k}")
        if self.min_token_count < 1:
            raise ConfigError(f"min_token_count must be >= 1, got {self.min_token_count}")
        if self.l2_lambda < 0:
            raise ConfigError(f"l2_lambda must be >= 0, got {self.l2_lambda}")
        if self.max_iters < 1:
            raise ConfigError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tolerance <= 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, object]) -> "CvConfig":
        kwargs = {}
        for key, value in mapping.items():
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"unknown classifier config key {key!r}")
            attr, cast = _CONFIG_KEYS[key]
            try:
                kwargs[attr] = cast(value)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key!r}: {value!r}") from exc
        return cls(**kwargs)


@dataclass(frozen=True)
class LabeledDoc:
    """A tokenized document with its identity and group label."""

    doc_id: str
    tokens: tuple[str, ...]
    label: str


@dataclass(eq=False)
class FoldPlan:
    """Fold index per document for one stratified k-fold split."""

    k: int
    seed: int
    doc_ids: list[str]
    labels: list[str]
    assignments: list[int]

    def fold_sizes(self) -> list[int]:
        sizes = [0] * self.k
        for fold in self.assignments:
            sizes[fold] += 1
        return sizes

    def class_fold_sizes(self, label: str) -> list[int]:
        sizes = [0] * self.k
        for fold, lab in zip(self.assignments, self.labels):
            if lab == label:
                sizes[fold] += 1
        return sizes

    def eval_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignments) if f == fold]

    def train_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignments) if f != fold]


def _ids_and_labels(source: object) -> tuple[list[str], list[str]]:
    if isinstance(source, AnnotatedCorpus):
        return list(source.doc_ids), list(source.labels)
    doc_ids = []
    labels = []
    for item in source:  # sequence of (doc_id, label) pairs or LabeledDocs
        if isinstance(item, LabeledDoc):
            doc_ids.append(item.doc_id)
            labels.append(item.label)
        else:
            doc_id, label = item
            doc_ids.append(str(doc_id))
            labels.append(str(label))
    return doc_ids, labels


def stratified_kfold_split(source: object, k: int, seed: int = 0) -> FoldPlan:
    """Assign each document to one of k folds, stratified by label.

    Documents of each class are shuffled with the seeded generator and
    dealt round-robin; the dealing position carries over from class to
    class (in sorted label order), so total fold sizes differ by at most
    one and each class's per-fold counts differ by at most one.  A class
    with fewer than k members is an error.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    doc_ids, labels = _ids_and_labels(source)
    n = len(doc_ids)
    if n < k:
        raise InsufficientDataError(f"cannot split {n} documents into {k} folds")
    rng = np.random.default_rng(seed)
    assignments = [-1] * n
    cursor = 0
    for cls in sorted(set(labels)):
        indices = [i for i, lab in enumerate(labels) if lab == cls]
        if len(indices) < k:
            raise InsufficientDataError(
                f"class {cls!r} has {len(indices)} documents; need at least k={k}"
            )
        order = rng.permutation(len(indices))
        for j, pos in enumerate(order):
            assignments[indices[pos]] = (cursor + j) % k
        cursor = (cursor + len(indices)) % k
    return FoldPlan(k=k, seed=seed, doc_ids=doc_ids, labels=labels, assignments=assignments)


def upsample_minority(items: Sequence[LabeledDoc], seed: int = 0) -> list[LabeledDoc]:
    """Balance a two-class training set by resampling the minority class.

    Keeps every original document and appends seeded draws (with
    replacement) from the minority class until the classes are equal;
    already-balanced input is returned unchanged.
    """
    labels = sorted({item.label for item in items})
    if len(labels) != 2:
        raise DegenerateDataError(
            f"upsampling needs exactly two classes, found {len(labels)}: {labels}"
        )
    by_class = {lab: [i for i, item in enumerate(items) if item.label == lab] for lab in labels}
    counts = {lab: len(idx) for lab, idx in by_class.items()}
    if counts[labels[0]] == counts[labels[1]]:
        return list(items)
    minority = min(labels, key=lambda lab: (counts[lab], lab))
    deficit = max(counts.values()) - counts[minority]
    rng = np.random.default_rng(seed)
    chosen = rng.choice(np.asarray(by_class[minority]), size=deficit, replace=True)
    return list(items) + [items[int(i)] for i in chosen]


def _stable_sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logistic_loss_and_grad(
    x: np.ndarray, y: np.ndarray, w: np.ndarray, b: float, l2_lambda: float
) -> tuple[float, np.ndarray, float]:
    """Mean cross-entropy with an L2 penalty on the weights (not the bias),
    and its exact gradient."""
    z = x @ w + b
    margins = z * (2.0 * y - 1.0)
    loss = float(np.mean(np.logaddexp(0.0, -margins))) + 0.5 * l2_lambda * float(w @ w)
    residual = _stable_sigmoid(z) - y
    grad_w = x.T @ residual / x.shape[0] + l2_lambda * w
    grad_b = float(residual.mean())
    return loss, grad_w, grad_b


class LogisticTextClassifier:
    """Binary logistic regression over length-normalized token counts.

    Features are per-document token frequencies (count divided by document
    length) over a vocabulary of training tokens seen at least
    ``min_token_count`` times.  Training is deterministic full-batch
    gradient descent with backtracking line search, stopping when the
    gradient norm falls below ``tolerance``.
    """

    def __init__(self, config: CvConfig | None = None) -> None:
        self.config = config if config is not None else CvConfig()
        self.classes_: tuple[str, str] | None = None
        self.vocabulary_: list[str] = []
        self.weights_: np.ndarray | None = None
        self.bias_: float = 0.0
        self.n_iters_: int = 0
        self.converged_: bool = False
        self.grad_norm_: float = math.nan

    def _vectorize(self, docs: Sequence[Sequence[str]]) -> np.ndarray:
        index = {tok: i for i, tok in enumerate(self.vocabulary_)}
        x = np.zeros((len(docs), len(self.vocabulary_)))
        for row, doc in enumerate(docs):
            if not doc:
                continue
            scale = 1.0 / len(doc)
            for token in doc:
                col = index.get(token)
                if col is not None:
                    x[row, col] += scale
        return x

    def fit(
        self, docs: Sequence[Sequence[str]], labels: Sequence[str]
    ) -> "LogisticTextClassifier":
        if len(docs) != len(labels):
            raise ValueError(f"{len(docs)} documents but {len(labels)} labels")
        if not docs:
            raise InsufficientDataError("cannot train on an empty document set")
        classes = sorted(set(labels))
        if len(classes) != 2:
            raise DegenerateDataError(
                f"need exactly two classes, found {len(classes)}: {classes}"
            )
        self.classes_ = (classes[0], classes[1])
        token_counts: dict[str, int] = {}
        for doc in docs:
            for token in doc:
                token_counts[token] = token_counts.get(token, 0) + 1
        self.vocabulary_ = sorted(
            tok
            for tok, count in token_counts.items()
            if count >= self.config.min_token_count
        )
        if not self.vocabulary_:
            raise DegenerateDataError(
                "vocabulary is empty after applying min_token_count="
                f"{self.config.min_token_count}"
            )
        x = self._vectorize(docs)
        y = np.array([1.0 if lab == self.classes_[1] else 0.0 for lab in labels])

        cfg = self.config
        w = np.zeros(len(self.vocabulary_))
        b = 0.0
        step = 1.0
        loss, grad_w, grad_b = logistic_loss_and_grad(x, y, w, b, cfg.l2_lambda)
        grad_norm = math.sqrt(float(grad_w @ grad_w) + grad_b * grad_b)
        iters = 0
        while iters < cfg.max_iters and grad_norm >= cfg.tolerance:
            sq_norm = grad_norm * grad_norm
            # Backtracking line search with a sufficient-decrease condition.
            while True:
                w_new = w - step * grad_w
                b_new = b - step * grad_b
                loss_new, grad_w_new, grad_b_new = logistic_loss_and_grad(
                    x, y, w_new, b_new, cfg.l2_lambda
                )
                if loss_new <= loss - 0.5 * step * sq_norm or step < 1e-12:
                    break
                step *= 0.5
            w, b = w_new, b_new
            loss, grad_w, grad_b = loss_new, grad_w_new, grad_b_new
            grad_norm = math.sqrt(float(grad_w @ grad_w) + grad_b * grad_b)
            step = min(step * 2.0, 1e6)
            iters += 1
        self.weights_ = w
        self.bias_ = b
        self.n_iters_ = iters
        self.grad_norm_ = grad_norm
        self.converged_ = grad_norm < cfg.tolerance
        return self

    def decision_function(self, docs: Sequence[Sequence[str]]) -> np.ndarray:
        if self.weights_ is None or self.classes_ is None:
            raise RuntimeError("classifier has not been fitted")
        return self._vectorize(docs) @ self.weights_ + self.bias_

    def predict(self, docs: Sequence[Sequence[str]]) -> list[str]:
        scores = self.decision_function(docs)
        assert self.classes_ is not None
        return [self.classes_[1] if s > 0 else self.classes_[0] for s in scores]


@dataclass(eq=False)
class EvalMetrics:
    """Accuracy, macro-averaged F1 and the confusion matrix (rows = true)."""

    accuracy: float
    macro_f1: float
    confusion: np.ndarray
    classes: tuple[str, ...]


def evaluate_predictions(
    truth: Sequence[str],
    predicted: Sequence[str],
    classes: Sequence[str] | None = None,
) -> EvalMetrics:
    """Score predictions against ground truth.

    Per-class precision/recall/F1 use the 0-when-undefined convention;
    the macro average runs over classes that appear in the truth labels.
    """
    if len(truth) != len(predicted):
        raise ValueError(f"{len(truth)} truth labels but {len(predicted)} predictions")
    if not truth:
        raise InsufficientDataError("cannot evaluate an empty label set")
    class_list = sorted(set(truth) | set(predicted)) if classes is None else list(classes)
    index = {lab: i for i, lab in enumerate(class_list)}
    confusion = np.zeros((len(class_list), len(class_list)), dtype=np.int64)
    for t, p in zip(truth, predicted):
        confusion[index[t], index[p]] += 1
    accuracy = float(np.trace(confusion)) / len(truth)
    f1_values = []
    for i, lab in enumerate(class_list):
        support = int(confusion[i].sum())
        if support == 0:
            continue  # absent from truth: excluded from the macro average
        tp = float(confusion[i, i])
        predicted_count = float(confusion[:, i].sum())
        precision = tp / predicted_count if predicted_count > 0 else 0.0
        recall = tp / support
        denom = precision + recall
        f1_values.append(2.0 * precision * recall / denom if denom > 0 else 0.0)
    macro_f1 = float(np.mean(f1_values))
    return EvalMetrics(
        accuracy=accuracy,
        macro_f1=macro_f1,
        confusion=confusion,
        classes=tuple(class_list),
    )


def evaluate(
    model: LogisticTextClassifier,
    docs: Sequence[Sequence[str]],
    labels: Sequence[str],
) -> EvalMetrics:
    """Predict ``docs`` with ``model`` and score against ``labels``."""
    if model.classes_ is None:
        raise RuntimeError("classifier has not been fitted")
    return evaluate_predictions(labels, model.predict(docs), classes=model.classes_)


@dataclass(eq=False)
class FoldMetrics:
    fold: int
    train_size: int
    train_size_upsampled: int
    eval_size: int
    accuracy: float
    macro_f1: float
    confusion: np.ndarray


@dataclass(eq=False)
class CvReport:
    """Per-fold and averaged probe metrics for one cross-validation run."""

    config: CvConfig
    classes: tuple[str, str]
    plan: FoldPlan
    folds: list[FoldMetrics]
    mean_accuracy: float
    mean_macro_f1: float


def cross_validate(
    corpus: AnnotatedCorpus,
    config: CvConfig | None = None,
    tokenizer_config: TokenizerConfig = DEFAULT_TOKENIZER,
) -> CvReport:
    """Stratified k-fold probe over an annotated two-group corpus.

    Each fold trains on the other k-1 folds with the minority class
    upsampled (fold f uses derived seed ``seed + f``); evaluation folds
    are never upsampled, and no evaluation document can enter its own
    training set because folds partition documents by id.
    """
    cfg = config if config is not None else CvConfig()
    docs = [
        LabeledDoc(
            doc_id=doc.transcript.talk_id,
            tokens=tuple(tokenize(doc.transcript.text, tokenizer_config)),
            label=doc.speaker.gender.value,
        )
        for doc in corpus
    ]
    classes = sorted({d.label for d in docs})
    if len(classes) != 2:
        raise DegenerateDataError(
            f"cross-validation needs exactly two classes, found {len(classes)}: {classes}"
        )
    plan = stratified_kfold_split(docs, cfg.k, cfg.seed)
    folds: list[FoldMetrics] = []
    for fold in range(cfg.k):
        train_items = [docs[i] for i in plan.train_indices(fold)]
        eval_items = [docs[i] for i in plan.eval_indices(fold)]
        upsampled = upsample_minority(train_items, seed=cfg.seed + fold)
        eval_ids = {d.doc_id for d in eval_items}
        train_ids = {d.doc_id for d in upsampled}
        if eval_ids & train_ids:
            raise RuntimeError(
                f"fold {fold}: evaluation documents leaked into training: "
                f"{sorted(eval_ids & train_ids)[:5]}"
            )
        model = LogisticTextClassifier(cfg).fit(
            [d.tokens for d in upsampled], [d.label for d in upsampled]
        )
        metrics = evaluate(model, [d.tokens for d in eval_items], [d.label for d in eval_items])
        folds.append(
            FoldMetrics(
                fold=fold,
                train_size=len(train_items),
                train_size_upsampled=len(upsampled),
                eval_size=len(eval_items),
                accuracy=metrics.accuracy,
                macro_f1=metrics.macro_f1,
                confusion=metrics.confusion,
            )
        )
    return CvReport(
        config=cfg,
        classes=(classes[0], classes[1]),
        plan=plan,
        folds=folds,
        mean_accuracy=float(np.mean([f.accuracy for f in folds])),
        mean_macro_f1=float(np.mean([f.macro_f1 for f in folds])),
    )
