"""Per-role aspect classification on balanced Wikipedia training sets.

The classifier is a nearest-centroid model over section embeddings with
temperature-softmax probabilities: one centroid per aspect plus one for
the negative class ("belongs to none of this role's aspects"). It is
deterministic, provider-agnostic and yields the class probabilities the
downstream snippet ranking needs.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .clustering import cosine
from .embedding import EmbeddingProvider, embed_section
from .mining import RoleAspectSchema
from .models import PersonPage
from .textnorm import normalize_title
from .validation import check_matching_lengths, check_texts

#: Label of the "none of this role's aspects" class.
NEGATIVE = "__negative__"

DEFAULT_TAU_GRID = (1.0, 5.0, 10.0, 50.0)

TRAIN_FRACTION = 0.8
VALIDATION_FRACTION = 0.1


@dataclass(frozen=True)
class Splits:
    train: tuple[int, ...]
    validation: tuple[int, ...]
    test: tuple[int, ...]


@dataclass(frozen=True)
class TrainingSet:
    role: str
    examples: tuple[tuple[str, str], ...]  # (text, label)
    classes: tuple[str, ...]  # aspect order from the schema, then NEGATIVE
    splits: Splits
    seed: int

    def labeled(self, indices: Iterable[int]) -> list[tuple[str, str]]:
        return [self.examples[i] for i in indices]


def _largest_remainder(targets: list[float], total: int) -> list[int]:
    """Integer allocation summing to ``total``: floors first, then one extra
    to the largest fractional remainders (ties by position)."""
    floors = [int(t) for t in targets]
    remainder = total - sum(floors)
    order = sorted(range(len(targets)), key=lambda i: (-(targets[i] - floors[i]), i))
    for i in order[:remainder]:
        floors[i] += 1
    return floors


def _stratified_splits(labels: Sequence[str], classes: Sequence[str], rng: random.Random) -> Splits:
    n = len(labels)
    n_train = int(TRAIN_FRACTION * n)
    n_val = int(VALIDATION_FRACTION * n)

    by_class: dict[str, list[int]] = {c: [] for c in classes}
    for i, label in enumerate(labels):
        by_class[label].append(i)
    sizes = [len(by_class[c]) for c in classes]

    train_alloc = _largest_remainder([TRAIN_FRACTION * s for s in sizes], n_train)
    val_alloc = _largest_remainder(
        [min(VALIDATION_FRACTION * s, s - t) for s, t in zip(sizes, train_alloc)], n_val
    )

    train: list[int] = []
    val: list[int] = []
    test: list[int] = []
    for c, n_tr, n_va in zip(classes, train_alloc, val_alloc):
        indices = list(by_class[c])
        rng.shuffle(indices)
        train.extend(indices[:n_tr])
        val.extend(indices[n_tr : n_tr + n_va])
        test.extend(indices[n_tr + n_va :])
    return Splits(train=tuple(train), validation=tuple(val), test=tuple(test))


def build_training_set(
    role: str,
    schema: RoleAspectSchema,
    pages: Sequence[PersonPage],
    roles_by_page: Mapping[str, frozenset[str]],
    seed: int,
    section_clusters: Mapping[str, str],
) -> TrainingSet:
    """Assemble a balanced, reproducible training set for one role.

    Every aspect is downsampled to the size of the least frequent one;
    the negative class gets as many examples as all positives combined,
    drawn uniformly from sections of pages that do not have the role.
    ``section_clusters`` maps normalized section titles to cluster ids.

    The 80-10-10 split is stratified by label; same seed, same bytes.
    """
    rng = random.Random(seed)
    aspect_ids = schema.aspect_ids()

    texts_by_aspect: dict[str, list[str]] = {a: [] for a in aspect_ids}
    negative_pool: list[str] = []
    for page in pages:
        page_roles = roles_by_page.get(page.page_id, frozenset())
        if role in page_roles:
            for section in page.sections:
                cluster_id = section_clusters.get(normalize_title(section.title))
                if cluster_id in texts_by_aspect:
                    texts_by_aspect[cluster_id].append(section.text)
        else:
            negative_pool.extend(section.text for section in page.sections)

    empty = [a for a in aspect_ids if not texts_by_aspect[a]]
    if empty:
        raise ValueError(f"role {role!r}: no texts for aspects {empty}")
    m = min(len(texts_by_aspect[a]) for a in aspect_ids)

    examples: list[tuple[str, str]] = []
    for aspect in aspect_ids:
        sampled = rng.sample(texts_by_aspect[aspect], m)
        examples.extend((text, aspect) for text in sampled)

    n_negative = m * len(aspect_ids)
    if not negative_pool:
        raise ValueError(f"no negative pool for role {role!r}")
    if len(negative_pool) < n_negative:
        raise ValueError(
            f"negative pool for role {role!r} too small: "
            f"{len(negative_pool)} < {n_negative}"
        )
    examples.extend((text, NEGATIVE) for text in rng.sample(negative_pool, n_negative))

    classes = (*aspect_ids, NEGATIVE)
    splits = _stratified_splits([label for _, label in examples], classes, rng)
    return TrainingSet(
        role=role, examples=tuple(examples), classes=classes, splits=splits, seed=seed
    )


def softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - np.max(scores, axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=-1, keepdims=True)


class NearestCentroidTextClassifier(BaseEstimator, ClassifierMixin):
    """Nearest-centroid text classifier with softmax probabilities.

    ``fit`` averages the provider embeddings of each class's texts into a
    centroid; prediction scores a text by cosine against every centroid
    and applies a temperature softmax. Texts that embed to the zero
    vector get a uniform distribution and, when ``fallback_label`` is
    set, that label.
    """

    def __init__(
        self,
        provider: EmbeddingProvider | None = None,
        temperature: float = 1.0,
        fallback_label: str | None = None,
    ):
        self.provider = provider
        self.temperature = temperature
        self.fallback_label = fallback_label

    def fit(self, X, y, classes: Sequence[str] | None = None):
        if self.provider is None:
            raise ValueError("an embedding provider is required")
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")
        texts = check_texts(X)
        labels = list(y)
        check_matching_lengths(texts, labels)
        if classes is None:
            classes = list(dict.fromkeys(labels))  # first-seen order
        missing = sorted(set(labels) - set(classes))
        if missing:
            raise ValueError(f"labels outside the class list: {missing}")
        vectors: dict[str, list[np.ndarray]] = {c: [] for c in classes}
        for text, label in zip(texts, labels):
            vectors[label].append(embed_section(text, self.provider))
        absent = [c for c in classes if not vectors[c]]
        if absent:
            raise ValueError(f"degenerate split: classes {absent} absent from train")
        self.classes_ = np.asarray(list(classes), dtype=object)
        self.centroids_ = np.stack([np.mean(vectors[c], axis=0) for c in classes])
        return self

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "centroids_")
        texts = check_texts(X)
        scores = np.zeros((len(texts), len(self.classes_)))
        for i, text in enumerate(texts):
            v = embed_section(text, self.provider)
            for j, centroid in enumerate(self.centroids_):
                scores[i, j] = cosine(v, centroid)
        return scores

    def predict_proba(self, X) -> np.ndarray:
        scores = self.decision_function(X)
        proba = softmax(self.temperature * scores)
        zero_rows = ~np.any(scores != 0.0, axis=1)
        proba[zero_rows] = 1.0 / len(self.classes_)
        return proba

    def predict(self, X) -> np.ndarray:
        scores = self.decision_function(X)
        labels = self.classes_[np.argmax(scores, axis=1)]
        if self.fallback_label is not None:
            zero_rows = ~np.any(scores != 0.0, axis=1)
            labels[zero_rows] = self.fallback_label
        return labels


@dataclass(frozen=True)
class EvalReport:
    """Confusion counts plus macro-averaged metrics.

    Macro metrics are unweighted class means; a class that is never
    predicted contributes precision 0 (not skipped), and a class without
    true instances contributes recall 0.
    """

    classes: tuple[str, ...]
    confusion: dict[str, dict[str, int]]  # true label -> predicted label -> count
    macro_precision: float
    macro_recall: float
    macro_f1: float
    accuracy: float

    def to_dict(self) -> dict:
        return {
            "classes": list(self.classes),
            "confusion": {t: dict(row) for t, row in self.confusion.items()},
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "accuracy": self.accuracy,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvalReport":
        return cls(
            classes=tuple(d["classes"]),
            confusion={t: {p: int(c) for p, c in row.items()} for t, row in d["confusion"].items()},
            macro_precision=d["macro_precision"],
            macro_recall=d["macro_recall"],
            macro_f1=d["macro_f1"],
            accuracy=d["accuracy"],
        )


def evaluate_predictions(
    y_true: Sequence[str], y_pred: Sequence[str], classes: Sequence[str]
) -> EvalReport:
    check_matching_lengths(y_true, y_pred)
    if not y_true:
        raise ValueError("cannot evaluate an empty sample")
    class_list = list(classes)
    known = set(class_list)
    stray = sorted({*y_true, *y_pred} - known)
    if stray:
        raise ValueError(f"labels outside the class list: {stray}")

    confusion = {t: {p: 0 for p in class_list} for t in class_list}
    for t, p in zip(y_true, y_pred):
        confusion[t][p] += 1

    precisions, recalls, f1s = [], [], []
    correct = 0
    for c in class_list:
        tp = confusion[c][c]
        predicted = sum(confusion[t][c] for t in class_list)
        actual = sum(confusion[c].values())
        precision = tp / predicted if predicted else 0.0
        recall = tp / actual if actual else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        precisions.append(precision)
        recalls.append(recall)
        f1s.append(f1)
        correct += tp

    return EvalReport(
        classes=tuple(class_list),
        confusion=confusion,
        macro_precision=float(np.mean(precisions)),
        macro_recall=float(np.mean(recalls)),
        macro_f1=float(np.mean(f1s)),
        accuracy=correct / len(y_true),
    )


@dataclass(frozen=True)
class TrainedAspectModel:
    """A role's classifier: class centroids, temperature and test metrics."""

    role: str
    classes: tuple[str, ...]
    centroids: np.ndarray
    temperature: float
    metrics: EvalReport
    provider_name: str
    seed: int
    n_examples: int

    def to_dict(self) -> dict:
        return {
            "role": self.role,
            "classes": list(self.classes),
            "centroids": [list(map(float, row)) for row in self.centroids],
            "temperature": self.temperature,
            "metrics": self.metrics.to_dict(),
            "provider": self.provider_name,
            "seed": self.seed,
            "n_examples": self.n_examples,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainedAspectModel":
        return cls(
            role=d["role"],
            classes=tuple(d["classes"]),
            centroids=np.asarray(d["centroids"], dtype=np.float64),
            temperature=float(d["temperature"]),
            metrics=EvalReport.from_dict(d["metrics"]),
            provider_name=d["provider"],
            seed=int(d["seed"]),
            n_examples=int(d["n_examples"]),
        )


def _empty_report(classes: Sequence[str]) -> EvalReport:
    return EvalReport(
        classes=tuple(classes),
        confusion={t: {p: 0 for p in classes} for t in classes},
        macro_precision=0.0,
        macro_recall=0.0,
        macro_f1=0.0,
        accuracy=0.0,
    )


def train(
    ts: TrainingSet,
    provider: EmbeddingProvider,
    tau_grid: Sequence[float] = DEFAULT_TAU_GRID,
) -> TrainedAspectModel:
    """Fit centroids on the train split, pick the temperature maximizing
    validation macro precision (ties: smallest), report metrics on test."""
    if not tau_grid:
        raise ValueError("empty temperature grid")
    train_examples = ts.labeled(ts.splits.train)
    estimator = NearestCentroidTextClassifier(provider=provider, temperature=1.0)
    estimator.fit(
        [t for t, _ in train_examples], [l for _, l in train_examples], classes=ts.classes
    )

    val_examples = ts.labeled(ts.splits.validation)
    val_scores = (
        estimator.decision_function([t for t, _ in val_examples]) if val_examples else None
    )
    best_tau = None
    best_precision = -1.0
    for tau in sorted(float(t) for t in tau_grid):
        if val_scores is not None:
            predicted = [
                ts.classes[i] for i in np.argmax(softmax(tau * val_scores), axis=1)
            ]
            # Same zero-embedding rule as classify().
            for i in np.flatnonzero(~np.any(val_scores != 0.0, axis=1)):
                predicted[i] = NEGATIVE
            report = evaluate_predictions(
                [l for _, l in val_examples], predicted, ts.classes
            )
            precision = report.macro_precision
        else:
            precision = 0.0
        if precision > best_precision:
            best_precision = precision
            best_tau = tau

    model = TrainedAspectModel(
        role=ts.role,
        classes=ts.classes,
        centroids=estimator.centroids_,
        temperature=best_tau,
        metrics=_empty_report(ts.classes),
        provider_name=provider.name,
        seed=ts.seed,
        n_examples=len(ts.examples),
    )
    test_examples = ts.labeled(ts.splits.test)
    if test_examples:
        model = replace(model, metrics=evaluate(model, test_examples, provider))
    return model


def classify(
    model: TrainedAspectModel, text: str, provider: EmbeddingProvider
) -> tuple[str, dict[str, float]]:
    """Label a text with one of the role's aspects or the negative class.

    Returns the argmax label (ties: class order) and the full softmax
    distribution. Text embedding to the zero vector goes to the negative
    class with a uniform distribution.
    """
    v = embed_section(text, provider)
    scores = np.array([cosine(v, c) for c in model.centroids])
    if not np.any(scores != 0.0):
        uniform = 1.0 / len(model.classes)
        return NEGATIVE, {c: uniform for c in model.classes}
    proba = softmax(model.temperature * scores)
    label = model.classes[int(np.argmax(proba))]
    return label, {c: float(p) for c, p in zip(model.classes, proba)}


def evaluate(
    model: TrainedAspectModel,
    labeled: Sequence[tuple[str, str]],
    provider: EmbeddingProvider,
) -> EvalReport:
    """Confusion matrix and macro metrics of the model on labeled texts."""
    if not labeled:
        raise ValueError("cannot evaluate an empty sample")
    y_true = [label for _, label in labeled]
    y_pred = [classify(model, text, provider)[0] for text, _ in labeled]
    return evaluate_predictions(y_true, y_pred, model.classes)
