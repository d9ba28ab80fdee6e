"""Dual-field multi-label classifier for README units.

Header and subtext are featurized against separate vocabularies (the
header is short but names the content, so its features must not pool with
the subtext's); eight independent logistic heads share the concatenated
design matrix.  Loss is the sum of per-label binary cross-entropies.
"""

import hashlib
import json
import math
import random
import re
from dataclasses import dataclass, field

import numpy as np

from srcmine import kernels
from srcmine.classify.model import TrainingDiverged
from srcmine.readme.segment import CATEGORIES

_WORD_RE = re.compile(r"[a-z0-9]+")

DUAL_MODEL_FORMAT_VERSION = 1


def field_features(text: str) -> dict:
    """Unigram/bigram presence features plus a length bucket for one field."""
    tokens = _WORD_RE.findall(text.lower())
    if not tokens:
        return {}
    features = {}
    for token in tokens:
        features[token] = 1.0
    for first, second in zip(tokens, tokens[1:]):
        features[f"{first}_{second}"] = 1.0
    if len(tokens) <= 5:
        bucket = "short"
    elif len(tokens) <= 50:
        bucket = "medium"
    else:
        bucket = "long"
    features[f"len:{bucket}"] = 1.0
    return features


@dataclass(frozen=True)
class UnitSample:
    header_text: str
    subtext: str
    labels: frozenset

    def __post_init__(self):
        unknown = set(self.labels) - set(CATEGORIES)
        if unknown:
            raise ValueError(f"labels outside the eight-category scheme: {sorted(unknown)}")


@dataclass(frozen=True)
class UnitDatasetSplit:
    train: tuple
    validation: tuple
    test: tuple
    seed: int


def split_units(units, seed=0) -> UnitDatasetSplit:
    """Shuffle under seed, cut 8:1:1 at floor(0.8N) / floor(0.9N)."""
    units = list(units)
    if len(units) < 10:
        raise ValueError(f"need at least 10 units to split, got {len(units)}")
    rng = random.Random(seed)
    rng.shuffle(units)
    n = len(units)
    cut1, cut2 = int(0.8 * n), int(0.9 * n)
    return UnitDatasetSplit(
        train=tuple(units[:cut1]),
        validation=tuple(units[cut1:cut2]),
        test=tuple(units[cut2:]),
        seed=seed,
    )


@dataclass
class DualFieldModel:
    header_vocabulary: dict
    subtext_vocabulary: dict
    header_weights: np.ndarray  # (8, |header vocab|)
    subtext_weights: np.ndarray  # (8, |subtext vocab|)
    biases: np.ndarray  # (8,)
    threshold: float = 0.5
    hyperparams: dict = field(default_factory=dict)
    training_fingerprint: str = ""

    def __post_init__(self):
        if self.header_weights.shape != (len(CATEGORIES), len(self.header_vocabulary)):
            raise ValueError("header weight shape mismatch")
        if self.subtext_weights.shape != (len(CATEGORIES), len(self.subtext_vocabulary)):
            raise ValueError("subtext weight shape mismatch")
        for arr in (self.header_weights, self.subtext_weights, self.biases):
            if not np.all(np.isfinite(arr)):
                raise ValueError("model has non-finite parameters")


def _build_vocab(feature_dicts):
    vocab = {}
    for fd in feature_dicts:
        for term in fd:
            if term not in vocab:
                vocab[term] = len(vocab)
    return vocab


def build_design(samples, header_vocab, subtext_vocab):
    """CSR over concatenated columns [header vocab | offset subtext vocab]."""
    offset = len(header_vocab)
    indptr = [0]
    indices = []
    values = []
    for sample in samples:
        pairs = []
        for term, value in field_features(sample.header_text).items():
            idx = header_vocab.get(term)
            if idx is not None:
                pairs.append((idx, value))
        for term, value in field_features(sample.subtext).items():
            idx = subtext_vocab.get(term)
            if idx is not None:
                pairs.append((offset + idx, value))
        pairs.sort()
        indices.extend(i for i, _ in pairs)
        values.extend(v for _, v in pairs)
        indptr.append(len(indices))
    return (
        np.asarray(indptr, dtype=np.int64),
        np.asarray(indices, dtype=np.int64),
        np.asarray(values, dtype=np.float64),
    )


def _label_matrix(samples):
    y = np.zeros((len(CATEGORIES), len(samples)), dtype=np.float64)
    for i, sample in enumerate(samples):
        for l, category in enumerate(CATEGORIES):
            if category in sample.labels:
                y[l, i] = 1.0
    return y


def _sigmoid(z):
    return 1.0 / (1.0 + math.exp(-z)) if z >= 0.0 else math.exp(z) / (1.0 + math.exp(z))


@dataclass
class MultilabelMetrics:
    subset_accuracy: float
    weighted_f1: float
    per_label_f1: dict
    excluded_labels: tuple = ()


def _predicted_sets(margin_rows, threshold):
    n = len(margin_rows[0]) if margin_rows else 0
    out = []
    for i in range(n):
        probs = {c: _sigmoid(margin_rows[l][i]) for l, c in enumerate(CATEGORIES)}
        chosen = {c for c, p in probs.items() if p >= threshold}
        if not chosen:
            chosen = {max(CATEGORIES, key=lambda c: probs[c])}
        out.append(frozenset(chosen))
    return out


def multilabel_metrics(gold_sets, predicted_sets) -> MultilabelMetrics:
    """Subset accuracy and support-weighted F1 over the eight categories.

    Labels with zero gold support cannot carry weight and are excluded
    from the weighted average; the exclusion is reported.
    """
    if len(gold_sets) != len(predicted_sets):
        raise ValueError("gold and predicted lengths differ")
    if not gold_sets:
        raise ValueError("empty evaluation set")
    exact = sum(1 for g, p in zip(gold_sets, predicted_sets) if frozenset(g) == frozenset(p))
    per_label = {}
    weighted_sum = 0.0
    total_support = 0
    excluded = []
    for category in CATEGORIES:
        tp = sum(1 for g, p in zip(gold_sets, predicted_sets) if category in g and category in p)
        fp = sum(
            1 for g, p in zip(gold_sets, predicted_sets) if category not in g and category in p
        )
        fn = sum(
            1 for g, p in zip(gold_sets, predicted_sets) if category in g and category not in p
        )
        support = tp + fn
        denom = 2 * tp + fp + fn
        f1 = 2 * tp / denom if denom else 0.0
        per_label[category] = f1
        if support:
            weighted_sum += support * f1
            total_support += support
        else:
            excluded.append(category)
    return MultilabelMetrics(
        subset_accuracy=exact / len(gold_sets),
        weighted_f1=weighted_sum / total_support if total_support else 0.0,
        per_label_f1=per_label,
        excluded_labels=tuple(excluded),
    )


@dataclass
class MultilabelTrainResult:
    model: DualFieldModel
    epoch_losses: list
    best_epoch: int
    best_validation_weighted_f1: float
    unreliable_labels: tuple = ()


def train_multilabel(split: UnitDatasetSplit, hyper=None) -> MultilabelTrainResult:
    """Fit the eight heads; epoch with best validation weighted F1 wins."""
    from srcmine.classify.model import Hyperparams

    hyper = hyper or Hyperparams()
    train_samples = list(split.train)
    if not train_samples:
        raise ValueError("empty train part")
    header_vocab = _build_vocab(field_features(s.header_text) for s in train_samples)
    subtext_vocab = _build_vocab(field_features(s.subtext) for s in train_samples)
    X = build_design(train_samples, header_vocab, subtext_vocab)
    y = _label_matrix(train_samples)
    unreliable = tuple(
        category for l, category in enumerate(CATEGORIES) if not y[l].any()
    )
    n_columns = len(header_vocab) + len(subtext_vocab)
    weights = np.zeros((len(CATEGORIES), n_columns), dtype=np.float64)
    biases = np.zeros(len(CATEGORIES), dtype=np.float64)
    val_samples = list(split.validation)
    X_val = build_design(val_samples, header_vocab, subtext_vocab)
    gold_val = [s.labels for s in val_samples]

    losses = []
    best_f1 = -1.0
    best_epoch = -1
    best_weights = weights.copy()
    best_biases = biases.copy()
    for epoch in range(hyper.epochs):
        loss = kernels.epoch_update(*X, y, weights, biases, hyper.learning_rate, hyper.l2)
        if not math.isfinite(loss):
            raise TrainingDiverged(f"non-finite loss at epoch {epoch}")
        losses.append(loss)
        if val_samples:
            margin_rows = kernels.margins(*X_val, weights, biases)
            predicted = _predicted_sets(margin_rows, 0.5)
            f1 = multilabel_metrics(gold_val, predicted).weighted_f1
        else:
            f1 = 0.0
        if f1 > best_f1:
            best_f1 = f1
            best_epoch = epoch
            best_weights = weights.copy()
            best_biases = biases.copy()
    offset = len(header_vocab)
    fingerprint = hashlib.sha256(
        json.dumps(
            {
                "n_train": len(train_samples),
                "seed": split.seed,
                "hyper": hyper.as_dict(),
                "header_vocab": len(header_vocab),
                "subtext_vocab": len(subtext_vocab),
            },
            sort_keys=True,
        ).encode()
    ).hexdigest()
    model = DualFieldModel(
        header_vocabulary=header_vocab,
        subtext_vocabulary=subtext_vocab,
        header_weights=best_weights[:, :offset].copy(),
        subtext_weights=best_weights[:, offset:].copy(),
        biases=best_biases,
        hyperparams=hyper.as_dict(),
        training_fingerprint=fingerprint,
    )
    return MultilabelTrainResult(
        model=model,
        epoch_losses=losses,
        best_epoch=best_epoch,
        best_validation_weighted_f1=best_f1,
        unreliable_labels=unreliable,
    )


@dataclass(frozen=True)
class LabelPrediction:
    probabilities: dict
    labels: frozenset


def predict_labels(model: DualFieldModel, unit) -> LabelPrediction:
    """Per-label sigmoid scores; empty threshold sets fall back to argmax."""
    header = field_features(unit.header_text)
    subtext = field_features(unit.subtext)
    probabilities = {}
    for l, category in enumerate(CATEGORIES):
        z = float(model.biases[l])
        for term, value in header.items():
            idx = model.header_vocabulary.get(term)
            if idx is not None:
                z += model.header_weights[l, idx] * value
        for term, value in subtext.items():
            idx = model.subtext_vocabulary.get(term)
            if idx is not None:
                z += model.subtext_weights[l, idx] * value
        probabilities[category] = _sigmoid(z)
    chosen = {c for c, p in probabilities.items() if p >= model.threshold}
    if not chosen:
        chosen = {max(CATEGORIES, key=lambda c: probabilities[c])}
    return LabelPrediction(probabilities=probabilities, labels=frozenset(chosen))


def evaluate_multilabel(model: DualFieldModel, units) -> MultilabelMetrics:
    units = list(units)
    if not units:
        raise ValueError("empty test set")
    gold = [u.labels for u in units]
    predicted = [predict_labels(model, u).labels for u in units]
    return multilabel_metrics(gold, predicted)


def save_dual_model(model: DualFieldModel, path):
    payload = {
        "format_version": DUAL_MODEL_FORMAT_VERSION,
        "header_vocabulary": model.header_vocabulary,
        "subtext_vocabulary": model.subtext_vocabulary,
        "header_weights": model.header_weights.tolist(),
        "subtext_weights": model.subtext_weights.tolist(),
        "biases": model.biases.tolist(),
        "threshold": model.threshold,
        "hyperparams": model.hyperparams,
        "training_fingerprint": model.training_fingerprint,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)


def load_dual_model(path) -> DualFieldModel:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    version = payload.get("format_version")
    if version != DUAL_MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported dual model format version: {version!r}")
    return DualFieldModel(
        header_vocabulary=payload["header_vocabulary"],
        subtext_vocabulary=payload["subtext_vocabulary"],
        header_weights=np.asarray(payload["header_weights"], dtype=np.float64),
        subtext_weights=np.asarray(payload["subtext_weights"], dtype=np.float64),
        biases=np.asarray(payload["biases"], dtype=np.float64),
        threshold=float(payload.get("threshold", 0.5)),
        hyperparams=payload.get("hyperparams", {}),
        training_fingerprint=payload.get("training_fingerprint", ""),
    )
