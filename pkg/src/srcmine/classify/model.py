"""Linear baseline classifier: logistic model over n-gram presence features.

Training is full-batch gradient descent on binary cross-entropy with an L2
penalty, run by the kernel backend (compiled when available).  The epoch
with the best validation F1 is the model that ships.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from srcmine import kernels
from srcmine.classify.dataset import DatasetSplit
from srcmine.classify.features import OTHER, OWN_CODE, build_vocabulary, featurize

MODEL_FORMAT_VERSION = 1


class TrainingDiverged(Exception):
    """Non-finite loss: the learning rate is past the stable bound."""


@dataclass
class Hyperparams:
    learning_rate: float = 0.1
    epochs: int = 300
    l2: float = 1e-4

    def as_dict(self):
        return {"learning_rate": self.learning_rate, "epochs": self.epochs, "l2": self.l2}


@dataclass
class LinearTextModel:
    vocabulary: dict
    weights: np.ndarray
    bias: float
    hyperparams: dict = field(default_factory=dict)
    threshold: float = 0.5
    training_fingerprint: str = ""

    def __post_init__(self):
        if len(self.weights) != len(self.vocabulary):
            raise ValueError("weight vector length must equal vocabulary size")
        if not np.all(np.isfinite(self.weights)) or not math.isfinite(self.bias):
            raise ValueError("model has non-finite parameters")


@dataclass(frozen=True)
class Prediction:
    probability: float
    label: str


@dataclass(frozen=True)
class EvalMetrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    flags: tuple = ()


def vectorize(feature_dicts, vocabulary):
    """CSR arrays (indptr, indices, values) over a fixed vocabulary."""
    indptr = [0]
    indices = []
    values = []
    for fd in feature_dicts:
        pairs = sorted((vocabulary[t], v) for t, v in fd.items() if t in vocabulary)
        indices.extend(i for i, _ in pairs)
        values.extend(v for _, v in pairs)
        indptr.append(len(indices))
    return (
        np.asarray(indptr, dtype=np.int64),
        np.asarray(indices, dtype=np.int64),
        np.asarray(values, dtype=np.float64),
    )


def bce_loss(indptr, indices, values, y, weights, bias, l2):
    """Mean binary cross-entropy plus 0.5*l2*||w||^2 (bias unpenalized)."""
    n = len(indptr) - 1
    total = 0.0
    for i in range(n):
        z = bias
        for k in range(indptr[i], indptr[i + 1]):
            z += weights[indices[k]] * values[k]
        if z >= 0.0:
            total += z - y[i] * z + math.log1p(math.exp(-z))
        else:
            total += -y[i] * z + math.log1p(math.exp(z))
    return total / n + 0.5 * l2 * float(np.dot(weights, weights))


def bce_gradient(indptr, indices, values, y, weights, bias, l2):
    """Analytic gradient of bce_loss with respect to (weights, bias)."""
    n = len(indptr) - 1
    grad_w = np.zeros_like(weights)
    grad_b = 0.0
    for i in range(n):
        z = bias
        for k in range(indptr[i], indptr[i + 1]):
            z += weights[indices[k]] * values[k]
        p = 1.0 / (1.0 + math.exp(-z)) if z >= 0.0 else math.exp(z) / (1.0 + math.exp(z))
        err = p - y[i]
        for k in range(indptr[i], indptr[i + 1]):
            grad_w[indices[k]] += err * values[k]
        grad_b += err
    return grad_w / n + l2 * weights, grad_b / n


def stable_learning_rate(indptr, indices, values, l2):
    """Largest step size with guaranteed per-epoch loss descent (1/L bound)."""
    max_sq = 0.0
    indptr = list(indptr)
    for i in range(len(indptr) - 1):
        row = sum(values[k] * values[k] for k in range(indptr[i], indptr[i + 1]))
        max_sq = max(max_sq, row)
    return 1.0 / (0.25 * max_sq + l2) if max_sq else 1.0


def _binary_f1(y_true, y_pred):
    tp = sum(1 for t, p in zip(y_true, y_pred) if t and p)
    fp = sum(1 for t, p in zip(y_true, y_pred) if not t and p)
    fn = sum(1 for t, p in zip(y_true, y_pred) if t and not p)
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


@dataclass
class TrainResult:
    model: LinearTextModel
    epoch_losses: list
    best_epoch: int
    best_validation_f1: float


def train(split: DatasetSplit, hyper: Hyperparams | None = None) -> TrainResult:
    """Fit the logistic baseline on a DatasetSplit.

    Raises ValueError when the train part lacks a label and
    TrainingDiverged when the loss goes non-finite.
    """
    hyper = hyper or Hyperparams()
    train_labels = {s.label for s in split.train}
    if train_labels != {OWN_CODE, OTHER}:
        missing = {OWN_CODE, OTHER} - train_labels
        raise ValueError(f"label(s) absent from train set: {sorted(missing)}")
    train_feats = [featurize(s.text) for s in split.train]
    vocabulary = build_vocabulary(train_feats)
    indptr, indices, values = vectorize(train_feats, vocabulary)
    y = np.array([[1.0 if s.label == OWN_CODE else 0.0 for s in split.train]])
    val_feats = [featurize(s.text) for s in split.validation]
    val_csr = vectorize(val_feats, vocabulary)
    val_true = [s.label == OWN_CODE for s in split.validation]

    weights = np.zeros((1, len(vocabulary)), dtype=np.float64)
    biases = np.zeros(1, dtype=np.float64)
    losses = []
    best_f1 = -1.0
    best_epoch = -1
    best_weights = weights.copy()
    best_bias = 0.0
    for epoch in range(hyper.epochs):
        loss = kernels.epoch_update(
            indptr, indices, values, y, weights, biases, hyper.learning_rate, hyper.l2
        )
        if not math.isfinite(loss):
            raise TrainingDiverged(f"non-finite loss at epoch {epoch}")
        losses.append(loss)
        scores = kernels.margins(*val_csr, weights, biases)[0] if val_true else []
        val_pred = [z >= 0.0 for z in scores]
        f1 = _binary_f1(val_true, val_pred) if val_true else 0.0
        if f1 > best_f1:
            best_f1 = f1
            best_epoch = epoch
            best_weights = weights.copy()
            best_bias = float(biases[0])
    fingerprint = hashlib.sha256(
        json.dumps(
            {
                "n_train": len(split.train),
                "n_validation": len(split.validation),
                "seed": split.seed,
                "hyper": hyper.as_dict(),
                "vocab_size": len(vocabulary),
            },
            sort_keys=True,
        ).encode()
    ).hexdigest()
    model = LinearTextModel(
        vocabulary=vocabulary,
        weights=best_weights[0],
        bias=best_bias,
        hyperparams=hyper.as_dict(),
        training_fingerprint=fingerprint,
    )
    return TrainResult(
        model=model, epoch_losses=losses, best_epoch=best_epoch, best_validation_f1=best_f1
    )


def predict(model: LinearTextModel, text: str, url_position: str | None = None) -> Prediction:
    """Sigmoid score plus the thresholded label (ties resolve positive)."""
    z = model.bias
    for term, value in featurize(text, url_position).items():
        idx = model.vocabulary.get(term)
        if idx is not None:
            z += model.weights[idx] * value
    probability = 1.0 / (1.0 + math.exp(-z)) if z >= 0.0 else math.exp(z) / (1.0 + math.exp(z))
    label = OWN_CODE if probability >= model.threshold else OTHER
    return Prediction(probability=probability, label=label)


def evaluate(model: LinearTextModel, test) -> EvalMetrics:
    """Binary metrics with own_code as the positive class."""
    test = list(test)
    if not test:
        raise ValueError("empty test set")
    tp = fp = fn = tn = 0
    for sentence in test:
        predicted = predict(model, sentence.text).label == OWN_CODE
        actual = sentence.label == OWN_CODE
        if actual and predicted:
            tp += 1
        elif actual:
            fn += 1
        elif predicted:
            fp += 1
        else:
            tn += 1
    return metrics_from_counts(tp, fp, fn, tn)


def metrics_from_counts(tp, fp, fn, tn) -> EvalMetrics:
    n = tp + fp + fn + tn
    flags = []
    if tp + fp == 0:
        precision = 0.0
        flags.append("precision undefined (no positive predictions); reported as 0")
    else:
        precision = tp / (tp + fp)
    if tp + fn == 0:
        recall = 0.0
        flags.append("recall undefined (no positive instances); reported as 0")
    else:
        recall = tp / (tp + fn)
    f1_denominator = 2 * tp + fp + fn
    f1 = 2 * tp / f1_denominator if f1_denominator else 0.0
    return EvalMetrics(
        accuracy=(tp + tn) / n,
        precision=precision,
        recall=recall,
        f1=f1,
        flags=tuple(flags),
    )


def save_model(model: LinearTextModel, path):
    payload = {
        "format_version": MODEL_FORMAT_VERSION,
        "vocabulary": model.vocabulary,
        "weights": model.weights.tolist(),
        "bias": model.bias,
        "threshold": model.threshold,
        "hyperparams": model.hyperparams,
        "training_fingerprint": model.training_fingerprint,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)


def load_model(path) -> LinearTextModel:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    version = payload.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version: {version!r}")
    return LinearTextModel(
        vocabulary=payload["vocabulary"],
        weights=np.asarray(payload["weights"], dtype=np.float64),
        bias=float(payload["bias"]),
        hyperparams=payload.get("hyperparams", {}),
        threshold=float(payload.get("threshold", 0.5)),
        training_fingerprint=payload.get("training_fingerprint", ""),
    )
