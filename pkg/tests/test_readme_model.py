"""Dual-field multi-label model: training, prediction, metrics, gradients."""

import itertools
import random

import numpy as np
import pytest

from srcmine.classify.model import Hyperparams, TrainingDiverged, bce_gradient, bce_loss
from srcmine.readme.model import (
    CATEGORIES,
    DualFieldModel,
    UnitSample,
    build_design,
    evaluate_multilabel,
    field_features,
    load_dual_model,
    multilabel_metrics,
    predict_labels,
    save_dual_model,
    split_units,
    train_multilabel,
)

HEADER_WORDS = {
    "Installation": "install",
    "Usage": "usage",
    "License": "license",
    "Citation": "cite",
}


def _separable_units(n=48):
    samples = []
    cycle = itertools.cycle(HEADER_WORDS.items())
    for i in range(n):
        label, word = next(cycle)
        samples.append(
            UnitSample(
                header_text=f"{word} section {i % 3}",
                subtext=f"body text about {word} number {i % 5}",
                labels=frozenset({label}),
            )
        )
    return samples


class TestTrainMultilabel:
    def test_header_determined_fixture_perfect_heldout(self):
        split = split_units(_separable_units(), seed=7)
        result = train_multilabel(split, Hyperparams(learning_rate=1.0, epochs=300))
        metrics = evaluate_multilabel(result.model, split.test)
        assert metrics.subset_accuracy == 1.0
        assert metrics.weighted_f1 == 1.0

    def test_zero_weight_model_scores_half_everywhere(self):
        header_vocab = {"x": 0}
        subtext_vocab = {"y": 0}
        model = DualFieldModel(
            header_vocabulary=header_vocab,
            subtext_vocabulary=subtext_vocab,
            header_weights=np.zeros((8, 1)),
            subtext_weights=np.zeros((8, 1)),
            biases=np.zeros(8),
        )
        unit = UnitSample(header_text="x", subtext="y", labels=frozenset())
        prediction = predict_labels(model, unit)
        assert all(p == 0.5 for p in prediction.probabilities.values())
        # threshold 0.5 with tie-to-positive: every label selected
        assert prediction.labels == frozenset(CATEGORIES)

    def test_empty_set_falls_back_to_argmax(self):
        model = DualFieldModel(
            header_vocabulary={"x": 0},
            subtext_vocabulary={"y": 0},
            header_weights=np.full((8, 1), -2.0),
            subtext_weights=np.zeros((8, 1)),
            biases=np.array([-1.0] * 6 + [-0.5] + [-1.0]),  # Technicality least negative
        )
        unit = UnitSample(header_text="x", subtext="", labels=frozenset())
        prediction = predict_labels(model, unit)
        assert prediction.labels == frozenset({CATEGORIES[6]})
        assert CATEGORIES[6] == "Technicality"

    def test_label_with_no_positives_flagged_unreliable(self):
        samples = [
            UnitSample(header_text=f"install {i}", subtext="body",
                       labels=frozenset({"Installation"}))
            for i in range(12)
        ]
        split = split_units(samples, seed=0)
        result = train_multilabel(split, Hyperparams(epochs=5))
        assert "Usage" in result.unreliable_labels
        assert "Installation" not in result.unreliable_labels

    def test_divergence_raises(self):
        split = split_units(_separable_units(), seed=3)
        with pytest.raises(TrainingDiverged):
            train_multilabel(split, Hyperparams(learning_rate=1e12, epochs=300))

    def test_deterministic(self):
        split = split_units(_separable_units(), seed=5)
        hyper = Hyperparams(learning_rate=0.7, epochs=40)
        a = train_multilabel(split, hyper).model
        b = train_multilabel(split, hyper).model
        assert np.array_equal(a.header_weights, b.header_weights)
        assert np.array_equal(a.subtext_weights, b.subtext_weights)
        assert np.array_equal(a.biases, b.biases)

    def test_save_load_round_trip(self, tmp_path):
        split = split_units(_separable_units(), seed=1)
        model = train_multilabel(split, Hyperparams(epochs=30)).model
        path = tmp_path / "dual.json"
        save_dual_model(model, path)
        loaded = load_dual_model(path)
        unit = split.test[0]
        assert predict_labels(loaded, unit) == predict_labels(model, unit)


class TestDualFieldSeparation:
    def test_same_tokens_different_fields_differ(self):
        header_vocab = {"alpha": 0, "beta": 1}
        subtext_vocab = {"alpha": 0, "beta": 1}
        a = UnitSample(header_text="alpha", subtext="beta", labels=frozenset())
        b = UnitSample(header_text="beta", subtext="alpha", labels=frozenset())
        design_a = build_design([a], header_vocab, subtext_vocab)
        design_b = build_design([b], header_vocab, subtext_vocab)
        assert design_a[1].tolist() != design_b[1].tolist()

    def test_field_features_no_pooling(self):
        # a probe weight only on the header field must ignore subtext tokens
        model = DualFieldModel(
            header_vocabulary={"license": 0},
            subtext_vocabulary={"license": 0},
            header_weights=np.array([[4.0]] * 8),
            subtext_weights=np.zeros((8, 1)),
            biases=np.full(8, -2.0),
        )
        in_header = UnitSample(header_text="license", subtext="", labels=frozenset())
        in_subtext = UnitSample(header_text="", subtext="license", labels=frozenset())
        p_header = predict_labels(model, in_header).probabilities["License"]
        p_subtext = predict_labels(model, in_subtext).probabilities["License"]
        assert p_header > 0.5 > p_subtext


class TestMultilabelMetrics:
    def test_perfect(self):
        gold = [frozenset({"Usage"}), frozenset({"Citation", "License"})]
        metrics = multilabel_metrics(gold, gold)
        assert metrics.subset_accuracy == 1.0
        assert metrics.weighted_f1 == 1.0

    def test_subset_accuracy_definition(self):
        gold = [frozenset({"Usage"}), frozenset({"Citation"})]
        predicted = [frozenset({"Usage"}), frozenset({"Usage"})]
        assert multilabel_metrics(gold, predicted).subset_accuracy == 0.5

    def test_weighted_f1_worked_example(self):
        # per-label F1 1.0, 0.0, 0.5 with supports 2, 1, 1 -> 0.625
        gold = [
            frozenset({"Usage"}),
            frozenset({"Usage", "License"}),
            frozenset({"Citation"}),
        ]
        predicted = [
            frozenset({"Usage", "License"}),
            frozenset({"Usage", "License"}),
            frozenset({"License"}),
        ]
        metrics = multilabel_metrics(gold, predicted)
        assert metrics.per_label_f1["Usage"] == 1.0
        assert metrics.per_label_f1["Citation"] == 0.0
        assert metrics.per_label_f1["License"] == 0.5
        assert metrics.weighted_f1 == 0.625

    def test_three_unit_subset_example(self):
        gold = [frozenset({"Usage"}), frozenset({"Usage", "Citation"}), frozenset({"License"})]
        predicted = [frozenset({"Usage", "Citation"}), frozenset({"Usage", "Citation"}),
                     frozenset({"Citation"})]
        metrics = multilabel_metrics(gold, predicted)
        assert metrics.subset_accuracy == pytest.approx(1 / 3)

    def test_zero_support_excluded_and_reported(self):
        gold = [frozenset({"Usage"})]
        predicted = [frozenset({"Usage"})]
        metrics = multilabel_metrics(gold, predicted)
        assert "License" in metrics.excluded_labels
        assert metrics.weighted_f1 == 1.0

    def test_empty_error(self):
        with pytest.raises(ValueError):
            multilabel_metrics([], [])


class TestDualGradient:
    def test_per_head_gradient_matches_finite_differences(self):
        rng = random.Random(41)
        samples = _separable_units(10)
        from srcmine.readme.model import _build_vocab, _label_matrix

        header_vocab = _build_vocab(field_features(s.header_text) for s in samples)
        subtext_vocab = _build_vocab(field_features(s.subtext) for s in samples)
        indptr, indices, values = build_design(samples, header_vocab, subtext_vocab)
        labels = _label_matrix(samples)
        n_features = len(header_vocab) + len(subtext_vocab)
        l2 = 1e-3
        eps = 1e-6
        for trial in range(10):
            head = trial % len(CATEGORIES)
            w = np.array([rng.uniform(-1, 1) for _ in range(n_features)])
            b = rng.uniform(-1, 1)
            y = labels[head]
            grad_w, grad_b = bce_gradient(indptr, indices, values, y, w, b, l2)
            probe = rng.sample(range(n_features), 6)
            for j in probe:
                w_plus = w.copy(); w_plus[j] += eps
                w_minus = w.copy(); w_minus[j] -= eps
                fd = (
                    bce_loss(indptr, indices, values, y, w_plus, b, l2)
                    - bce_loss(indptr, indices, values, y, w_minus, b, l2)
                ) / (2 * eps)
                assert abs(grad_w[j] - fd) <= 1e-4 * max(1.0, abs(fd))
            fd_b = (
                bce_loss(indptr, indices, values, y, w, b + eps, l2)
                - bce_loss(indptr, indices, values, y, w, b - eps, l2)
            ) / (2 * eps)
            assert abs(grad_b - fd_b) <= 1e-4 * max(1.0, abs(fd_b))
