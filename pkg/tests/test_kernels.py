"""Kernel backends: the compiled and pure implementations must agree."""

import random

import numpy as np
import pytest

from srcmine import kernels
from srcmine.kernels import available_backends, get_backend


def _instance(rng, n_samples=40, n_features=30, n_heads=3):
    indptr = [0]
    indices = []
    values = []
    for _ in range(n_samples):
        row = sorted(rng.sample(range(n_features), rng.randint(1, 10)))
        indices.extend(row)
        values.extend(rng.choice([1.0, 1.0, 2.0]) for _ in row)
        indptr.append(len(indices))
    labels = np.array(
        [[float(rng.randint(0, 1)) for _ in range(n_samples)] for _ in range(n_heads)]
    )
    return (
        np.asarray(indptr, dtype=np.int64),
        np.asarray(indices, dtype=np.int64),
        np.asarray(values, dtype=np.float64),
        labels,
    )


def _train(backend, data, epochs=25, lr=0.3, l2=1e-4):
    indptr, indices, values, labels = data
    weights = np.zeros((labels.shape[0], 30), dtype=np.float64)
    biases = np.zeros(labels.shape[0], dtype=np.float64)
    losses = [
        backend.epoch_update(indptr, indices, values, labels, weights, biases, lr, l2)
        for _ in range(epochs)
    ]
    return weights, biases, losses


def test_pure_backend_always_available():
    assert "pure" in available_backends()


@pytest.mark.skipif(
    "cython" not in available_backends(), reason="compiled kernel not built"
)
def test_backends_agree_bit_for_bit():
    rng = random.Random(99)
    data = _instance(rng)
    w_pure, b_pure, losses_pure = _train(get_backend("pure"), data)
    w_cy, b_cy, losses_cy = _train(get_backend("cython"), data)
    assert np.array_equal(w_pure, w_cy)
    assert np.array_equal(b_pure, b_cy)
    assert losses_pure == losses_cy


def test_margins_match_manual_dot():
    rng = random.Random(7)
    indptr, indices, values, labels = _instance(rng, n_samples=10)
    weights = np.array([[rng.uniform(-1, 1) for _ in range(30)] for _ in range(2)])
    biases = np.array([0.3, -0.2])
    rows = kernels.margins(indptr, indices, values, weights, biases)
    for h in range(2):
        for i in range(10):
            z = biases[h]
            for k in range(indptr[i], indptr[i + 1]):
                z += weights[h, indices[k]] * values[k]
            assert rows[h][i] == pytest.approx(z, rel=1e-15)


def test_same_seed_same_result():
    rng1 = random.Random(5)
    rng2 = random.Random(5)
    w1, b1, _ = _train(kernels, _instance(rng1))
    w2, b2, _ = _train(kernels, _instance(rng2))
    assert np.array_equal(w1, w2)
    assert np.array_equal(b1, b2)


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        get_backend("fortran")
