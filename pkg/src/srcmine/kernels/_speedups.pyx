# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled training kernel: full-batch gradient descent for logistic heads.

Twin of srcmine.kernels.pure -- identical arithmetic in identical order so
the two backends produce bit-identical models.  Keep edits in sync.
"""

from libc.math cimport exp, log1p

import numpy as np

BACKEND = "cython"


def epoch_update(long[:] indptr, long[:] indices, double[:] values,
                 double[:, :] labels, double[:, :] weights, double[:] biases,
                 double lr, double l2):
    """One full-batch epoch over all heads, in place; returns pre-update loss."""
    cdef Py_ssize_t n_samples = indptr.shape[0] - 1
    cdef Py_ssize_t n_heads = weights.shape[0]
    cdef Py_ssize_t n_features = weights.shape[1]
    cdef Py_ssize_t h, i, k, f
    cdef double z, p, err, loss, penalty, grad_b, total_loss
    grad_np = np.zeros(n_features, dtype=np.float64)
    cdef double[:] grad = grad_np
    total_loss = 0.0
    for h in range(n_heads):
        for f in range(n_features):
            grad[f] = 0.0
        grad_b = 0.0
        loss = 0.0
        for i in range(n_samples):
            z = biases[h]
            for k in range(indptr[i], indptr[i + 1]):
                z += weights[h, indices[k]] * values[k]
            if z >= 0.0:
                loss += z - labels[h, i] * z + log1p(exp(-z))
            else:
                loss += -labels[h, i] * z + log1p(exp(z))
            if z >= 0.0:
                p = 1.0 / (1.0 + exp(-z))
            else:
                p = exp(z) / (1.0 + exp(z))
            err = p - labels[h, i]
            for k in range(indptr[i], indptr[i + 1]):
                grad[indices[k]] += err * values[k]
            grad_b += err
        penalty = 0.0
        for f in range(n_features):
            penalty += weights[h, f] * weights[h, f]
        total_loss += loss / n_samples + 0.5 * l2 * penalty
        for f in range(n_features):
            weights[h, f] = weights[h, f] - lr * (grad[f] / n_samples + l2 * weights[h, f])
        biases[h] = biases[h] - lr * (grad_b / n_samples)
    return total_loss


def margins(long[:] indptr, long[:] indices, double[:] values,
            double[:, :] weights, double[:] biases):
    """Decision margins w.x + b for every (head, sample) pair."""
    cdef Py_ssize_t n_samples = indptr.shape[0] - 1
    cdef Py_ssize_t n_heads = weights.shape[0]
    cdef Py_ssize_t h, i, k
    cdef double z
    out = [[0.0] * n_samples for _ in range(n_heads)]
    cdef list row
    for h in range(n_heads):
        row = out[h]
        for i in range(n_samples):
            z = biases[h]
            for k in range(indptr[i], indptr[i + 1]):
                z += weights[h, indices[k]] * values[k]
            row[i] = z
    return out
