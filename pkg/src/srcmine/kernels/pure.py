"""Pure-Python training kernel: full-batch gradient descent for logistic heads.

Mirrors srcmine.kernels._speedups operation for operation.  Both backends
iterate samples and stored feature indices in the same order so their
results agree bit for bit; keep any edit in sync with the .pyx twin.
"""

import math

BACKEND = "pure"


def epoch_update(indptr, indices, values, labels, weights, biases, lr, l2):
    """Run one full-batch gradient-descent epoch over all heads in place.

    Features come as CSR arrays (indptr/indices/values) shared by every
    head; labels is (n_heads, n_samples), weights (n_heads, n_features),
    biases (n_heads,).  Returns the pre-update loss: mean binary
    cross-entropy summed over heads plus the L2 penalty 0.5*l2*||w||^2.
    """
    n_samples = len(indptr) - 1
    n_heads = weights.shape[0]
    indptr_l = indptr.tolist()
    indices_l = indices.tolist()
    values_l = values.tolist()
    total_loss = 0.0
    for h in range(n_heads):
        w = weights[h].tolist()
        b = float(biases[h])
        y = labels[h].tolist()
        grad = [0.0] * len(w)
        grad_b = 0.0
        loss = 0.0
        for i in range(n_samples):
            z = b
            for k in range(indptr_l[i], indptr_l[i + 1]):
                z += w[indices_l[k]] * values_l[k]
            # log(1 + e^z) - y*z, computed in overflow-safe form
            if z >= 0.0:
                loss += z - y[i] * z + math.log1p(math.exp(-z))
            else:
                loss += -y[i] * z + math.log1p(math.exp(z))
            p = 1.0 / (1.0 + math.exp(-z)) if z >= 0.0 else math.exp(z) / (1.0 + math.exp(z))
            err = p - y[i]
            for k in range(indptr_l[i], indptr_l[i + 1]):
                grad[indices_l[k]] += err * values_l[k]
            grad_b += err
        penalty = 0.0
        for f in range(len(w)):
            penalty += w[f] * w[f]
        total_loss += loss / n_samples + 0.5 * l2 * penalty
        for f in range(len(w)):
            w[f] = w[f] - lr * (grad[f] / n_samples + l2 * w[f])
        b = b - lr * (grad_b / n_samples)
        weights[h] = w
        biases[h] = b
    return total_loss


def margins(indptr, indices, values, weights, biases):
    """Decision margins w.x + b for every (head, sample) pair."""
    n_samples = len(indptr) - 1
    n_heads = weights.shape[0]
    indptr_l = indptr.tolist()
    indices_l = indices.tolist()
    values_l = values.tolist()
    out = [[0.0] * n_samples for _ in range(n_heads)]
    for h in range(n_heads):
        w = weights[h].tolist()
        b = float(biases[h])
        row = out[h]
        for i in range(n_samples):
            z = b
            for k in range(indptr_l[i], indptr_l[i + 1]):
                z += w[indices_l[k]] * values_l[k]
            row[i] = z
    return out
