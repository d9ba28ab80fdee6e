#!/usr/bin/env python3
"""Benchmark the compiled training kernel against the pure-Python twin.

Runs full-batch epochs of the 8-head logistic trainer over a synthetic
sparse dataset sized like a real corpus slice, and verifies both backends
produce identical weights while timing them.

    python benchmarks/bench_kernels.py [--samples 20000] [--epochs 5]
"""

import argparse
import random
import time

import numpy as np

from srcmine.kernels import available_backends, get_backend


def synthesize(n_samples, n_features, nnz_per_row, n_heads, seed=0):
    rng = random.Random(seed)
    indptr = [0]
    indices = []
    values = []
    for _ in range(n_samples):
        row = sorted(rng.sample(range(n_features), nnz_per_row))
        indices.extend(row)
        values.extend(1.0 for _ in row)
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


def run(backend_name, data, n_features, epochs, lr=0.2, l2=1e-4):
    backend = get_backend(backend_name)
    indptr, indices, values, labels = data
    weights = np.zeros((labels.shape[0], n_features), dtype=np.float64)
    biases = np.zeros(labels.shape[0], dtype=np.float64)
    start = time.perf_counter()
    losses = [
        backend.epoch_update(indptr, indices, values, labels, weights, biases, lr, l2)
        for _ in range(epochs)
    ]
    elapsed = time.perf_counter() - start
    return weights, biases, losses, elapsed


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=20_000)
    parser.add_argument("--features", type=int, default=50_000)
    parser.add_argument("--nnz", type=int, default=25)
    parser.add_argument("--heads", type=int, default=8)
    parser.add_argument("--epochs", type=int, default=5)
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    print(
        f"dataset: {args.samples} samples x {args.nnz} nnz, "
        f"{args.features} features, {args.heads} heads, {args.epochs} epochs"
    )
    data = synthesize(args.samples, args.features, args.nnz, args.heads)
    results = {}
    for name in backends:
        weights, biases, losses, elapsed = run(name, data, args.features, args.epochs)
        results[name] = (weights, biases, elapsed)
        rate = args.samples * args.epochs / elapsed
        print(f"  {name:7s} {elapsed:8.3f}s  ({rate:,.0f} samples/s)  final loss {losses[-1]:.6f}")
    if len(results) == 2:
        w_cy, b_cy, t_cy = results["cython"]
        w_py, b_py, t_py = results["pure"]
        identical = np.array_equal(w_cy, w_py) and np.array_equal(b_cy, b_py)
        print(f"  identical results: {identical}")
        print(f"  speedup: {t_py / t_cy:.1f}x")
        if not identical:
            raise SystemExit("backend results diverged")


if __name__ == "__main__":
    main()
