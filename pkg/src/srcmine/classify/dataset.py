"""Labeled sentences, negative sampling, and the 8:1:1 split."""

import random
import warnings
from dataclasses import dataclass

from srcmine.classify.features import LABELS, OTHER, OWN_CODE


@dataclass(frozen=True)
class LabeledSentence:
    text: str
    label: str
    source_paper_id: str = ""

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown label {self.label!r}")
        if not self.text.strip():
            raise ValueError("sentence text is empty")


@dataclass(frozen=True)
class DatasetSplit:
    train: tuple
    validation: tuple
    test: tuple
    seed: int


def build_training_set(positives, negative_pool, ratio=3, seed=0) -> list:
    """Positives plus ratio-times-as-many negatives sampled from the pool.

    Sampling is uniform without replacement and deterministic under seed.
    A pool smaller than the request is taken whole, with a warning.
    """
    positives = list(positives)
    if not positives:
        raise ValueError("no positive samples")
    if ratio < 1:
        raise ValueError("ratio must be >= 1")
    wanted = ratio * len(positives)
    pool = list(negative_pool)
    if len(pool) < wanted:
        warnings.warn(
            f"negative pool undersupplied: wanted {wanted}, pool has {len(pool)}",
            stacklevel=2,
        )
        chosen = pool
    else:
        chosen = random.Random(seed).sample(pool, wanted)
    negatives = [LabeledSentence(text=t, label=OTHER) for t in chosen]
    return positives + negatives


def _stratified_order(data, seed):
    # shuffle within each label, then interleave labels proportionally
    # (largest-deficit first) so every contiguous cut stays near the
    # global label ratio
    rng = random.Random(seed)
    groups = {}
    for item in data:
        groups.setdefault(item.label, []).append(item)
    for label in groups:
        rng.shuffle(groups[label])
    labels = sorted(groups)
    total = len(data)
    assigned = {label: 0 for label in labels}
    out = []
    for position in range(total):
        target = (position + 1) / total
        best = max(
            labels,
            key=lambda l: (len(groups[l]) * target - assigned[l], len(groups[l]) - assigned[l]),
        )
        out.append(groups[best][assigned[best]])
        assigned[best] += 1
    return out


def split_dataset(data, seed=0) -> DatasetSplit:
    """Stratified shuffle, then cut at floor(0.8 N) and floor(0.9 N)."""
    data = list(data)
    n = len(data)
    if n < 10:
        raise ValueError(f"need at least 10 sentences to split, got {n}")
    ordered = _stratified_order(data, seed)
    cut1 = int(0.8 * n)
    cut2 = int(0.9 * n)
    return DatasetSplit(
        train=tuple(ordered[:cut1]),
        validation=tuple(ordered[cut1:cut2]),
        test=tuple(ordered[cut2:]),
        seed=seed,
    )


def label_ratio(part, label=OWN_CODE) -> float:
    if not part:
        return 0.0
    return sum(1 for s in part if s.label == label) / len(part)
