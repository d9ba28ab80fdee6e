"""Corpus-level aggregations: availability rates and repository distributions."""

from collections import defaultdict
from dataclasses import dataclass


@dataclass(frozen=True)
class AvailabilityCell:
    n_papers: int
    n_with_code: int

    @property
    def rate(self) -> float:
        return self.n_with_code / self.n_papers if self.n_papers else 0.0


def _field(item, name):
    if isinstance(item, dict):
        return item[name]
    return getattr(item, name)


def aggregate_availability(verdicts):
    """Count papers and papers-with-code per (venue, year).

    Returns {"cells": {(venue, year): AvailabilityCell},
             "venues": {venue: AvailabilityCell},
             "overall": AvailabilityCell}.
    Empty input yields empty tables and an all-zero overall row.
    """
    by_cell = defaultdict(lambda: [0, 0])
    by_venue = defaultdict(lambda: [0, 0])
    overall = [0, 0]
    for v in verdicts:
        venue = _field(v, "venue")
        year = _field(v, "year")
        positive = bool(_field(v, "has_available_code"))
        for bucket in (by_cell[(venue, year)], by_venue[venue], overall):
            bucket[0] += 1
            bucket[1] += int(positive)
    return {
        "cells": {key: AvailabilityCell(*counts) for key, counts in sorted(by_cell.items())},
        "venues": {key: AvailabilityCell(*counts) for key, counts in sorted(by_venue.items())},
        "overall": AvailabilityCell(*overall),
    }


def aggregate_distributions(records):
    """Platform shares, language shares, and the inaccessible rate.

    Language shares cover accessible GitHub repositories only; a repository
    the platform reports without a language lands in the "Others" bucket.
    """
    platform_counts = defaultdict(int)
    language_counts = defaultdict(int)
    n = 0
    n_inaccessible = 0
    for r in records:
        n += 1
        platform = _field(r, "platform")
        accessible = _field(r, "accessibility") == "accessible"
        platform_counts[platform] += 1
        if not accessible:
            n_inaccessible += 1
        if platform == "GitHub" and accessible:
            language = _field(r, "primary_language")
            language_counts[language if language else "Others"] += 1
    def shares(counts):
        total = sum(counts.values())
        if not total:
            return {}
        return {key: counts[key] / total for key in sorted(counts)}
    return {
        "platforms": shares(platform_counts),
        "languages": shares(language_counts),
        "inaccessible_rate": n_inaccessible / n if n else 0.0,
        "n_records": n,
    }
