"""Statistical battery and corpus aggregations."""

from srcmine.stats.agreement import cohen_kappa
from srcmine.stats.aggregate import aggregate_availability, aggregate_distributions
from srcmine.stats.descriptive import median
from srcmine.stats.keyphrases import keyphrase_frequencies
from srcmine.stats.normality import dagostino_pearson
from srcmine.stats.ranktests import kruskal_wallis, mann_whitney_u, spearman_rho
from srcmine.stats.results import AgreementResult, SampleGroup, TestResult

__all__ = [
    "AgreementResult",
    "SampleGroup",
    "TestResult",
    "aggregate_availability",
    "aggregate_distributions",
    "cohen_kappa",
    "dagostino_pearson",
    "keyphrase_frequencies",
    "kruskal_wallis",
    "mann_whitney_u",
    "median",
    "spearman_rho",
]
