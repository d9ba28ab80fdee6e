"""Cohen's kappa, medians, availability tables, distributions, keyphrases."""

import random

import pytest

from srcmine.stats.agreement import cohen_kappa
from srcmine.stats.aggregate import aggregate_availability, aggregate_distributions
from srcmine.stats.descriptive import median
from srcmine.stats.keyphrases import keyphrase_frequencies


class TestMedian:
    def test_single(self):
        assert median([11]) == 11

    def test_even_length(self):
        assert median([17, 30, 113.5, 71.5]) == 50.75

    def test_constructed_sample_reproduces_cvpr_median(self):
        # even-length sample built around the 113.5 published value
        sample = [4, 100, 127, 5000]
        assert median(sample) == 113.5

    def test_empty_error(self):
        with pytest.raises(ValueError):
            median([])


class TestCohenKappa:
    def test_identical_annotations(self):
        result = cohen_kappa(list("aabbc"), list("aabbc"))
        assert result.kappa == 1.0

    def test_worked_confusion_matrix(self):
        # agreement matrix [[20, 5], [10, 15]] over 50 items
        a = ["y"] * 25 + ["n"] * 25
        b = ["y"] * 20 + ["n"] * 5 + ["y"] * 10 + ["n"] * 15
        result = cohen_kappa(a, b)
        assert result.observed_agreement == 0.7
        assert result.expected_agreement == 0.5
        assert result.kappa == 0.4

    def test_independent_annotators_near_zero(self):
        rng = random.Random(0)
        a = [rng.choice("xy") for _ in range(10_000)]
        b = [rng.choice("xy") for _ in range(10_000)]
        assert abs(cohen_kappa(a, b).kappa) < 0.05

    def test_degenerate_marginals(self):
        assert cohen_kappa(["u", "u"], ["u", "u"]).kappa == 1.0
        with pytest.raises(ValueError):
            cohen_kappa([], [])
        with pytest.raises(ValueError):
            cohen_kappa(["a"], ["a", "b"])


class TestAvailability:
    def test_quarter(self):
        verdicts = [
            {"venue": "ACL", "year": 2019, "has_available_code": i == 0} for i in range(4)
        ]
        table = aggregate_availability(verdicts)
        assert table["overall"].rate == 0.25
        assert table["cells"][("ACL", 2019)].n_papers == 4

    def test_empty(self):
        table = aggregate_availability([])
        assert table["cells"] == {}
        assert table["overall"].n_papers == 0

    def test_headline_rate_fixture(self):
        # 200 verdicts planted at 41 positives: overall exactly 20.5%
        verdicts = [
            {"venue": "V", "year": 2015 + (i % 5), "has_available_code": i < 41}
            for i in range(200)
        ]
        table = aggregate_availability(verdicts)
        assert table["overall"].rate == 41 / 200
        assert table["overall"].rate == 0.205

    def test_totals_row_consistent(self):
        rng = random.Random(3)
        verdicts = [
            {
                "venue": rng.choice(["A", "B"]),
                "year": rng.choice([2018, 2019]),
                "has_available_code": rng.random() < 0.3,
            }
            for _ in range(97)
        ]
        table = aggregate_availability(verdicts)
        assert sum(c.n_papers for c in table["cells"].values()) == table["overall"].n_papers
        assert sum(c.n_with_code for c in table["cells"].values()) == table["overall"].n_with_code


class _Rec:
    def __init__(self, platform, accessibility, primary_language=None):
        self.platform = platform
        self.accessibility = accessibility
        self.primary_language = primary_language


class TestDistributions:
    def test_platform_shares(self):
        records = [_Rec("GitHub", "accessible", "Python")] * 3 + [
            _Rec("SourceForge", "accessible")
        ]
        result = aggregate_distributions(records)
        assert result["platforms"]["GitHub"] == 0.75
        assert result["platforms"]["SourceForge"] == 0.25

    def test_inaccessible_rate(self):
        records = [_Rec("GitHub", "accessible", "Python")] * 23 + [
            _Rec("GitHub", "http_error"),
            _Rec("OtherWeb", "timeout"),
        ]
        assert aggregate_distributions(records)["inaccessible_rate"] == 2 / 25

    def test_language_bucketing(self):
        records = [
            _Rec("GitHub", "accessible", "Python"),
            _Rec("GitHub", "accessible", "Python"),
            _Rec("GitHub", "accessible", "C++"),
            _Rec("GitHub", "accessible", None),
            _Rec("Bitbucket", "accessible"),  # non-GitHub never counts
        ]
        languages = aggregate_distributions(records)["languages"]
        assert languages == {"C++": 0.25, "Others": 0.25, "Python": 0.5}

    def test_shares_sum_to_one(self):
        rng = random.Random(5)
        records = [
            _Rec(rng.choice(["GitHub", "GitLab", "OtherWeb"]),
                 rng.choice(["accessible", "http_error"]),
                 rng.choice(["Python", None]))
            for _ in range(50)
        ]
        result = aggregate_distributions(records)
        assert sum(result["platforms"].values()) == pytest.approx(1.0)
        if result["languages"]:
            assert sum(result["languages"].values()) == pytest.approx(1.0)


class TestKeyphrases:
    def test_common_term_ranks_first(self):
        abstracts = [f"this dataset enables task {i}" for i in range(5)]
        ranked = keyphrase_frequencies(abstracts, 3)
        assert ranked[0][0] == "dataset"
        assert ranked[0][1] == 5

    def test_k_larger_than_vocabulary(self):
        ranked = keyphrase_frequencies(["alpha beta"], 100)
        terms = {t for t, _ in ranked}
        assert terms == {"alpha", "beta", "alpha beta"}

    def test_planted_frequency_order(self):
        # deterministic construction: term_i appears in exactly 20 - i abstracts
        planted = [f"term{i}" for i in range(5)]
        abstracts = []
        for doc in range(20):
            words = [planted[i] for i in range(5) if doc < 20 - i]
            abstracts.append("filler " + " unrelated ".join(words))
        ranked = keyphrase_frequencies(abstracts, 50)
        planted_in_rank = [t for t, _ in ranked if t in planted]
        assert planted_in_rank == planted
        counts = dict(ranked)
        assert [counts[t] for t in planted] == [20, 19, 18, 17, 16]

    def test_stopwords_excluded(self):
        ranked = keyphrase_frequencies(["the of and method"], 10)
        assert all(t.split()[0] not in ("the", "of", "and") for t, _ in ranked)

    def test_empty_and_bad_k(self):
        assert keyphrase_frequencies([], 3) == []
        with pytest.raises(ValueError):
            keyphrase_frequencies(["x"], 0)
