"""README parsing, flags, and category labeling."""

from srcmine.readme.dataset import UnitRecord, read_units, write_units
from srcmine.readme.flags import (
    DEFAULT_FLAGS,
    FlagConfig,
    detect_non_english,
    detect_too_simple,
)
from srcmine.readme.model import (
    DualFieldModel,
    LabelPrediction,
    MultilabelMetrics,
    UnitDatasetSplit,
    UnitSample,
    evaluate_multilabel,
    load_dual_model,
    multilabel_metrics,
    predict_labels,
    save_dual_model,
    split_units,
    train_multilabel,
)
from srcmine.readme.rules import HEADER_KEYWORDS, rule_label
from srcmine.readme.segment import CATEGORIES, ReadmeDoc, ReadmeUnit, segment_units


def analyze_readme(repo_url: str, markdown: str, config=DEFAULT_FLAGS) -> ReadmeDoc:
    """Segment one README and compute its file-level flags."""
    units = segment_units(markdown)
    return ReadmeDoc(
        repo_url=repo_url,
        raw_markdown=markdown,
        units=units,
        non_english=detect_non_english(markdown, config),
        too_simple=detect_too_simple(markdown, units, config),
    )


__all__ = [
    "CATEGORIES",
    "DEFAULT_FLAGS",
    "DualFieldModel",
    "FlagConfig",
    "HEADER_KEYWORDS",
    "LabelPrediction",
    "MultilabelMetrics",
    "ReadmeDoc",
    "ReadmeUnit",
    "UnitDatasetSplit",
    "UnitRecord",
    "UnitSample",
    "analyze_readme",
    "detect_non_english",
    "detect_too_simple",
    "evaluate_multilabel",
    "load_dual_model",
    "multilabel_metrics",
    "predict_labels",
    "read_units",
    "rule_label",
    "save_dual_model",
    "segment_units",
    "split_units",
    "train_multilabel",
    "write_units",
]
