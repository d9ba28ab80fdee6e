"""Own-code sentence classification: rules, linear baseline, remote hook."""

from srcmine.classify.dataset import (
    DatasetSplit,
    LabeledSentence,
    build_training_set,
    split_dataset,
)
from srcmine.classify.features import LABELS, OTHER, OWN_CODE, featurize
from srcmine.classify.model import (
    EvalMetrics,
    Hyperparams,
    LinearTextModel,
    Prediction,
    TrainingDiverged,
    evaluate,
    load_model,
    predict,
    save_model,
    train,
)
from srcmine.classify.remote import (
    ProtocolError,
    RetryPolicy,
    TransportError,
    classify_batch_remote,
)
from srcmine.classify.rules import DEFAULT_RULES, RuleConfig, rule_classify
from srcmine.classify.verdict import PaperVerdict, classify_paper

__all__ = [
    "DEFAULT_RULES",
    "DatasetSplit",
    "EvalMetrics",
    "Hyperparams",
    "LABELS",
    "LabeledSentence",
    "LinearTextModel",
    "OTHER",
    "OWN_CODE",
    "PaperVerdict",
    "Prediction",
    "ProtocolError",
    "RetryPolicy",
    "RuleConfig",
    "TrainingDiverged",
    "TransportError",
    "build_training_set",
    "classify_batch_remote",
    "classify_paper",
    "evaluate",
    "featurize",
    "load_model",
    "predict",
    "rule_classify",
    "save_model",
    "split_dataset",
    "train",
]
