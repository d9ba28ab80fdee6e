"""Cue-phrase rule classifier for context sentences.

Cue lists are configuration data.  The defaults carry the six canonical
phrases observed in scholarly prose (three each way) plus one documented
generalization: a first-person subject together with a code word and an
availability word reads as the paper's own release.  Negative cues veto
positive ones.
"""

import re
from dataclasses import dataclass, field

from srcmine.classify.features import OTHER, OWN_CODE

POSITIVE_CUES = (
    r"\bcode\s+is\s+(?:publicly\s+)?(?:public|available)\b",
    r"\bwe\s+release\b",
    r"\b(?:sources?|code|implementation)\s+of\s+our\s+\w+\s+(?:are|is)\s+available\b",
)

NEGATIVE_CUES = (
    r"\bdata\s+(?:are|is)\s+available\b",
    r"\bthanks?\s+the\s+authors?\b",
    r"\bproofs?\s+can\s+be\s+found\b",
    r"\btheir\s+(?:code|implementation|source)\b",
)

_FIRST_PERSON = r"\b(?:we|our|ours|us)\b"
_CODE_WORD = r"\b(?:code|codes|implementations?|sources?|software)\b"
_AVAILABILITY_WORD = r"\b(?:available|release[sd]?|releasing|public(?:ly)?|provided?|hosted)\b"


@dataclass
class RuleConfig:
    positive: tuple = POSITIVE_CUES
    negative: tuple = NEGATIVE_CUES
    use_first_person_generalization: bool = True
    _compiled: dict = field(default_factory=dict, repr=False)

    def _patterns(self, kind, raw):
        if kind not in self._compiled:
            self._compiled[kind] = [re.compile(p, re.IGNORECASE) for p in raw]
        return self._compiled[kind]

    def positive_patterns(self):
        return self._patterns("positive", self.positive)

    def negative_patterns(self):
        return self._patterns("negative", self.negative)


DEFAULT_RULES = RuleConfig()

_GENERALIZATION = tuple(
    re.compile(p, re.IGNORECASE) for p in (_FIRST_PERSON, _CODE_WORD, _AVAILABILITY_WORD)
)


def rule_classify(text: str, config: RuleConfig = DEFAULT_RULES) -> str:
    """own_code iff a positive cue fires and no negative cue does."""
    if any(p.search(text) for p in config.negative_patterns()):
        return OTHER
    if any(p.search(text) for p in config.positive_patterns()):
        return OWN_CODE
    if config.use_first_person_generalization and all(
        p.search(text) for p in _GENERALIZATION
    ):
        return OWN_CODE
    return OTHER
