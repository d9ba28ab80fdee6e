"""Lifting per-mention verdicts to a per-paper verdict by union."""

from dataclasses import dataclass, field

from srcmine.classify.features import OWN_CODE


@dataclass(frozen=True)
class PaperVerdict:
    paper_id: str
    has_available_code: bool
    positive_mentions: tuple = ()
    venue: str = ""
    year: int = 0

    def __post_init__(self):
        if self.has_available_code != bool(self.positive_mentions):
            raise ValueError("has_available_code must match positive_mentions")


def classify_paper(paper_id, mention_verdicts, venue="", year=0) -> PaperVerdict:
    """OR over mention-level verdicts; no mentions means no available code.

    mention_verdicts is a sequence of (UrlMention, label) pairs.
    """
    positives = tuple(m for m, label in mention_verdicts if label == OWN_CODE)
    return PaperVerdict(
        paper_id=paper_id,
        has_available_code=bool(positives),
        positive_mentions=positives,
        venue=venue,
        year=year,
    )
