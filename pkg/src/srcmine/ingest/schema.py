"""Paper corpus records and the line-delimited corpus reader.

Corpus schema, one JSON record per line:
  {paper_id, venue, year, title, abstract,
   sections: [{name, is_references, text}]}

Section text is segmented into sentences at parse time; URL tokens broken
by line-wrap hyphenation are rejoined first and remembered so downstream
mentions can be flagged as reconstructed.
"""

import json
import re
from dataclasses import dataclass, field

from srcmine.ingest.sentences import segment_sentences

REFERENCE_SECTION_NAMES = {"references", "bibliography"}

# "...https://host/pa-\n th..." -> joined URL token
_HYPHEN_WRAP_RE = re.compile(r"(\S*://\S*)-[ \t]*\n[ \t]*(\S+)")


class CorpusError(Exception):
    """The corpus as a whole is unusable (empty, or nothing parses)."""


@dataclass(frozen=True)
class Section:
    name: str
    is_references: bool
    sentences: tuple
    joined_url_tokens: tuple = ()


@dataclass(frozen=True)
class PaperDocument:
    paper_id: str
    venue: str
    year: int
    title: str
    abstract: str
    sections: tuple


@dataclass(frozen=True)
class UrlMention:
    paper_id: str
    raw_url: str
    normalized_url: str
    context_sentence: str
    section_name: str
    sentence_index: int
    reconstructed: bool = False


@dataclass
class CorpusParseResult:
    documents: list = field(default_factory=list)
    errors: list = field(default_factory=list)  # (line_number, message)


def dehyphenate_urls(text):
    """Rejoin URL tokens split by a hyphen at a line break.

    Returns (new_text, joined_tokens).  Only the simple wrap case is
    repaired; anything fancier is out of scope.
    """
    joined = []

    def _join(match):
        token = match.group(1) + match.group(2)
        joined.append(token)
        return token

    prev = None
    while prev != text:
        prev = text
        text = _HYPHEN_WRAP_RE.sub(_join, text)
    return text, tuple(joined)


def section_from_record(raw):
    name = str(raw.get("name", ""))
    flag = raw.get("is_references")
    if flag is None:
        flag = name.strip().lower() in REFERENCE_SECTION_NAMES
    text, joined = dehyphenate_urls(str(raw.get("text", "")))
    return Section(
        name=name,
        is_references=bool(flag),
        sentences=tuple(segment_sentences(text)),
        joined_url_tokens=joined,
    )


def document_from_record(record):
    """Validate one corpus record and build a PaperDocument."""
    if not isinstance(record, dict):
        raise ValueError("record is not an object")
    paper_id = record.get("paper_id")
    if not paper_id:
        raise ValueError("missing paper_id")
    year = record.get("year")
    if not isinstance(year, int) or not 1900 <= year <= 2100:
        raise ValueError(f"year out of range: {year!r}")
    sections = record.get("sections", [])
    if not isinstance(sections, list):
        raise ValueError("sections must be a list")
    return PaperDocument(
        paper_id=str(paper_id),
        venue=str(record.get("venue", "")),
        year=year,
        title=str(record.get("title", "")),
        abstract=str(record.get("abstract", "")),
        sections=tuple(section_from_record(s) for s in sections),
    )


def document_to_payload(doc: PaperDocument) -> dict:
    """Serialized form of a parsed document (sentences already segmented)."""
    return {
        "paper_id": doc.paper_id,
        "venue": doc.venue,
        "year": doc.year,
        "title": doc.title,
        "abstract": doc.abstract,
        "sections": [
            {
                "name": s.name,
                "is_references": s.is_references,
                "sentences": list(s.sentences),
                "joined_url_tokens": list(s.joined_url_tokens),
            }
            for s in doc.sections
        ],
    }


def document_from_payload(payload: dict) -> PaperDocument:
    return PaperDocument(
        paper_id=payload["paper_id"],
        venue=payload["venue"],
        year=payload["year"],
        title=payload.get("title", ""),
        abstract=payload.get("abstract", ""),
        sections=tuple(
            Section(
                name=s["name"],
                is_references=s["is_references"],
                sentences=tuple(s["sentences"]),
                joined_url_tokens=tuple(s.get("joined_url_tokens", [])),
            )
            for s in payload.get("sections", [])
        ),
    )


def parse_corpus(lines) -> CorpusParseResult:
    """Parse a line-delimited corpus stream.

    Malformed lines become (line_number, message) diagnostics; a corpus in
    which nothing parses raises CorpusError.
    """
    result = CorpusParseResult()
    seen_ids = set()
    n_lines = 0
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        n_lines += 1
        try:
            record = json.loads(line)
            doc = document_from_record(record)
            if doc.paper_id in seen_ids:
                raise ValueError(f"duplicate paper_id {doc.paper_id!r}")
            seen_ids.add(doc.paper_id)
        except (json.JSONDecodeError, ValueError) as exc:
            result.errors.append((line_number, str(exc)))
            continue
        result.documents.append(doc)
    if n_lines == 0:
        raise CorpusError("empty corpus")
    if not result.documents:
        raise CorpusError(f"no record parsed ({len(result.errors)} malformed lines)")
    return result
