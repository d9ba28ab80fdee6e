"""Corpus ingestion: records, sentences, URL mentions."""

from srcmine.ingest.schema import (
    CorpusError,
    CorpusParseResult,
    PaperDocument,
    Section,
    UrlMention,
    parse_corpus,
)
from srcmine.ingest.sentences import segment_sentences
from srcmine.ingest.tei import tei_to_record
from srcmine.ingest.urls import URL_RE, extract_url_mentions, normalize_url

__all__ = [
    "CorpusError",
    "CorpusParseResult",
    "PaperDocument",
    "Section",
    "URL_RE",
    "UrlMention",
    "extract_url_mentions",
    "normalize_url",
    "parse_corpus",
    "segment_sentences",
    "tei_to_record",
]
