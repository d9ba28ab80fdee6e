"""URL mention extraction and normalization.

A URL token is a maximal run of non-whitespace starting with http, https,
or ftp; sentence punctuation glued onto the end is stripped during
normalization, with balanced closing parentheses/brackets kept.
"""

import re
from urllib.parse import urlsplit, urlunsplit

from srcmine.ingest.schema import UrlMention

URL_RE = re.compile(r"\b(?:https?|ftp)://\S+", re.IGNORECASE)

_ALWAYS_STRIP = ".,;:!?\"'"
_BALANCED = {")": "(", "]": "["}


def normalize_url(raw: str) -> str:
    """Canonical form: punctuation-stripped, scheme and host lowercased."""
    if not URL_RE.match(raw):
        raise ValueError(f"not an http/https/ftp URL: {raw!r}")
    url = raw
    while url:
        last = url[-1]
        if last in _ALWAYS_STRIP:
            candidate = url[:-1]
        elif last in _BALANCED and url.count(_BALANCED[last]) < url.count(last):
            candidate = url[:-1]
        else:
            break
        if not URL_RE.match(candidate):
            break  # stripping would destroy the URL itself
        url = candidate
    parts = urlsplit(url)
    return urlunsplit(
        (parts.scheme.lower(), parts.netloc.lower(), parts.path, parts.query, parts.fragment)
    )


def _strip_urls(sentence, spans):
    out = []
    prev = 0
    for start, end in spans:
        out.append(sentence[prev:start])
        prev = end
    out.append(sentence[prev:])
    return re.sub(r"\s+", " ", "".join(out)).strip()


def extract_url_mentions(doc) -> list:
    """One UrlMention per URL occurrence in non-reference sections.

    The context sentence is the containing sentence with every URL token
    removed and whitespace collapsed; duplicates of the same URL in
    different sentences stay separate mentions.
    """
    mentions = []
    for section in doc.sections:
        if section.is_references:
            continue
        joined = section.joined_url_tokens
        for sentence_index, sentence in enumerate(section.sentences):
            matches = list(URL_RE.finditer(sentence))
            if not matches:
                continue
            context = _strip_urls(sentence, [m.span() for m in matches])
            for m in matches:
                raw = m.group(0)
                mentions.append(
                    UrlMention(
                        paper_id=doc.paper_id,
                        raw_url=raw,
                        normalized_url=normalize_url(raw),
                        context_sentence=context,
                        section_name=section.name,
                        sentence_index=sentence_index,
                        reconstructed=any(raw in tok or tok in raw for tok in joined),
                    )
                )
    return mentions
