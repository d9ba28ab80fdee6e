"""Rule-based sentence segmentation.

Splits at terminal punctuation followed by whitespace, guarded so that a
boundary never lands inside a whitespace-delimited token (URLs survive
intact) and never after common abbreviations.  Dependency-free and
deterministic on purpose.
"""

import re

# token endings that do not terminate a sentence
_ABBREVIATIONS = ("e.g.", "i.e.", "etc.", "vs.", "cf.", "al.", "fig.", "eq.", "resp.")

_WHITESPACE_RE = re.compile(r"\s+")


def _token_before(text, end):
    start = end
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    return text[start:end]


def _is_abbreviation(text, end):
    token = _token_before(text, end).lower()
    if token in _ABBREVIATIONS:
        if token == "al.":
            rest = text[: end - len(token)].rstrip()
            return rest.lower().endswith("et")
        return True
    # single-letter initials such as "J."
    return len(token) == 2 and token[0].isalpha() and token[1] == "."


def _starts_sentence(text, pos):
    while pos < len(text) and text[pos].isspace():
        pos += 1
    if pos >= len(text):
        return True
    ch = text[pos]
    return ch.isupper() or ch.isdigit() or ch in "\"'(“["


def segment_sentences(text: str) -> list:
    """Split prose into sentences; whitespace inside sentences is collapsed."""
    if not text or not text.strip():
        return []
    boundaries = []
    for i, ch in enumerate(text):
        if ch not in ".!?":
            continue
        if i + 1 < len(text) and not text[i + 1].isspace():
            continue
        if ch == "." and _is_abbreviation(text, i + 1):
            continue
        if not _starts_sentence(text, i + 1):
            continue
        boundaries.append(i + 1)
    sentences = []
    start = 0
    for end in boundaries:
        chunk = _WHITESPACE_RE.sub(" ", text[start:end]).strip()
        if chunk:
            sentences.append(chunk)
        start = end
    tail = _WHITESPACE_RE.sub(" ", text[start:]).strip()
    if tail:
        sentences.append(tail)
    return sentences
