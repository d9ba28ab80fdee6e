"""N-gram presence features for context sentences.

Features are named strings: lowercased unigrams, bigrams joined with "_",
a sentence-length bucket, and the position bucket of the removed URL.
Values are clipped at 1 so repeated words count once.
"""

import re

OWN_CODE = "own_code"
OTHER = "other"
LABELS = (OWN_CODE, OTHER)

URL_POSITIONS = ("start", "middle", "end")

_WORD_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list:
    return _WORD_RE.findall(text.lower())


def length_bucket(n_tokens: int) -> str:
    if n_tokens <= 5:
        return "short"
    if n_tokens <= 15:
        return "medium"
    return "long"


def featurize(text: str, url_position: str | None = None) -> dict:
    """Sparse presence features for one URL-stripped sentence.

    url_position is the bucket where the removed URL sat ("start",
    "middle", "end"); mentions in scientific prose overwhelmingly close
    the sentence, so the bucket defaults to "end" when the caller has no
    position information.
    """
    tokens = tokenize(text)
    if not tokens:
        return {}
    features = {}
    for token in tokens:
        features[token] = 1.0
    for first, second in zip(tokens, tokens[1:]):
        features[f"{first}_{second}"] = 1.0
    features[f"len:{length_bucket(len(tokens))}"] = 1.0
    position = url_position or "end"
    if position not in URL_POSITIONS:
        raise ValueError(f"bad url position bucket: {position!r}")
    features[f"urlpos:{position}"] = 1.0
    return features


def url_position_bucket(char_offset: int, sentence_length: int) -> str:
    """Bucket a URL's original character offset within its sentence."""
    if sentence_length <= 0:
        return "end"
    frac = char_offset / sentence_length
    if frac < 1.0 / 3.0:
        return "start"
    if frac < 2.0 / 3.0:
        return "middle"
    return "end"


def build_vocabulary(feature_dicts) -> dict:
    """Term -> column index, in first-seen order."""
    vocab = {}
    for fd in feature_dicts:
        for term in fd:
            if term not in vocab:
                vocab[term] = len(vocab)
    return vocab
