"""Term-frequency keyphrase baseline over paper abstracts.

Ranks stopword-filtered unigrams and bigrams by document frequency; the
ranked list feeds external word-cloud style visualization.
"""

import re
from collections import Counter

_TOKEN_RE = re.compile(r"[a-z0-9]+(?:[-'][a-z0-9]+)*")

STOPWORDS = frozenset("""
a about above after again all also an and any are as at be because been
before being below between both but by can could did do does doing down
during each few for from further had has have having he her here hers him
his how i if in into is it its itself just me more most my no nor not of
off on once only or other our ours out over own same she should so some
such than that the their theirs them then there these they this those
through to too under until up very was we were what when where which
while who whom why will with would you your yours
""".split())


def _terms(text):
    tokens = [t for t in _TOKEN_RE.findall(text.lower()) if t not in STOPWORDS]
    bigram_tokens = _TOKEN_RE.findall(text.lower())
    terms = set(tokens)
    for first, second in zip(bigram_tokens, bigram_tokens[1:]):
        if first in STOPWORDS or second in STOPWORDS:
            continue
        terms.add(f"{first} {second}")
    return terms


def keyphrase_frequencies(abstracts, k):
    """Top-k terms by document frequency, ties broken alphabetically."""
    if k < 1:
        raise ValueError("k must be >= 1")
    df = Counter()
    for text in abstracts:
        df.update(_terms(text))
    ranked = sorted(df.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]
