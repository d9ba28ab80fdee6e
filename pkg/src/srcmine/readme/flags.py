"""File-level README flags: Non-English and Too-Simple pre-screens."""

from dataclasses import dataclass


@dataclass
class FlagConfig:
    non_latin_letter_threshold: float = 0.10
    min_word_count: int = 40
    thin_subtext_chars: int = 200


DEFAULT_FLAGS = FlagConfig()


def non_latin_letter_fraction(text: str) -> float:
    letters = [ch for ch in text if ch.isalpha()]
    if not letters:
        return 0.0
    return sum(1 for ch in letters if ord(ch) > 127) / len(letters)


def detect_non_english(text: str, config: FlagConfig = DEFAULT_FLAGS) -> bool:
    """True when letters outside basic Latin exceed the threshold fraction."""
    return non_latin_letter_fraction(text) > config.non_latin_letter_threshold


def detect_too_simple(markdown: str, units, config: FlagConfig = DEFAULT_FLAGS) -> bool:
    """Pre-screen for files too thin to run the code from; humans confirm.

    Fires when the whole file is under the word minimum, or when there is
    at most one unit and its subtext is short.
    """
    if len(markdown.split()) < config.min_word_count:
        return True
    if len(units) <= 1:
        subtext = units[0].subtext if units else ""
        if len(subtext) < config.thin_subtext_chars:
            return True
    return False
