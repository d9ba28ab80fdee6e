"""Keyword baseline mapping unit headers to categories.

The keyword table is configuration data; headers matching nothing land in
Others.  Matching is case-insensitive substring over the header only.
"""

HEADER_KEYWORDS = {
    "Installation": ("install", "setup", "requirement", "dependenc", "prerequisite"),
    "Usage": ("usage", "run", "how to", "quick start", "quickstart", "example", "getting started"),
    "Citation": ("cite", "citation", "bibtex", "contact"),
    "License": ("license", "licence", "copyright"),
    "Acknowledgment": ("acknowledg", "reference", "credit", "thanks"),
    "Resource": ("data", "dataset", "download", "pretrained", "embedding", "resource"),
    "Technicality": ("introduction", "overview", "result", "model", "architecture", "structure"),
}


def rule_label(header_text: str, keywords=HEADER_KEYWORDS) -> frozenset:
    """Category subset for one header; {Others} when nothing matches."""
    lowered = header_text.lower()
    matched = {
        category
        for category, needles in keywords.items()
        if any(needle in lowered for needle in needles)
    }
    return frozenset(matched) if matched else frozenset({"Others"})
