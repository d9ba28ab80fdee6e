"""README segmentation into header + subtext units.

Every ATX header (1-6 '#') and Setext header (=== / --- underline) starts
a new unit regardless of level; anything before the first header becomes a
level-0 preamble unit.  Headers inside fenced code blocks do not split.
Each unit keeps its raw source span so joining the spans reproduces the
input byte for byte.
"""

import re
from dataclasses import dataclass, field

CATEGORIES = (
    "Acknowledgment",
    "Citation",
    "Installation",
    "License",
    "Others",
    "Resource",
    "Technicality",
    "Usage",
)

_ATX_RE = re.compile(r"^ {0,3}(#{1,6})(?:\s+(.*?))?\s*$")
_SETEXT_RE = re.compile(r"^ {0,3}(=+|-+)\s*$")
_FENCE_RE = re.compile(r"^ {0,3}(```+|~~~+)")


@dataclass
class ReadmeUnit:
    header_text: str
    header_level: int  # 0 = preamble
    subtext: str
    labels: frozenset = frozenset()
    raw: str = ""

    def __post_init__(self):
        unknown = set(self.labels) - set(CATEGORIES)
        if unknown:
            raise ValueError(f"labels outside the eight-category scheme: {sorted(unknown)}")


@dataclass
class ReadmeDoc:
    repo_url: str
    raw_markdown: str
    units: list = field(default_factory=list)
    non_english: bool = False
    too_simple: bool = False


def _strip_atx_title(rest):
    if rest is None:
        return ""
    return re.sub(r"\s+#+\s*$", "", rest).strip()


class _UnitBuilder:
    def __init__(self):
        self.units = []
        self.header = ""
        self.level = 0
        self.body = []
        self.raw = []

    def flush(self):
        if self.raw:
            # subtext is the display form (CRLF normalized); raw keeps bytes
            subtext = "".join(self.body).replace("\r\n", "\n").strip("\n")
            self.units.append(
                ReadmeUnit(
                    header_text=self.header,
                    header_level=self.level,
                    subtext=subtext,
                    raw="".join(self.raw),
                )
            )
        self.header = ""
        self.level = 0
        self.body = []
        self.raw = []

    def open_unit(self, header, level, raw_lines):
        self.flush()
        self.header = header
        self.level = level
        self.raw.extend(raw_lines)

    def add_body(self, line):
        self.body.append(line)
        self.raw.append(line)


def segment_units(markdown: str) -> list:
    """Split markdown into ReadmeUnits; empty input gives no units."""
    if not markdown:
        return []
    builder = _UnitBuilder()
    in_fence = False
    fence_char = ""
    for line in markdown.splitlines(keepends=True):
        stripped = line.rstrip("\n")
        fence = _FENCE_RE.match(stripped)
        if in_fence:
            builder.add_body(line)
            if fence and fence.group(1)[0] == fence_char:
                in_fence = False
            continue
        if fence:
            in_fence = True
            fence_char = fence.group(1)[0]
            builder.add_body(line)
            continue
        atx = _ATX_RE.match(stripped)
        if atx:
            builder.open_unit(_strip_atx_title(atx.group(2)), len(atx.group(1)), [line])
            continue
        setext = _SETEXT_RE.match(stripped)
        if setext and builder.body:
            prev = builder.body[-1]
            prev_text = prev.strip()
            # underline promotes the preceding non-blank line to a header
            if prev_text and not _SETEXT_RE.match(prev.rstrip("\n")):
                builder.body.pop()
                raw_header = builder.raw.pop()
                level = 1 if setext.group(1)[0] == "=" else 2
                builder.open_unit(prev_text, level, [raw_header, line])
                continue
        builder.add_body(line)
    builder.flush()
    return builder.units
