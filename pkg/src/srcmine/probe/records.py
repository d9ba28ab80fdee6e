"""Probe result records and their line-delimited persistence form."""

import json
from dataclasses import asdict, dataclass
from datetime import datetime, timezone

PLATFORMS = (
    "GitHub",
    "Bitbucket",
    "GoogleCode",
    "CodaLab",
    "GitLab",
    "SourceForge",
    "FtpServer",
    "OtherWeb",
)

# "connection_error" is split out from dns_failure so connect-refused and
# unresolvable hosts stay distinguishable
ACCESSIBILITY_STATUSES = (
    "accessible",
    "http_error",
    "timeout",
    "dns_failure",
    "connection_error",
    "no_code_content",
)


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class RepoRecord:
    normalized_url: str
    platform: str
    accessibility: str
    http_status: int | None = None
    checked_at: str = ""
    stars: int | None = None
    forks: int | None = None
    primary_language: str | None = None
    readme_ref: str | None = None

    def __post_init__(self):
        if self.platform not in PLATFORMS:
            raise ValueError(f"unknown platform {self.platform!r}")
        if self.accessibility not in ACCESSIBILITY_STATUSES:
            raise ValueError(f"unknown accessibility status {self.accessibility!r}")
        metadata_allowed = self.platform == "GitHub" and self.accessibility == "accessible"
        if not metadata_allowed and any(
            v is not None for v in (self.stars, self.forks, self.primary_language)
        ):
            raise ValueError("stars/forks/language only valid for accessible GitHub repos")
        for count in (self.stars, self.forks):
            if count is not None and count < 0:
                raise ValueError("counts must be non-negative")


def record_to_json(record: RepoRecord) -> str:
    return json.dumps(asdict(record), sort_keys=True)


def record_from_json(line: str) -> RepoRecord:
    return RepoRecord(**json.loads(line))
