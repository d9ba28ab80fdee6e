"""Repository probing: platforms, accessibility, metadata, caching."""

from srcmine.probe.access import AccessOutcome, ProbePolicy, check_accessibility
from srcmine.probe.cache import ProbeCache
from srcmine.probe.github import (
    GitHubClient,
    ProbeError,
    ReadmeEncodingError,
    ReadmeFetch,
    RepoGone,
    RepoMetadata,
)
from srcmine.probe.platforms import GitHubSlug, identify_platform, parse_github_slug
from srcmine.probe.ratelimit import TokenBucket
from srcmine.probe.records import (
    ACCESSIBILITY_STATUSES,
    PLATFORMS,
    RepoRecord,
    record_from_json,
    record_to_json,
)
from srcmine.probe.runner import probe_url

__all__ = [
    "ACCESSIBILITY_STATUSES",
    "AccessOutcome",
    "GitHubClient",
    "GitHubSlug",
    "PLATFORMS",
    "ProbeCache",
    "ProbeError",
    "ProbePolicy",
    "ReadmeEncodingError",
    "ReadmeFetch",
    "RepoGone",
    "RepoMetadata",
    "RepoRecord",
    "TokenBucket",
    "check_accessibility",
    "identify_platform",
    "parse_github_slug",
    "probe_url",
    "record_from_json",
    "record_to_json",
]
