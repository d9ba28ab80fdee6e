"""Hosting platform identification and GitHub slug parsing."""

from dataclasses import dataclass
from urllib.parse import urlsplit

PLATFORM_HOSTS = {
    "github.com": "GitHub",
    "bitbucket.org": "Bitbucket",
    "code.google.com": "GoogleCode",
    "googlecode.com": "GoogleCode",
    "codalab.org": "CodaLab",
    "gitlab.com": "GitLab",
    "sourceforge.net": "SourceForge",
}


def identify_platform(url: str) -> str:
    """Host-suffix match against the platform table; OtherWeb otherwise."""
    parts = urlsplit(url)
    if parts.scheme.lower() == "ftp":
        return "FtpServer"
    host = parts.netloc.lower().rsplit("@", 1)[-1].split(":")[0]
    for suffix, platform in PLATFORM_HOSTS.items():
        if host == suffix or host.endswith("." + suffix):
            return platform
    return "OtherWeb"


@dataclass(frozen=True)
class GitHubSlug:
    owner: str
    repo: str

    def __post_init__(self):
        if not self.owner or not self.repo:
            raise ValueError("owner and repo must be non-empty")
        if "/" in self.owner or "/" in self.repo:
            raise ValueError("owner and repo must be single path segments")

    def __str__(self):
        return f"{self.owner}/{self.repo}"


def parse_github_slug(url: str) -> GitHubSlug:
    """owner/repo from a GitHub URL; deeper paths truncate to the repo root."""
    parts = urlsplit(url)
    segments = [s for s in parts.path.split("/") if s]
    if len(segments) < 2:
        raise ValueError(f"not a repository URL (needs owner and repo): {url}")
    repo = segments[1]
    if repo.endswith(".git"):
        repo = repo[: -len(".git")]
    return GitHubSlug(owner=segments[0], repo=repo)
