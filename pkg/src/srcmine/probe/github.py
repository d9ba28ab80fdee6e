"""Minimal GitHub-style repository API client.

Speaks GET /repos/{owner}/{repo} and /repos/{owner}/{repo}/readme against a
configurable base URL (the tests point it at a local stub).  The auth token
comes from an environment variable named in the config.
"""

import base64
import os
import time
from dataclasses import dataclass

import requests

from srcmine.probe.platforms import GitHubSlug


class RepoGone(Exception):
    """The repository answers 404: deleted or made private."""


class ProbeError(Exception):
    """Any other non-retryable API failure."""


class ReadmeEncodingError(ProbeError):
    """README bytes are not valid UTF-8."""


@dataclass(frozen=True)
class RepoMetadata:
    stars: int
    forks: int
    primary_language: str | None
    size_kb: int | None = None

    @property
    def looks_empty(self) -> bool:
        return self.size_kb == 0


@dataclass(frozen=True)
class ReadmeFetch:
    status: str  # ok | missing
    text: str = ""


class GitHubClient:
    def __init__(
        self,
        base_url: str = "https://api.github.com",
        token_env: str = "GITHUB_TOKEN",
        session: requests.Session | None = None,
        limiter=None,
        timeout: float = 30.0,
        max_rate_limit_waits: int = 2,
        sleeper=time.sleep,
        clock=time.time,
    ):
        self.base_url = base_url.rstrip("/")
        self.token_env = token_env
        self.session = session or requests.Session()
        self.limiter = limiter
        self.timeout = timeout
        self.max_rate_limit_waits = max_rate_limit_waits
        self._sleeper = sleeper
        self._clock = clock

    def _headers(self):
        headers = {"Accept": "application/vnd.github+json"}
        token = os.environ.get(self.token_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def _get(self, path):
        waits = 0
        while True:
            if self.limiter is not None:
                self.limiter.acquire()
            response = self.session.get(
                f"{self.base_url}{path}", headers=self._headers(), timeout=self.timeout
            )
            if response.status_code == 403 and self._rate_limited(response):
                if waits >= self.max_rate_limit_waits:
                    raise ProbeError(f"rate limit persisted after {waits} waits: {path}")
                waits += 1
                self._sleeper(self._reset_delay(response))
                continue
            return response

    @staticmethod
    def _rate_limited(response) -> bool:
        if response.headers.get("X-RateLimit-Remaining") == "0":
            return True
        return "rate limit" in response.text.lower()

    def _reset_delay(self, response) -> float:
        reset = response.headers.get("X-RateLimit-Reset")
        if reset:
            try:
                return max(0.0, float(reset) - self._clock())
            except ValueError:
                pass
        return 1.0

    def fetch_repo_metadata(self, slug: GitHubSlug) -> RepoMetadata:
        """Stars, forks, and language; a missing language maps to None."""
        response = self._get(f"/repos/{slug.owner}/{slug.repo}")
        if response.status_code == 404:
            raise RepoGone(str(slug))
        if response.status_code >= 400:
            raise ProbeError(f"repository endpoint returned {response.status_code} for {slug}")
        payload = response.json()
        return RepoMetadata(
            stars=int(payload.get("stargazers_count", 0)),
            forks=int(payload.get("forks_count", 0)),
            primary_language=payload.get("language"),
            size_kb=payload.get("size"),
        )

    def fetch_readme(self, slug: GitHubSlug) -> ReadmeFetch:
        """Main README content, decoded to text; absence is an outcome."""
        response = self._get(f"/repos/{slug.owner}/{slug.repo}/readme")
        if response.status_code == 404:
            return ReadmeFetch(status="missing")
        if response.status_code >= 400:
            raise ProbeError(f"readme endpoint returned {response.status_code} for {slug}")
        content_type = response.headers.get("Content-Type", "")
        try:
            if "json" in content_type:
                payload = response.json()
                raw = base64.b64decode(payload.get("content", ""))
                return ReadmeFetch(status="ok", text=raw.decode("utf-8"))
            return ReadmeFetch(status="ok", text=response.content.decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise ReadmeEncodingError(f"README of {slug} is not valid UTF-8: {exc}") from exc
