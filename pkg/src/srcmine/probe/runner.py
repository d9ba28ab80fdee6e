"""Probe orchestration: cache, rate limit, accessibility, metadata, README."""

import hashlib
import os

from srcmine.probe.access import AccessOutcome, ProbePolicy, check_accessibility
from srcmine.probe.cache import ProbeCache
from srcmine.probe.github import GitHubClient, RepoGone
from srcmine.probe.platforms import identify_platform, parse_github_slug
from srcmine.probe.records import RepoRecord, utc_now_iso


def _store_readme(readme_dir, url, text) -> str:
    os.makedirs(readme_dir, exist_ok=True)
    name = hashlib.sha256(url.encode()).hexdigest()[:24] + ".md"
    path = os.path.join(readme_dir, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return name


def probe_url(
    url: str,
    cache: ProbeCache | None = None,
    policy: ProbePolicy | None = None,
    session=None,
    limiter=None,
    github: GitHubClient | None = None,
    readme_dir: str | None = None,
    fetch_readmes: bool = True,
) -> RepoRecord:
    """Produce one RepoRecord for a normalized URL.

    A fresh cache entry is returned without touching the network.  GitHub
    repositories that answer accessibly get stars/forks/language, a stored
    README when requested, and the empty-repo heuristic for the
    no-code-content verdict.
    """
    if cache is not None:
        hit = cache.get(url)
        if hit is not None:
            return hit
    platform = identify_platform(url)
    if limiter is not None:
        limiter.acquire()
    outcome = check_accessibility(url, policy=policy, session=session)
    record = _build_record(url, platform, outcome)
    if platform == "GitHub" and outcome.status == "accessible":
        record = _enrich_github(url, outcome, github, readme_dir, fetch_readmes, session, limiter)
    if cache is not None:
        cache.put(record)
    return record


def _build_record(url, platform, outcome: AccessOutcome) -> RepoRecord:
    return RepoRecord(
        normalized_url=url,
        platform=platform,
        accessibility=outcome.status,
        http_status=outcome.http_status,
        checked_at=utc_now_iso(),
    )


def _enrich_github(url, outcome, github, readme_dir, fetch_readmes, session, limiter):
    client = github or GitHubClient(session=session, limiter=limiter)
    try:
        metadata = client.fetch_repo_metadata(parse_github_slug(url))
    except (RepoGone, ValueError):
        return RepoRecord(
            normalized_url=url,
            platform="GitHub",
            accessibility="http_error",
            http_status=404,
            checked_at=utc_now_iso(),
        )
    if metadata.looks_empty:
        return RepoRecord(
            normalized_url=url,
            platform="GitHub",
            accessibility="no_code_content",
            http_status=outcome.http_status,
            checked_at=utc_now_iso(),
        )
    readme_ref = None
    if fetch_readmes and readme_dir:
        fetched = client.fetch_readme(parse_github_slug(url))
        if fetched.status == "ok":
            readme_ref = _store_readme(readme_dir, url, fetched.text)
    return RepoRecord(
        normalized_url=url,
        platform="GitHub",
        accessibility="accessible",
        http_status=outcome.http_status,
        checked_at=utc_now_iso(),
        stars=metadata.stars,
        forks=metadata.forks,
        primary_language=metadata.primary_language,
        readme_ref=readme_ref,
    )
