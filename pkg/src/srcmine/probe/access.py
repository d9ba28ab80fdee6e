"""Link-rot probing: classify URL accessibility without raising.

Every outcome is a value.  Full GET rather than HEAD, because enough hosts
answer HEAD incorrectly to poison the statistics.
"""

from dataclasses import dataclass

import requests

_DNS_MARKERS = (
    "name or service not known",
    "nodename nor servname",
    "getaddrinfo",
    "failed to resolve",
    "name resolution",
)


@dataclass
class ProbePolicy:
    attempts: int = 3
    backoff_start: float = 1.0
    backoff_factor: float = 2.0
    timeout: float = 10.0
    max_redirects: int = 5


@dataclass(frozen=True)
class AccessOutcome:
    status: str  # accessible | http_error | timeout | dns_failure | connection_error
    http_status: int | None = None


def _classify_exception(exc) -> str:
    if isinstance(exc, requests.Timeout):
        return "timeout"
    text = str(exc).lower()
    if any(marker in text for marker in _DNS_MARKERS):
        return "dns_failure"
    return "connection_error"


def _attempt(url, policy, session) -> AccessOutcome:
    try:
        response = session.get(url, timeout=policy.timeout, allow_redirects=True)
    except requests.RequestException as exc:
        return AccessOutcome(status=_classify_exception(exc))
    if response.status_code < 400:
        return AccessOutcome(status="accessible", http_status=response.status_code)
    return AccessOutcome(status="http_error", http_status=response.status_code)


def check_accessibility(
    url: str,
    policy: ProbePolicy | None = None,
    session: requests.Session | None = None,
    sleeper=None,
) -> AccessOutcome:
    """GET the URL, following redirects up to the bound, retrying per policy.

    Non-accessible outcomes are retried before the verdict sticks; the last
    outcome wins.
    """
    import time

    policy = policy or ProbePolicy()
    sleeper = sleeper or time.sleep
    if session is None:
        session = requests.Session()
    session.max_redirects = policy.max_redirects
    delay = policy.backoff_start
    outcome = AccessOutcome(status="connection_error")
    for attempt in range(policy.attempts):
        if attempt:
            sleeper(delay)
            delay *= policy.backoff_factor
        outcome = _attempt(url, policy, session)
        if outcome.status == "accessible":
            return outcome
    return outcome
