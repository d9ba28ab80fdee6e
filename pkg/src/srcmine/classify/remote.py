"""Client for a remote sentence classifier speaking the batch wire contract.

Request:  POST {endpoint} with JSON {"sentences": ["...", ...]}
Response: {"results": [{"probability": 0.93, "label": "own_code"}, ...]}
          order-preserving, one result per input sentence.
"""

import time
from dataclasses import dataclass

import requests

from srcmine.classify.model import Prediction


class RemoteClassifierError(Exception):
    pass


class TransportError(RemoteClassifierError):
    """Endpoint unreachable or persistently failing after retries."""


class ProtocolError(RemoteClassifierError):
    """Endpoint reachable but the response violates the wire contract."""


@dataclass
class RetryPolicy:
    attempts: int = 3
    backoff_start: float = 1.0
    backoff_factor: float = 2.0
    timeout: float = 30.0


def _parse_results(payload, n_inputs):
    results = payload.get("results")
    if not isinstance(results, list):
        raise ProtocolError("response has no results list")
    if len(results) != n_inputs:
        raise ProtocolError(
            f"expected {n_inputs} results, got {len(results)}: first missing index {min(len(results), n_inputs)}"
        )
    predictions = []
    for i, entry in enumerate(results):
        try:
            predictions.append(
                Prediction(probability=float(entry["probability"]), label=str(entry["label"]))
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ProtocolError(f"malformed result at index {i}: {exc}") from exc
    return predictions


def classify_batch_remote(
    endpoint: str,
    sentences,
    policy: RetryPolicy | None = None,
    session: requests.Session | None = None,
) -> list:
    """Classify a batch remotely, retrying transport failures with backoff."""
    sentences = list(sentences)
    if not sentences:
        return []
    policy = policy or RetryPolicy()
    session = session or requests.Session()
    delay = policy.backoff_start
    last_error = None
    for attempt in range(policy.attempts):
        if attempt:
            time.sleep(delay)
            delay *= policy.backoff_factor
        try:
            response = session.post(
                endpoint, json={"sentences": sentences}, timeout=policy.timeout
            )
        except requests.RequestException as exc:
            last_error = exc
            continue
        if response.status_code >= 500:
            last_error = TransportError(f"server error {response.status_code}")
            continue
        if response.status_code >= 400:
            raise ProtocolError(f"request rejected with status {response.status_code}")
        try:
            payload = response.json()
        except ValueError as exc:
            raise ProtocolError(f"response is not JSON: {exc}") from exc
        return _parse_results(payload, len(sentences))
    raise TransportError(
        f"batch failed after {policy.attempts} attempts: {last_error}"
    ) from (last_error if isinstance(last_error, Exception) else None)
