"""Persistent probe cache: append-only JSONL keyed by normalized URL.

A fresh cache hit short-circuits the network entirely.  Reads are lock-free
snapshots; writes are serialized and appended, and the latest record for a
URL wins at load time.
"""

import os
import threading
from datetime import datetime, timezone

from srcmine.probe.records import RepoRecord, record_from_json, record_to_json


class ProbeCache:
    def __init__(self, path, ttl_seconds: float = 7 * 24 * 3600.0):
        self.path = str(path)
        self.ttl_seconds = ttl_seconds
        self._lock = threading.Lock()
        self._records = {}
        self._load()

    def _load(self):
        if not os.path.exists(self.path):
            return
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    record = record_from_json(line)
                    self._records[record.normalized_url] = record

    def _is_fresh(self, record: RepoRecord, now=None) -> bool:
        if not record.checked_at:
            return False
        now = now or datetime.now(timezone.utc)
        checked = datetime.fromisoformat(record.checked_at)
        return (now - checked).total_seconds() <= self.ttl_seconds

    def get(self, normalized_url: str) -> RepoRecord | None:
        """The cached record if present and within TTL, else None."""
        record = self._records.get(normalized_url)
        if record is not None and self._is_fresh(record):
            return record
        return None

    def put(self, record: RepoRecord):
        with self._lock:
            self._records[record.normalized_url] = record
            directory = os.path.dirname(self.path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(record_to_json(record) + "\n")

    def __len__(self):
        return len(self._records)
