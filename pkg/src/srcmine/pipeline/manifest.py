"""Stage run manifests: what ran, over what, producing what."""

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

STAGES = ("ingest", "extract", "classify", "probe", "readme", "stats", "report")

# artifact each stage must find before it can run
STAGE_INPUTS = {
    "ingest": (),
    "extract": ("documents.jsonl",),
    "classify": ("documents.jsonl", "mentions.jsonl"),
    "probe": ("verdicts.jsonl",),
    "readme": ("repos.jsonl",),
    "stats": ("documents.jsonl", "verdicts.jsonl", "repos.jsonl"),
    "report": ("report.json",),
}


class DependencyError(Exception):
    """An upstream artifact is missing; names the stage that needs it."""


@dataclass
class RunManifest:
    run_id: str
    stage: str
    inputs: dict = field(default_factory=dict)  # path -> sha256
    outputs: dict = field(default_factory=dict)
    config_fingerprint: str = ""
    started_at: str = ""
    finished_at: str = ""
    counters: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def save(self, directory, name=None):
        os.makedirs(directory, exist_ok=True)
        path = os.path.join(directory, f"{name or self.stage}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
        return path


def load_manifest(directory, stage) -> RunManifest:
    with open(os.path.join(directory, f"{stage}.json"), encoding="utf-8") as fh:
        return RunManifest(**json.load(fh))


def now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def file_sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def require_inputs(stage, out_dir):
    """Check the stage's declared inputs exist; return {path: sha256}."""
    hashes = {}
    for name in STAGE_INPUTS[stage]:
        path = os.path.join(out_dir, name)
        if not os.path.exists(path):
            raise DependencyError(
                f"stage {stage!r} needs {name} (run the upstream stage first)"
            )
        hashes[path] = file_sha256(path)
    return hashes
