"""Run configuration: JSON file, environment, and flag overrides.

Precedence: flags > environment > config file > defaults.  The API token
itself never lives in the config; only the name of the environment
variable that holds it does.
"""

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field


class ConfigError(Exception):
    pass


@dataclass
class PipelineConfig:
    corpus_path: str = ""
    out_dir: str = "out"
    cache_dir: str = "cache"
    seed: int = 0
    jobs: int = 4
    classifier_mode: str = "rules"  # rules | model | remote
    model_path: str = ""
    remote_endpoint: str = ""
    github_base_url: str = "https://api.github.com"
    token_env: str = "GITHUB_TOKEN"
    probe_timeout: float = 10.0
    probe_attempts: int = 3
    probe_backoff_start: float = 1.0
    cache_ttl_seconds: float = 7 * 24 * 3600.0
    rate_capacity: int = 10
    rate_per_second: float = 5.0
    fetch_readmes: bool = True
    keyphrase_top_k: int = 50
    extra: dict = field(default_factory=dict)

    def fingerprint(self) -> str:
        payload = asdict(self)
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()

    def validate(self):
        if self.classifier_mode not in ("rules", "model", "remote"):
            raise ConfigError(f"unknown classifier mode {self.classifier_mode!r}")
        if self.classifier_mode == "model" and not self.model_path:
            raise ConfigError("classifier mode 'model' needs model_path")
        if self.classifier_mode == "remote" and not self.remote_endpoint:
            raise ConfigError("classifier mode 'remote' needs remote_endpoint")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")


_ENV_PREFIX = "SRCMINE_"


def load_config(path=None, env=None, overrides=None) -> PipelineConfig:
    """Merge file, environment (SRCMINE_*), and explicit overrides."""
    env = os.environ if env is None else env
    values = {}
    if path:
        if not os.path.exists(path):
            raise ConfigError(f"config file not found: {path}")
        try:
            with open(path, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config file unreadable: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        values.update(loaded)
    known = {f.name for f in PipelineConfig.__dataclass_fields__.values()}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for name in known:
        env_key = _ENV_PREFIX + name.upper()
        if env_key in env:
            values[name] = _coerce(name, env[env_key])
    for name, value in (overrides or {}).items():
        if value is not None:
            values[name] = value
    try:
        config = PipelineConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    config.validate()
    return config


def _coerce(name, raw):
    kind = PipelineConfig.__dataclass_fields__[name].type
    if kind in (int, "int"):
        return int(raw)
    if kind in (float, "float"):
        return float(raw)
    if kind in (bool, "bool"):
        return raw.lower() in ("1", "true", "yes", "on")
    return raw
