"""Pipeline orchestration: configuration, manifests, stages."""

from srcmine.pipeline.config import ConfigError, PipelineConfig, load_config
from srcmine.pipeline.manifest import (
    STAGES,
    DependencyError,
    RunManifest,
    load_manifest,
)
from srcmine.pipeline.stages import StageFailure, run_all, run_stage

__all__ = [
    "ConfigError",
    "DependencyError",
    "PipelineConfig",
    "RunManifest",
    "STAGES",
    "StageFailure",
    "load_config",
    "load_manifest",
    "run_all",
    "run_stage",
]
